#pragma once

#include <array>
#include <vector>

#include "morphoevo/brain.hpp"
#include "morphoevo/morphology.hpp"

namespace morphoevo {

using Point2 = std::array<double, 2>;

double dist(const Point2& a, const Point2& b);

struct TaskSpec {
  std::vector<Point2> targets{{1.0, -1.0}, {0.0, -2.0}};
  double duration = 40.0;
  double sample_rate = 5.0;
  double reach_radius = 0.01;
  double arena_half = 5.0;
  double omega = 0.1;

  void validate() const;
};

/// Kinematic stand-in for the physics engine.
struct SurrogateParams {
  double v_max = 0.15;
  double k_turn = 2.0;
  double k_steer = 0.8;
  double dt = 0.01;

  void validate(const TaskSpec& task) const;
};

/// min(1, driven joints / 4); hinges over the core cell are passive.
double morph_factor(const MorphologyTree& body);

struct TrajectorySample {
  double t = 0.0;
  double px = 0.0;
  double py = 0.0;
  int target_index = 0;  // index of the target being pursued at time t
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  int targets_reached = 0;
  double path_length = 0.0;
  Point2 final_position{0.0, 0.0};
};

/// Sum of consecutive sample distances.
double path_length(const std::vector<TrajectorySample>& samples);

/// Task fitness: distance covered along reached targets, progress toward the
/// next one, minus omega times path length.
double fitness_of(const Trajectory& traj, const TaskSpec& task);

/// Time derivative of the oscillator state.
void cpg_derivative(const CpgNetwork& net, const std::vector<double>& x, const std::vector<double>& y,
                    std::vector<double>& dx, std::vector<double>& dy);
/// One RK4 step in place.
void step_cpg(CpgNetwork& net, double dt);
double cpg_output(const CpgNetwork& net, std::size_t joint);  // tanh(x)

struct Evaluation {
  double fitness = 0.0;
  Trajectory trajectory;
};

/// Closed-loop rollout of a prebuilt network on `body`.
Evaluation evaluate_network(const MorphologyTree& body, CpgNetwork net, const TaskSpec& task,
                            const SurrogateParams& params);
Evaluation evaluate(const MorphologyTree& body, const BrainGenome& genome, const TaskSpec& task,
                    const SurrogateParams& params);

}  // namespace morphoevo
