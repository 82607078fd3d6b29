#include "morphoevo/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace morphoevo {

double dist(const Point2& a, const Point2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

void TaskSpec::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("task duration must be positive");
  if (targets.empty()) throw std::invalid_argument("task needs at least one target");
  if (!(reach_radius > 0.0)) throw std::invalid_argument("reach radius must be positive");
  if (!(sample_rate > 0.0) || !(arena_half > 0.0)) throw std::invalid_argument("bad sample rate or arena size");
}

void SurrogateParams::validate(const TaskSpec& task) const {
  if (!(v_max > 0.0) || !(k_turn > 0.0) || !(k_steer > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("surrogate parameters must be positive");
  }
  const double per_sample = 1.0 / (task.sample_rate * dt);
  if (std::abs(per_sample - std::round(per_sample)) > 1e-9) {
    throw std::invalid_argument("dt must divide the sample interval");
  }
}

double morph_factor(const MorphologyTree& body) {
  int driven = 0;
  for (const auto& m : body.modules()) {
    driven += m.kind == ModuleKind::ActiveHinge && (m.position[0] != 0 || m.position[1] != 0);
  }
  return std::min(1.0, driven / 4.0);
}

double path_length(const std::vector<TrajectorySample>& samples) {
  double total = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    total += std::hypot(samples[i].px - samples[i - 1].px, samples[i].py - samples[i - 1].py);
  }
  return total;
}

double fitness_of(const Trajectory& traj, const TaskSpec& task) {
  const int n = static_cast<int>(task.targets.size());
  const int k = std::clamp(traj.targets_reached, 0, n);
  auto point = [&](int i) { return i == 0 ? Point2{0.0, 0.0} : task.targets[static_cast<std::size_t>(i - 1)]; };
  double f = 0.0;
  for (int i = 1; i <= k; ++i) f += dist(point(i), point(i - 1));
  if (k < n) f += dist(point(k + 1), point(k)) - dist(traj.final_position, point(k + 1));
  return f - task.omega * traj.path_length;
}

void cpg_derivative(const CpgNetwork& net, const std::vector<double>& x, const std::vector<double>& y,
                    std::vector<double>& dx, std::vector<double>& dy) {
  const std::size_t n = net.size();
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = net.internal[i] * y[i];
    dy[i] = -net.internal[i] * x[i];
  }
  for (const auto& c : net.couplings) {
    dx[c.k] += c.weight * x[c.j];
    dx[c.j] -= c.weight * x[c.k];
  }
}

namespace {

struct RkScratch {
  std::vector<double> k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, tx, ty;
  explicit RkScratch(std::size_t n)
      : k1x(n), k1y(n), k2x(n), k2y(n), k3x(n), k3y(n), k4x(n), k4y(n), tx(n), ty(n) {}
};

void rk4_step(CpgNetwork& net, double dt, RkScratch& s) {
  const std::size_t n = net.size();
  if (n == 0) return;
  cpg_derivative(net, net.x, net.y, s.k1x, s.k1y);
  for (std::size_t i = 0; i < n; ++i) {
    s.tx[i] = net.x[i] + 0.5 * dt * s.k1x[i];
    s.ty[i] = net.y[i] + 0.5 * dt * s.k1y[i];
  }
  cpg_derivative(net, s.tx, s.ty, s.k2x, s.k2y);
  for (std::size_t i = 0; i < n; ++i) {
    s.tx[i] = net.x[i] + 0.5 * dt * s.k2x[i];
    s.ty[i] = net.y[i] + 0.5 * dt * s.k2y[i];
  }
  cpg_derivative(net, s.tx, s.ty, s.k3x, s.k3y);
  for (std::size_t i = 0; i < n; ++i) {
    s.tx[i] = net.x[i] + dt * s.k3x[i];
    s.ty[i] = net.y[i] + dt * s.k3y[i];
  }
  cpg_derivative(net, s.tx, s.ty, s.k4x, s.k4y);
  for (std::size_t i = 0; i < n; ++i) {
    net.x[i] += dt / 6.0 * (s.k1x[i] + 2.0 * s.k2x[i] + 2.0 * s.k3x[i] + s.k4x[i]);
    net.y[i] += dt / 6.0 * (s.k1y[i] + 2.0 * s.k2y[i] + 2.0 * s.k3y[i] + s.k4y[i]);
  }
}

}  // namespace

void step_cpg(CpgNetwork& net, double dt) {
  RkScratch scratch(net.size());
  rk4_step(net, dt, scratch);
}

double cpg_output(const CpgNetwork& net, std::size_t joint) { return std::tanh(net.x[joint]); }

namespace {

// Into (-pi, pi]; inputs are differences of two angles in (-pi, pi] plus drift.
double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (a > std::numbers::pi || a <= -std::numbers::pi) {
    a = std::fmod(a + std::numbers::pi, kTwoPi);
    if (a <= 0.0) a += kTwoPi;
    a -= std::numbers::pi;
  }
  return a;
}

bool within(double px, double py, const Point2& t, double radius) {
  const double dx = px - t[0];
  const double dy = py - t[1];
  return dx * dx + dy * dy <= radius * radius;
}

}  // namespace

Evaluation evaluate_network(const MorphologyTree& body, CpgNetwork net, const TaskSpec& task,
                            const SurrogateParams& params) {
  task.validate();
  params.validate(task);

  const std::size_t n = net.size();
  std::vector<int> side(n, 0);  // +1 right (x > 0), -1 left, 0 centre line
  int n_right = 0, n_left = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int x = net.joint_cells[i][0];
    side[i] = (x > 0) - (x < 0);
    n_right += side[i] > 0;
    n_left += side[i] < 0;
  }
  const double speed_scale = params.v_max * morph_factor(body);

  const auto steps = static_cast<long>(std::llround(task.duration / params.dt));
  const auto steps_per_sample = static_cast<long>(std::llround(1.0 / (task.sample_rate * params.dt)));

  Trajectory traj;
  double px = 0.0, py = 0.0;
  const Point2& first = task.targets.front();
  double theta = std::atan2(first[1], first[0]);
  std::size_t current = 0;
  traj.samples.push_back({0.0, px, py, 0});

  std::vector<double> scale(n, 1.0);
  RkScratch scratch(n);
  for (long step = 1; step <= steps; ++step) {
    double beta = 0.0;
    if (current < task.targets.size()) {
      const Point2& t = task.targets[current];
      beta = wrap_angle(std::atan2(t[1] - py, t[0] - px) - theta);
    }
    // Slow the joints on the side of the target.
    const double slow = 1.0 - params.k_steer * std::min(std::abs(beta), std::numbers::pi) / std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
      scale[i] = (beta < 0.0 && side[i] > 0) || (beta > 0.0 && side[i] < 0) ? slow : 1.0;
    }

    rk4_step(net, params.dt, scratch);

    double sum = 0.0, right = 0.0, left = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double act = scale[i] * std::abs(cpg_output(net, i));
      sum += act;
      if (side[i] > 0) right += act;
      if (side[i] < 0) left += act;
    }
    const double v = n == 0 ? 0.0 : speed_scale * sum / static_cast<double>(n);
    const double mean_right = n_right > 0 ? right / n_right : 0.0;
    const double mean_left = n_left > 0 ? left / n_left : 0.0;
    // A stronger left side yaws the body clockwise (toward the right).
    const double omega = params.k_turn * (mean_right - mean_left);

    px = std::clamp(px + v * std::cos(theta) * params.dt, -task.arena_half, task.arena_half);
    py = std::clamp(py + v * std::sin(theta) * params.dt, -task.arena_half, task.arena_half);
    theta = wrap_angle(theta + omega * params.dt);

    while (current < task.targets.size() && within(px, py, task.targets[current], task.reach_radius)) {
      ++current;
    }
    if (step % steps_per_sample == 0) {
      traj.samples.push_back({static_cast<double>(step) * params.dt, px, py, static_cast<int>(current)});
    }
  }

  traj.targets_reached = static_cast<int>(current);
  traj.path_length = path_length(traj.samples);
  traj.final_position = {px, py};
  Evaluation out;
  out.fitness = fitness_of(traj, task);
  out.trajectory = std::move(traj);
  return out;
}

Evaluation evaluate(const MorphologyTree& body, const BrainGenome& genome, const TaskSpec& task,
                    const SurrogateParams& params) {
  return evaluate_network(body, build_cpg(body, genome), task, params);
}

}  // namespace morphoevo
