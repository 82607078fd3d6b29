#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "morphoevo/brain.hpp"
#include "morphoevo/morphology.hpp"
#include "morphoevo/rng.hpp"
#include "morphoevo/simulate.hpp"

namespace morphoevo {

struct LearnConfig {
  int mu = 10;
  /// Learning generations, counting the initial evaluation.
  int iterations = 10;
  double scale = 0.5;  // F
  double crossover_rate = 0.9;
  double init_sigma = 0.3;
  double weight_bound = kBrainWeightMax;

  void validate() const;
  /// mu + (iterations - 1) * 3 * mu
  long assessments() const;
};

class DegeneratePopulation : public std::invalid_argument {
 public:
  DegeneratePopulation() : std::invalid_argument("RevDE needs a population of at least 4") {}
};

struct Assessment {
  long index = 0;
  double fitness = 0.0;
};

struct WeightVector {
  std::vector<double> values;
  std::vector<CellRef> cells;
};

struct LearnResult {
  std::vector<double> best;
  double best_fitness = 0.0;
  /// Fitness of the unperturbed starting vector (assessment 0).
  double initial_fitness = 0.0;
  std::vector<Assessment> history;
};

using Objective = std::function<double(std::span<const double>)>;

/// The reversible differential mutation of one triplet.
std::array<std::vector<double>, 3> revde_triplet(std::span<const double> wi, std::span<const double> wj,
                                                 std::span<const double> wk, double scale);

/// Maximises `objective` starting from `initial` (kept as sample 0).
LearnResult revde(std::span<const double> initial, const Objective& objective, const LearnConfig& cfg, Rng& rng);

struct BodyLearnResult {
  WeightVector best;
  LearnResult result;
  CpgNetwork network;  // learned network, ready for writeback
};

/// Lifetime learning of the CPG weights a body actually uses.
BodyLearnResult learn(const MorphologyTree& body, const BrainGenome& inherited, const LearnConfig& cfg,
                      const TaskSpec& task, const SurrogateParams& params, Rng& rng);

}  // namespace morphoevo
