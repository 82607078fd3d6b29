#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphoevo/brain.hpp"
#include "morphoevo/cppn.hpp"
#include "morphoevo/decode.hpp"
#include "morphoevo/learn.hpp"
#include "morphoevo/morphology.hpp"
#include "morphoevo/rng.hpp"
#include "morphoevo/simulate.hpp"

namespace morphoevo {

enum class InheritanceSystem : std::uint8_t { Lamarckian, Darwinian };

std::string to_string(InheritanceSystem s);
InheritanceSystem inheritance_system_from_string(const std::string& s);

struct EvoConfig {
  int pop_size = 50;
  int offspring = 25;
  int generations = 30;
  int tournament_k = 2;
  InheritanceSystem system = InheritanceSystem::Lamarckian;
  QueryMechanism query = QueryMechanism::Bfs;
  std::uint64_t master_seed = 0;
  bool fixed_body = false;
  int jobs = 1;

  LearnConfig learn;
  BodyMutationConfig body_mutation;
  BrainMutationConfig brain_mutation;
  TaskSpec task;
  SurrogateParams surrogate;

  void validate() const;
  /// pop 16, offspring 8, generations 10, mu 6, learning iterations 5.
  static EvoConfig desk_scale();
};

struct Individual {
  int id = 0;
  int generation = 0;
  std::optional<std::array<int, 2>> parents;
  int lineage_slot = 0;
  std::optional<CppnGenome> body_genome;  // empty in fixed-body runs
  std::uint64_t decode_seed = 0;
  MorphologyTree body;
  std::uint64_t body_hash = 0;
  BrainGenome brain;  // heritable genome after this individual's lifetime
  double fitness_before = 0.0;
  double fitness_after = 0.0;
  bool written_back = false;
  std::vector<double> learning_history;
};

struct GenerationRecord {
  int generation = 0;
  std::vector<int> population;  // ids, survivor order
};

struct RunArchive {
  EvoConfig config;
  std::vector<Individual> individuals;  // indexed by id
  std::vector<GenerationRecord> generations;

  long assessments() const;
  const Individual& individual(int id) const { return individuals.at(static_cast<std::size_t>(id)); }
};

class BodyCountMismatch : public std::invalid_argument {
 public:
  BodyCountMismatch() : std::invalid_argument("fixed-body run needs exactly pop_size bodies") {}
};

/// Best fitness_after among k distinct uniform draws; ties go to the lower id.
const Individual& select_tournament(std::span<const Individual* const> pool, int k, Rng& rng);

RunArchive run(const EvoConfig& cfg);
/// Brains evolve and learn; bodies stay pinned to their lineage slot.
RunArchive run_fixed_body(const EvoConfig& cfg, std::span<const MorphologyTree> bodies);

}  // namespace morphoevo
