#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "morphoevo/evolve.hpp"
#include "morphoevo/serialize.hpp"

namespace morphoevo {

inline constexpr int kArchiveSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "morphoevo 0.1.0";

inline constexpr const char* kGenerationCsvHeader =
    "generation,individual_id,parents,fitness_before,fitness_after,n_modules,n_joints,body_hash";
inline constexpr const char* kLearningLogHeader = "robot_id,assessment,fitness";

ordered_json to_json(const EvoConfig& cfg);
/// Missing keys keep their defaults.
EvoConfig evo_config_from_json(const ordered_json& j);

/// Directory layout:
///   config.json        config snapshot, schema and code version
///   individuals.csv    every individual created (generation = birth generation)
///   population.csv     survivors of every generation
///   learning_log.csv   every learning assessment
///   genomes.jsonl      per individual: body genome, decode seed, morphology, writeback flag
///   brains/<id>.bin    brain genomes of generation 0 and of the final population
void write_archive(const std::filesystem::path& dir, const RunArchive& archive);

/// Individuals without a stored brain file get an all-zero brain.
RunArchive read_archive(const std::filesystem::path& dir);

/// Bodies of the generation-0 individuals, in id order.
std::vector<MorphologyTree> generation_zero_bodies(const RunArchive& archive);

/// Returns a list of problems; empty when the archive is well formed.
std::vector<std::string> check_archive(const std::filesystem::path& dir);

}  // namespace morphoevo
