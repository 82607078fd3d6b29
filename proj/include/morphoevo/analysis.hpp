#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "morphoevo/evolve.hpp"

namespace morphoevo {

std::vector<double> population_mean_fitness(const RunArchive& archive);
std::vector<double> population_max_fitness(const RunArchive& archive);
/// Mean pairwise tree-edit distance of each generation's population.
std::vector<double> diversity_by_generation(const RunArchive& archive);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 * standard error; 0 for a single run
};

/// Per-index mean and 95% band across runs (truncated to the shortest run).
std::vector<MeanCi> mean_ci(const std::vector<std::vector<double>>& runs);

/// Global index (individuals in id order, assessments in learning order) of
/// the first assessment with fitness >= threshold.
std::optional<long> first_assessment_reaching(const RunArchive& archive, double threshold);

struct AnalyzeOptions {
  std::optional<double> threshold;
  bool plot = false;
};

/// Writes fitness.csv, fitness_runs.csv, diversity.csv, traits.csv,
/// learning_delta.csv, pca.csv, and (with fixed archives) mi.csv, plus
/// efficiency.csv when a threshold is given and SVG charts with `plot`.
/// `fixed` may be empty or must pair one-to-one with `runs`.
void write_analysis(const std::filesystem::path& out_dir, const std::vector<std::string>& labels,
                    const std::vector<RunArchive>& runs, const std::vector<RunArchive>& fixed,
                    const AnalyzeOptions& options);

}  // namespace morphoevo
