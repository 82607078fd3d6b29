#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "morphoevo/evolve.hpp"
#include "morphoevo/morphology.hpp"

namespace morphoevo {

/// Ordered labelled tree; node 0 is the root, children listed left to right.
struct LabeledTree {
  std::vector<int> labels;
  std::vector<std::vector<int>> children;
};

/// Labels are (kind, rotation); children ordered by socket index.
LabeledTree labeled_tree(const MorphologyTree& tree);

/// Zhang-Shasha edit distance with unit insert, delete and relabel costs.
int tree_edit_distance(const LabeledTree& a, const LabeledTree& b);
int tree_edit_distance(const MorphologyTree& a, const MorphologyTree& b);

/// Mean pairwise distance; 0 for fewer than two bodies.
double mean_pairwise_distance(std::span<const MorphologyTree> bodies);

inline constexpr std::array<const char*, 8> kTraitNames{
    "branching",   "rel_num_limbs",  "rel_length_of_limbs", "coverage",
    "rel_num_joints", "rel_num_bricks", "proportion_2d",      "symmetry"};

struct TraitVector {
  double branching = 0.0;
  double rel_num_limbs = 0.0;
  double rel_length_of_limbs = 0.0;
  double coverage = 0.0;
  double rel_num_joints = 0.0;
  double rel_num_bricks = 0.0;
  double proportion_2d = 0.0;
  double symmetry = 0.0;

  std::array<double, 8> as_array() const {
    return {branching, rel_num_limbs, rel_length_of_limbs, coverage,
            rel_num_joints, rel_num_bricks, proportion_2d, symmetry};
  }
};

TraitVector traits(const MorphologyTree& body);

/// Largest number of leaves a body of `modules` modules can have.
int max_limbs(int modules);

double learning_delta(const Individual& ind);

/// Mean learning delta of the individuals born in each generation.
std::vector<double> learning_delta_by_generation(const RunArchive& archive);

/// evolved - fixed, per generation (truncated to the shorter archive).
std::vector<double> morphological_intelligence(const RunArchive& evolved, const RunArchive& fixed);
std::vector<double> morphological_intelligence(std::span<const double> evolved_deltas,
                                               std::span<const double> fixed_deltas);

/// Least-squares slope of y against 0..n-1.
double trend_slope(std::span<const double> y);

class TooFewSamples : public std::invalid_argument {
 public:
  TooFewSamples() : std::invalid_argument("PCA needs at least 3 samples") {}
};

struct PcaResult {
  std::vector<std::size_t> kept_columns;       // original column index per standardized column
  std::vector<std::vector<double>> components;  // orthonormal, descending variance; each sized kept_columns
  std::vector<double> eigenvalues;
  std::vector<double> explained;                // fraction of total variance
  std::vector<std::vector<double>> standardized;  // samples x kept columns
  std::vector<std::vector<double>> scores;        // samples x components

  /// Loading of original column `c` on component `pc` (0 for dropped columns).
  double loading(std::size_t pc, std::size_t c) const;
};

/// Standardize (constant columns dropped), eigendecompose the covariance.
/// The largest-magnitude loading of every component is positive.
PcaResult pca(const std::vector<std::vector<double>>& samples);
PcaResult pca_traits(std::span<const TraitVector> samples);

}  // namespace morphoevo
