#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "morphoevo/morphology.hpp"
#include "morphoevo/rng.hpp"

namespace morphoevo {

inline constexpr int kBrainRows = 440;  // 21 * 21 grid cells minus the core's
inline constexpr int kBrainSlots = 14;  // internal, 12 neighbour offsets, stacked
inline constexpr int kInternalSlot = 0;
inline constexpr int kStackedSlot = 13;
inline constexpr double kBrainWeightMax = 4.0;

class CenterCell : public std::invalid_argument {
 public:
  CenterCell() : std::invalid_argument("the core cell (0, 0) has no brain row") {}
};

class BadOffset : public std::invalid_argument {
 public:
  BadOffset() : std::invalid_argument("offset is not a nonzero Manhattan-radius-2 neighbour") {}
};

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row of grid cell (x, y) in [-10, 10]^2 \ {(0, 0)}.
int row(int x, int y);
std::array<int, 2> cell_of_row(int r);
/// Slot 1..12 of neighbour offset (dx, dy), lexicographic over the offsets.
int slot(int dx, int dy);
std::array<int, 2> offset_of_slot(int s);

/// Direct-encoded CPG weights, 440 x 14, row-major.
class BrainGenome {
 public:
  BrainGenome();  // all zeros

  double at(int r, int s) const { return weights_[index(r, s)]; }
  /// Stores the value clamped to [-w_max, w_max].
  void set(int r, int s, double value);

  std::span<const double> values() const { return weights_; }
  /// Throws ShapeMismatch on wrong length; clamps all entries.
  static BrainGenome from_values(std::span<const double> values);

  friend bool operator==(const BrainGenome&, const BrainGenome&) = default;

 private:
  static std::size_t index(int r, int s);
  std::vector<double> weights_;
};

BrainGenome random_brain(Rng& rng);

struct BrainMutationConfig {
  double rate = 0.8;
  double sigma = 0.5;
  static BrainMutationConfig none() { return {0.0, 0.0}; }
};

/// Per-cell uniform parent pick, then Gaussian mutation, clamped.
BrainGenome inherit_brain(const BrainGenome& parent_a, const BrainGenome& parent_b, const BrainMutationConfig& cfg,
                          Rng& rng);

struct CellRef {
  int row = 0;
  int slot = 0;
  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

/// Which genome cells a body reads and how they wire into the CPG network.
struct CpgLayout {
  struct Joint {
    int module = 0;
    int x = 0;
    int y = 0;
    std::size_t weight = 0;  // index into `cells`
  };
  struct Coupling {
    std::size_t j = 0;  // joint indices, j < k
    std::size_t k = 0;
    std::size_t weight = 0;
  };
  std::vector<Joint> joints;
  std::vector<Coupling> couplings;
  std::vector<CellRef> cells;  // distinct cells, in first-use order
};

CpgLayout cpg_layout(const MorphologyTree& body);

/// Runtime oscillator network. Coupling (j, k, w) adds w * x_j to dx_k and
/// -w * x_k to dx_j.
struct CpgNetwork {
  struct Coupling {
    std::size_t j = 0;
    std::size_t k = 0;
    double weight = 0.0;
    CellRef source;
  };
  std::vector<int> joint_modules;
  std::vector<std::array<int, 2>> joint_cells;
  std::vector<double> internal;
  std::vector<CellRef> internal_source;
  std::vector<Coupling> couplings;
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return internal.size(); }
};

std::vector<double> extract_weights(const CpgLayout& layout, const BrainGenome& genome);
CpgNetwork instantiate(const CpgLayout& layout, std::span<const double> weights);
CpgNetwork build_cpg(const MorphologyTree& body, const BrainGenome& genome);

/// Copies the network's weights into their source cells; other cells untouched.
BrainGenome writeback(const BrainGenome& genome, const MorphologyTree& body, const CpgNetwork& learned);

}  // namespace morphoevo
