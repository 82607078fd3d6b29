#include "morphoevo/brain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

namespace morphoevo {

namespace {

constexpr int kCenterRaw = 10 * 21 + 10;

constexpr std::array<std::array<int, 2>, 12> kOffsets{{{-2, 0},
                                                       {-1, -1},
                                                       {-1, 0},
                                                       {-1, 1},
                                                       {0, -2},
                                                       {0, -1},
                                                       {0, 1},
                                                       {0, 2},
                                                       {1, -1},
                                                       {1, 0},
                                                       {1, 1},
                                                       {2, 0}}};

double clamp_weight(double v) { return std::clamp(v, -kBrainWeightMax, kBrainWeightMax); }

}  // namespace

int row(int x, int y) {
  if (x < -kGridHalf || x > kGridHalf || y < -kGridHalf || y > kGridHalf) {
    throw std::out_of_range("cell outside the 21x21 brain grid");
  }
  if (x == 0 && y == 0) throw CenterCell();
  const int raw = (x + 10) * 21 + (y + 10);
  return raw > kCenterRaw ? raw - 1 : raw;
}

std::array<int, 2> cell_of_row(int r) {
  if (r < 0 || r >= kBrainRows) throw std::out_of_range("brain row out of range");
  const int raw = r >= kCenterRaw ? r + 1 : r;
  return {raw / 21 - 10, raw % 21 - 10};
}

int slot(int dx, int dy) {
  for (std::size_t i = 0; i < kOffsets.size(); ++i) {
    if (kOffsets[i][0] == dx && kOffsets[i][1] == dy) return static_cast<int>(i) + 1;
  }
  throw BadOffset();
}

std::array<int, 2> offset_of_slot(int s) {
  if (s < 1 || s > 12) throw BadOffset();
  return kOffsets[static_cast<std::size_t>(s - 1)];
}

BrainGenome::BrainGenome() : weights_(static_cast<std::size_t>(kBrainRows * kBrainSlots), 0.0) {}

std::size_t BrainGenome::index(int r, int s) {
  if (r < 0 || r >= kBrainRows || s < 0 || s >= kBrainSlots) throw std::out_of_range("brain cell out of range");
  return static_cast<std::size_t>(r * kBrainSlots + s);
}

void BrainGenome::set(int r, int s, double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("brain weight must be finite");
  weights_[index(r, s)] = clamp_weight(value);
}

BrainGenome BrainGenome::from_values(std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(kBrainRows * kBrainSlots)) {
    throw ShapeMismatch("brain genome needs exactly 6160 values");
  }
  BrainGenome g;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("brain weight must be finite");
    g.weights_[i] = clamp_weight(values[i]);
  }
  return g;
}

BrainGenome random_brain(Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(kBrainRows * kBrainSlots));
  for (auto& w : v) w = rng.uniform(-1.0, 1.0);
  return BrainGenome::from_values(v);
}

BrainGenome inherit_brain(const BrainGenome& parent_a, const BrainGenome& parent_b, const BrainMutationConfig& cfg,
                          Rng& rng) {
  const auto a = parent_a.values();
  const auto b = parent_b.values();
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double w = rng.bernoulli(0.5) ? b[i] : a[i];
    if (rng.bernoulli(cfg.rate)) w += rng.normal(0.0, cfg.sigma);
    v[i] = w;
  }
  return BrainGenome::from_values(v);
}

CpgLayout cpg_layout(const MorphologyTree& body) {
  CpgLayout layout;
  std::map<CellRef, std::size_t> cell_index;
  auto use = [&](CellRef c) {
    auto [it, inserted] = cell_index.try_emplace(c, layout.cells.size());
    if (inserted) layout.cells.push_back(c);
    return it->second;
  };

  for (int i = 0; i < body.size(); ++i) {
    const Module& m = body.module(i);
    if (m.kind != ModuleKind::ActiveHinge) continue;
    const int x = m.position[0];
    const int y = m.position[1];
    // A hinge stacked over the core has no row of its own; it stays passive.
    if (x == 0 && y == 0) continue;
    // Stacked joints map to the same row and therefore share the internal weight.
    layout.joints.push_back({i, x, y, use({row(x, y), kInternalSlot})});
  }
  for (std::size_t j = 0; j < layout.joints.size(); ++j) {
    for (std::size_t k = j + 1; k < layout.joints.size(); ++k) {
      const auto& a = layout.joints[j];
      const auto& b = layout.joints[k];
      const int dx = b.x - a.x;
      const int dy = b.y - a.y;
      const int manhattan = std::abs(dx) + std::abs(dy);
      if (manhattan > 2) continue;
      const int s = manhattan == 0 ? kStackedSlot : slot(dx, dy);
      layout.couplings.push_back({j, k, use({row(a.x, a.y), s})});
    }
  }
  return layout;
}

std::vector<double> extract_weights(const CpgLayout& layout, const BrainGenome& genome) {
  std::vector<double> w;
  w.reserve(layout.cells.size());
  for (const auto& c : layout.cells) w.push_back(genome.at(c.row, c.slot));
  return w;
}

CpgNetwork instantiate(const CpgLayout& layout, std::span<const double> weights) {
  if (weights.size() != layout.cells.size()) throw ShapeMismatch("weight vector does not match layout");
  CpgNetwork net;
  const double init = std::sqrt(2.0) / 2.0;
  for (const auto& j : layout.joints) {
    net.joint_modules.push_back(j.module);
    net.joint_cells.push_back({j.x, j.y});
    net.internal.push_back(weights[j.weight]);
    net.internal_source.push_back(layout.cells[j.weight]);
  }
  for (const auto& c : layout.couplings) {
    net.couplings.push_back({c.j, c.k, weights[c.weight], layout.cells[c.weight]});
  }
  net.x.assign(net.size(), init);
  net.y.assign(net.size(), init);
  return net;
}

CpgNetwork build_cpg(const MorphologyTree& body, const BrainGenome& genome) {
  const CpgLayout layout = cpg_layout(body);
  return instantiate(layout, extract_weights(layout, genome));
}

BrainGenome writeback(const BrainGenome& genome, const MorphologyTree& body, const CpgNetwork& learned) {
  const CpgLayout layout = cpg_layout(body);
  const std::vector<CellRef> allowed(layout.cells.begin(), layout.cells.end());
  auto check = [&](const CellRef& c) {
    if (std::find(allowed.begin(), allowed.end(), c) == allowed.end()) {
      throw ShapeMismatch("learned network references a cell the body does not address");
    }
  };
  BrainGenome out = genome;
  for (std::size_t i = 0; i < learned.size(); ++i) {
    check(learned.internal_source[i]);
    out.set(learned.internal_source[i].row, learned.internal_source[i].slot, learned.internal[i]);
  }
  for (const auto& c : learned.couplings) {
    check(c.source);
    out.set(c.source.row, c.source.slot, c.weight);
  }
  return out;
}

}  // namespace morphoevo
