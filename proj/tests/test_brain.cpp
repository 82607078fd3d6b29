#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <set>

#include "morphoevo/brain.hpp"
#include "morphoevo/serialize.hpp"
#include "support.hpp"

using namespace morphoevo;
namespace t = morphoevo::testing;

TEST_CASE("row examples and errors") {
  CHECK(row(-10, -10) == 0);
  CHECK(row(-10, -9) == 1);
  CHECK(row(-9, -10) == 21);
  CHECK(row(0, -1) == 219);
  CHECK(row(0, 1) == 220);
  CHECK(row(10, 10) == 439);
  CHECK_THROWS_AS(row(0, 0), CenterCell);
  CHECK_THROWS(row(11, 0));
  CHECK_THROWS(row(0, -11));
}

TEST_CASE("row is a bijection onto 0..439") {
  std::set<int> seen;
  for (int x = -10; x <= 10; ++x) {
    for (int y = -10; y <= 10; ++y) {
      if (x == 0 && y == 0) continue;
      const int r = row(x, y);
      REQUIRE(r >= 0);
      REQUIRE(r < kBrainRows);
      seen.insert(r);
      CHECK(cell_of_row(r) == std::array<int, 2>{x, y});
    }
  }
  CHECK(seen.size() == 440);
}

TEST_CASE("slot enumerates the twelve radius-2 offsets lexicographically") {
  // Built independently: every (dx, dy) with 1 <= |dx| + |dy| <= 2, sorted.
  std::vector<std::array<int, 2>> offsets;
  for (int dx = -2; dx <= 2; ++dx) {
    for (int dy = -2; dy <= 2; ++dy) {
      const int m = std::abs(dx) + std::abs(dy);
      if (m >= 1 && m <= 2) offsets.push_back({dx, dy});
    }
  }
  REQUIRE(offsets.size() == 12);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    CHECK(slot(offsets[i][0], offsets[i][1]) == static_cast<int>(i) + 1);
    CHECK(offset_of_slot(static_cast<int>(i) + 1) == offsets[i]);
  }
  CHECK(slot(-2, 0) == 1);
  CHECK(slot(2, 0) == 12);
  CHECK_THROWS_AS(slot(0, 0), BadOffset);
  CHECK_THROWS_AS(slot(2, 1), BadOffset);
  CHECK_THROWS_AS(slot(0, 3), BadOffset);
}

TEST_CASE("plus shape wires six couplings") {
  Rng rng(1);
  const BrainGenome g = random_brain(rng);
  const MorphologyTree body = t::plus_shape();
  const CpgNetwork net = build_cpg(body, g);
  REQUIRE(net.size() == 4);
  CHECK(net.joint_modules == std::vector<int>{1, 2, 3, 4});
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = net.joint_cells[i];
    CHECK(net.internal[i] == g.at(row(c[0], c[1]), 0));
    CHECK(net.x[i] == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(net.y[i] == net.x[i]);
  }
  // (j, k, source row cell, slot) worked out by hand from the cell offsets.
  struct Expect {
    std::size_t j, k;
    int cx, cy, slot;
  };
  const std::vector<Expect> expected{{0, 1, 0, 1, 9},  {0, 2, 0, 1, 5},  {0, 3, 0, 1, 2},
                                     {1, 2, 1, 0, 2},  {1, 3, 1, 0, 1},  {2, 3, 0, -1, 4}};
  REQUIRE(net.couplings.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& c = net.couplings[i];
    const auto& e = expected[i];
    CHECK(c.j == e.j);
    CHECK(c.k == e.k);
    CHECK(c.source == CellRef{row(e.cx, e.cy), e.slot});
    CHECK(c.weight == g.at(row(e.cx, e.cy), e.slot));
  }
  CHECK(cpg_layout(body).cells.size() == 10);
}

TEST_CASE("jointless body yields an empty network") {
  Rng rng(2);
  const CpgNetwork net = build_cpg(t::straight_line(), random_brain(rng));
  CHECK(net.size() == 0);
  CHECK(net.couplings.empty());
  CHECK(build_cpg(MorphologyTree{}, BrainGenome{}).size() == 0);
}

TEST_CASE("stacked joints share an internal cell and couple through slot 13") {
  Rng rng(3);
  const BrainGenome g = random_brain(rng);
  const CpgLayout layout = cpg_layout(t::stacked_joints());
  REQUIRE(layout.joints.size() == 2);
  CHECK(layout.joints[0].weight == layout.joints[1].weight);
  REQUIRE(layout.couplings.size() == 1);
  CHECK(layout.cells.size() == 2);
  CHECK(layout.cells[layout.couplings[0].weight] == CellRef{row(1, 0), kStackedSlot});
  const CpgNetwork net = build_cpg(t::stacked_joints(), g);
  CHECK(net.internal[0] == net.internal[1]);
  CHECK(net.couplings[0].weight == g.at(row(1, 0), kStackedSlot));
}

TEST_CASE("cells the body does not address do not affect the network") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const MorphologyTree body = t::random_body(rng, 10);
    const BrainGenome g = random_brain(rng);
    const CpgLayout layout = cpg_layout(body);
    const std::set<CellRef> used(layout.cells.begin(), layout.cells.end());
    BrainGenome masked = g;
    for (int r = 0; r < kBrainRows; ++r) {
      for (int s = 0; s < kBrainSlots; ++s) {
        if (!used.count({r, s})) masked.set(r, s, rng.uniform(-4, 4));
      }
    }
    const CpgNetwork a = build_cpg(body, g), b = build_cpg(body, masked);
    CHECK(a.internal == b.internal);
    REQUIRE(a.couplings.size() == b.couplings.size());
    for (std::size_t i = 0; i < a.couplings.size(); ++i) CHECK(a.couplings[i].weight == b.couplings[i].weight);
  }
}

TEST_CASE("inherit brain") {
  Rng rng(5);
  const BrainGenome g = random_brain(rng);
  CHECK(inherit_brain(g, g, BrainMutationConfig::none(), rng) == g);

  BrainGenome a, b;
  for (int r = 0; r < kBrainRows; ++r) {
    for (int s = 0; s < kBrainSlots; ++s) {
      a.set(r, s, 1.0);
      b.set(r, s, -1.0);
    }
  }
  const BrainGenome child = inherit_brain(a, b, BrainMutationConfig::none(), rng);
  long from_a = 0;
  for (double v : child.values()) from_a += v > 0;
  CHECK(std::abs(static_cast<double>(from_a) / 6160.0 - 0.5) < 0.02);

  BrainGenome hi, lo;
  for (int r = 0; r < kBrainRows; ++r) {
    for (int s = 0; s < kBrainSlots; ++s) {
      hi.set(r, s, 3.9);
      lo.set(r, s, -3.9);
    }
  }
  BrainMutationConfig wild{1.0, 5.0};
  for (int i = 0; i < 5; ++i) {
    for (double v : inherit_brain(hi, lo, wild, rng).values()) REQUIRE(std::abs(v) <= kBrainWeightMax);
  }
  BrainGenome c;
  c.set(0, 0, 17.0);
  CHECK(c.at(0, 0) == 4.0);
  CHECK_THROWS_AS(BrainGenome::from_values(std::vector<double>(10, 0.0)), ShapeMismatch);
}

TEST_CASE("writeback examples") {
  Rng rng(6);
  const BrainGenome g = random_brain(rng);
  const MorphologyTree body = t::plus_shape();
  CpgNetwork net = build_cpg(body, g);
  CHECK(writeback(g, body, net) == g);

  // Joint 1 sits at (1,0).
  REQUIRE(net.joint_cells[1] == std::array<int, 2>{1, 0});
  net.internal[1] = 1.7;
  const BrainGenome w = writeback(g, body, net);
  CHECK(w.at(row(1, 0), 0) == 1.7);
  int changed = 0;
  for (std::size_t i = 0; i < g.values().size(); ++i) changed += g.values()[i] != w.values()[i];
  CHECK(changed == 1);

  CpgNetwork foreign = build_cpg(t::stacked_joints(), g);
  CHECK_THROWS_AS(writeback(g, body, foreign), ShapeMismatch);
}

TEST_CASE("build, perturb, writeback, build reproduces the perturbed network") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const MorphologyTree body = t::random_body(rng, 10);
    const BrainGenome g = random_brain(rng);
    const CpgLayout layout = cpg_layout(body);
    std::vector<double> w = extract_weights(layout, g);
    for (double& v : w) v = std::clamp(v + rng.normal(0, 1), -4.0, 4.0);
    const CpgNetwork perturbed = instantiate(layout, w);
    const CpgNetwork rebuilt = build_cpg(body, writeback(g, body, perturbed));
    CHECK(rebuilt.internal == perturbed.internal);
    REQUIRE(rebuilt.couplings.size() == perturbed.couplings.size());
    for (std::size_t i = 0; i < rebuilt.couplings.size(); ++i) {
      CHECK(rebuilt.couplings[i].weight == perturbed.couplings[i].weight);
    }
    CHECK(extract_weights(layout, writeback(g, body, perturbed)) == w);
  }
}

TEST_CASE("brain file round-trip") {
  Rng rng(8);
  const BrainGenome g = random_brain(rng);
  const auto path = std::filesystem::temp_directory_path() / "morphoevo_brain_test.bin";
  write_brain_file(path, g, 1234);
  CHECK(std::filesystem::file_size(path) == 4 + 8 + 8 + 6160 * 8);
  const BrainFile f = read_brain_file(path);
  CHECK(f.version == kBrainFileVersion);
  CHECK(f.w_max == 4.0);
  CHECK(f.seed == 1234);
  CHECK(f.genome == g);
  std::filesystem::remove(path);
}

TEST_CASE("a hinge stacked over the core is passive") {
  // Rolled brick at (1,0,0), brick at (1,0,1), then a hinge back over the core.
  MorphologyTree body = t::add(MorphologyTree{}, 0, 1, ModuleKind::Brick, Rotation::Deg90);
  body = t::add(body, 1, 2, ModuleKind::Brick);
  CHECK(body.module(2).position == Vec3{1, 0, 1});
  body = t::add(body, 2, 2, ModuleKind::ActiveHinge);
  REQUIRE(body.module(3).position == Vec3{0, 0, 1});
  CHECK(cpg_layout(body).joints.empty());
  CHECK(build_cpg(body, BrainGenome{}).size() == 0);
}
