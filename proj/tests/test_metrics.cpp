#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "morphoevo/metrics.hpp"
#include "support.hpp"
#include "tree_oracle.hpp"

using namespace morphoevo;
using namespace morphoevo::testing;
namespace t = morphoevo::testing;

namespace {

// Attachment script, replayable with the core's sockets rotated by a quarter turn.
struct Step {
  int owner, socket;
  ModuleKind kind;
  Rotation rotation;
};

std::vector<Step> random_script(Rng& rng, int modules) {
  std::vector<Step> script;
  MorphologyTree tree;
  for (int guard = 0; tree.size() < modules && guard < 100; ++guard) {
    const auto sockets = open_sockets(tree);
    if (sockets.empty()) break;
    const Socket s = sockets[rng.index(sockets.size())];
    const Step step{s.owner, s.index, rng.bernoulli(0.5) ? ModuleKind::Brick : ModuleKind::ActiveHinge,
                    rng.bernoulli(0.3) ? Rotation::Deg90 : Rotation::Deg0};
    if (auto next = attach(tree, s, step.kind, step.rotation)) {
      tree = *next;
      script.push_back(step);
    }
  }
  return script;
}

MorphologyTree replay(const std::vector<Step>& script, int core_shift) {
  MorphologyTree tree;
  for (const auto& s : script) {
    const int socket = s.owner == 0 ? (s.socket + core_shift) % 4 : s.socket;
    tree = t::add(tree, s.owner, socket, s.kind, s.rotation);
  }
  return tree;
}

void check_traits_equal(const TraitVector& a, const TraitVector& b) {
  const auto x = a.as_array(), y = b.as_array();
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("tree edit distance examples") {
  const MorphologyTree core;
  const MorphologyTree one = t::add(core, 0, 0, ModuleKind::Brick);
  CHECK(tree_edit_distance(core, core) == 0);
  CHECK(tree_edit_distance(core, one) == 1);
  CHECK(tree_edit_distance(one, core) == 1);
  CHECK(tree_edit_distance(core, t::plus_shape()) == 4);
  CHECK(tree_edit_distance(t::straight_line(), core) == 9);
  const MorphologyTree hinge = t::add(core, 0, 0, ModuleKind::ActiveHinge);
  CHECK(tree_edit_distance(one, hinge) == 1);
  const MorphologyTree rolled = t::add(core, 0, 0, ModuleKind::Brick, Rotation::Deg90);
  CHECK(tree_edit_distance(one, rolled) == 1);
  // Classic example: a(b c) vs a(b(c)) needs one delete and one insert.
  CHECK(tree_edit_distance(LabeledTree{{0, 1, 2}, {{1, 2}, {}, {}}}, LabeledTree{{0, 1, 2}, {{1}, {2}, {}}}) == 2);
  const LabeledTree lt = labeled_tree(rolled);
  CHECK(lt.labels == std::vector<int>{0, 3});
}

TEST_CASE("Zhang-Shasha matches the exhaustive mapping search on all small trees") {
  const std::vector<LabeledTree> trees = small_trees(4, {2, 3, 4});
  CHECK(trees.size() == 1 + 3 + 2 * 9 + 5 * 27);
  long pairs = 0;
  for (const auto& a : trees) {
    for (const auto& b : trees) {
      REQUIRE(tree_edit_distance(a, b) == mapping_oracle(a, b));
      ++pairs;
    }
  }
  CHECK(pairs == 157L * 157L);
}

TEST_CASE("Zhang-Shasha matches the oracle on decoded bodies") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const MorphologyTree a = t::random_body(rng, 1 + static_cast<int>(rng.index(6)));
    const MorphologyTree b = t::random_body(rng, 1 + static_cast<int>(rng.index(6)));
    CHECK(tree_edit_distance(a, b) == mapping_oracle(labeled_tree(a), labeled_tree(b)));
  }
}

TEST_CASE("tree edit distance is a metric on random bodies") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const MorphologyTree a = t::random_body(rng, 1 + static_cast<int>(rng.index(10)));
    const MorphologyTree b = t::random_body(rng, 1 + static_cast<int>(rng.index(10)));
    const MorphologyTree c = t::random_body(rng, 1 + static_cast<int>(rng.index(10)));
    const int ab = tree_edit_distance(a, b);
    CHECK(tree_edit_distance(a, a) == 0);
    CHECK((ab == 0) == (canonical(labeled_tree(a)) == canonical(labeled_tree(b))));
    CHECK(ab == tree_edit_distance(b, a));
    CHECK(tree_edit_distance(a, c) <= ab + tree_edit_distance(b, c));
  }
}

TEST_CASE("mean pairwise distance") {
  const std::vector<MorphologyTree> same(4, t::plus_shape());
  CHECK(mean_pairwise_distance(same) == 0.0);
  const std::vector<MorphologyTree> two{MorphologyTree{}, t::plus_shape()};
  CHECK(mean_pairwise_distance(two) == 4.0);
  const std::vector<MorphologyTree> three{MorphologyTree{}, t::plus_shape(), t::straight_line()};
  CHECK(mean_pairwise_distance(three) == doctest::Approx((4.0 + 9.0 + tree_edit_distance(t::plus_shape(), t::straight_line())) / 3.0));
  CHECK(mean_pairwise_distance(std::vector<MorphologyTree>{MorphologyTree{}}) == 0.0);
}

TEST_CASE("traits of reference bodies") {
  const TraitVector plus = traits(t::plus_shape());
  CHECK(plus.symmetry == 1.0);
  CHECK(plus.proportion_2d == 1.0);
  CHECK(plus.rel_num_joints == doctest::Approx(0.8));
  CHECK(plus.rel_num_bricks == 0.0);
  CHECK(plus.coverage == doctest::Approx(5.0 / 9.0));
  CHECK(plus.branching == 1.0);
  CHECK(plus.rel_num_limbs == 1.0);
  CHECK(plus.rel_length_of_limbs == doctest::Approx(0.25));

  const TraitVector core = traits(MorphologyTree{});
  const auto arr = core.as_array();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string name = kTraitNames[i];
    CHECK(arr[i] == (name == "coverage" || name == "proportion_2d" ? 1.0 : 0.0));
  }

  const TraitVector line = traits(t::straight_line());
  CHECK(line.proportion_2d == doctest::Approx(0.1));
  CHECK(line.coverage == 1.0);
  CHECK(line.rel_length_of_limbs == 1.0);
  CHECK(line.rel_num_bricks == doctest::Approx(0.9));
  CHECK(line.branching == 0.0);
  CHECK(line.rel_num_limbs == doctest::Approx(1.0 / 7.0));
  CHECK(line.symmetry == 1.0);

  // An L: core, brick +y, brick +x off the first.
  MorphologyTree l = t::add(MorphologyTree{}, 0, 0, ModuleKind::Brick);
  l = t::add(l, 1, 1, ModuleKind::Brick);
  const TraitVector lt = traits(l);
  CHECK(lt.coverage == doctest::Approx(3.0 / 4.0));
  CHECK(lt.symmetry == 0.5);  // (0,1) mirrors onto itself across x = 0
  CHECK(lt.rel_length_of_limbs == 1.0);
}

TEST_CASE("limb budget matches an exhaustive tree search") {
  // Most leaves any tree of m nodes can have when the root takes at most 4
  // children and every other node at most 3.
  std::function<int(int, int)> leaves = [&](int nodes, int cap) -> int {
    if (nodes == 1) return 1;
    int best = 0;
    // Split the remaining nodes among up to `cap` child subtrees.
    std::function<void(int, int, int)> split = [&](int left, int slots, int acc) {
      if (left == 0) {
        best = std::max(best, acc);
        return;
      }
      if (slots == 0) return;
      for (int take = 1; take <= left; ++take) split(left - take, slots - 1, acc + leaves(take, 3));
    };
    split(nodes - 1, cap, 0);
    return best;
  };
  CHECK(max_limbs(1) == 0);
  for (int m = 2; m <= 10; ++m) CHECK(max_limbs(m) == leaves(m, 4));
}

TEST_CASE("traits are invariant under a quarter turn about the core") {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto script = random_script(rng, 1 + static_cast<int>(rng.index(10)));
    const MorphologyTree base = replay(script, 0);
    const TraitVector reference = traits(base);
    for (int shift = 1; shift < 4; ++shift) check_traits_equal(reference, traits(replay(script, shift)));
    for (double v : reference.as_array()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("learning delta and morphological intelligence") {
  Individual ind;
  ind.fitness_before = 0.4;
  ind.fitness_after = 1.1;
  CHECK(learning_delta(ind) == doctest::Approx(0.7));
  ind.fitness_after = 0.4;
  CHECK(learning_delta(ind) == 0.0);

  RunArchive a;
  a.generations = {{0, {}}, {1, {}}};
  for (int i = 0; i < 4; ++i) {
    Individual x;
    x.id = i;
    x.generation = i / 2;
    x.fitness_before = 0.0;
    x.fitness_after = i;
    a.individuals.push_back(x);
  }
  CHECK(learning_delta_by_generation(a) == std::vector<double>{0.5, 2.5});
  CHECK(morphological_intelligence(a, a) == std::vector<double>{0.0, 0.0});
  const std::vector<double> e{1.0, 2.0, 3.0}, f{2.0, 2.0};
  CHECK(morphological_intelligence(e, f) == std::vector<double>{-1.0, 0.0});
  CHECK(trend_slope(std::vector<double>{1.0, 3.0, 5.0, 7.0}) == doctest::Approx(2.0));
  CHECK(trend_slope(std::vector<double>{2.0, 2.0, 2.0}) == doctest::Approx(0.0));
}

TEST_CASE("PCA on a line keeps everything in the first component") {
  std::vector<std::vector<double>> samples;
  for (int i = 0; i < 50; ++i) samples.push_back({i * 1.0, 2.0 * i + 1.0, -0.5 * i, 3.0});
  const PcaResult r = pca(samples);
  CHECK(r.kept_columns == std::vector<std::size_t>{0, 1, 2});
  CHECK(r.explained[0] == doctest::Approx(1.0));
  CHECK(r.loading(0, 3) == 0.0);
  CHECK_THROWS_AS(pca({{1.0}, {2.0}}), TooFewSamples);
}

TEST_CASE("PCA on an isotropic cloud has balanced components") {
  Rng rng(4);
  std::vector<std::vector<double>> samples;
  for (int i = 0; i < 5000; ++i) samples.push_back({rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)});
  const PcaResult r = pca(samples);
  for (double e : r.explained) CHECK(std::abs(e - 1.0 / 3.0) < 0.03);
}

TEST_CASE("PCA components are orthonormal and reconstruct the data") {
  Rng rng(5);
  std::vector<std::vector<double>> samples;
  for (int i = 0; i < 200; ++i) {
    const double a = rng.normal(0, 1), b = rng.normal(0, 1);
    samples.push_back({a, a + 0.3 * b, b, rng.uniform(0, 1), 2 * a - b + rng.normal(0, 0.1)});
  }
  const PcaResult r = pca(samples);
  const std::size_t k = r.components.size();
  REQUIRE(k == 5);
  for (std::size_t i = 0; i < k; ++i) {
    double biggest = 0.0;
    for (double v : r.components[i]) biggest = std::abs(v) > std::abs(biggest) ? v : biggest;
    CHECK(biggest > 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < k; ++c) dot += r.components[i][c] * r.components[j][c];
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
  }
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t c = 0; c < k; ++c) {
      double back = 0.0;
      for (std::size_t p = 0; p < k; ++p) back += r.scores[s][p] * r.components[p][c];
      CHECK(std::abs(back - r.standardized[s][c]) < 1e-9);
    }
  }
  // Eigenvalues agree with a singular value decomposition of the standardized data.
  Eigen::MatrixXd z(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(k));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t c = 0; c < k; ++c) z(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c)) = r.standardized[s][c];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(z);
  for (std::size_t i = 0; i < k; ++i) {
    const double sv = svd.singularValues()(static_cast<Eigen::Index>(i));
    CHECK(r.eigenvalues[i] == doctest::Approx(sv * sv / (samples.size() - 1.0)).epsilon(1e-9));
  }
  double total = 0.0;
  for (double e : r.eigenvalues) total += e;
  CHECK(total == doctest::Approx(5.0));
}

TEST_CASE("PCA over traits drops constant traits") {
  std::vector<TraitVector> samples;
  Rng rng(6);
  for (int i = 0; i < 30; ++i) samples.push_back(traits(t::random_body(rng, 2 + static_cast<int>(rng.index(9)))));
  const PcaResult r = pca_traits(samples);
  CHECK_FALSE(r.kept_columns.empty());
  for (double e : r.explained) CHECK(e >= 0.0);
  CHECK(std::is_sorted(r.eigenvalues.rbegin(), r.eigenvalues.rend()));
}
