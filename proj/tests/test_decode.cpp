#include "doctest.h"

#include <set>

#include "morphoevo/decode.hpp"
#include "support.hpp"

using namespace morphoevo;
namespace t = morphoevo::testing;

namespace {

// Random genome, mutated a few times so hidden nodes and rotations occur.
CppnGenome varied_genome(Rng& rng) {
  CppnGenome g = random_cppn(rng);
  InnovationTracker tracker;
  BodyMutationConfig cfg;
  cfg.add_node_rate = 0.5;
  cfg.add_connection_rate = 0.5;
  const int rounds = static_cast<int>(rng.index(6));
  for (int i = 0; i < rounds; ++i) g = mutate_body(g, cfg, tracker, rng);
  return g;
}

void check_tree_invariants(const MorphologyTree& tree) {
  REQUIRE(tree.size() <= kMaxModules);
  std::set<Vec3> cells;
  for (const auto& m : tree.modules()) cells.insert(m.position);
  CHECK(cells.size() == static_cast<std::size_t>(tree.size()));
  for (int m = 0; m < tree.size(); ++m) {
    int cur = m, hops = 0;
    while (tree.module(cur).parent && hops <= kMaxModules) {
      cur = tree.module(cur).parent->module;
      ++hops;
    }
    CHECK(cur == 0);
  }
  CHECK_NOTHROW(tree.validate());
}

}  // namespace

TEST_CASE("constant Empty oracle leaves the core alone") {
  CHECK(decode_bfs(t::constant_oracle(CellKind::Empty)).size() == 1);
  Rng rng(1);
  int calls = 0;
  const CellOracle counting = [&](const CppnQuery&) {
    ++calls;
    return CellDecision{CellKind::Empty, Rotation::Deg0};
  };
  CHECK(decode_random(counting, rng).size() == 1);
  // Only four sockets ever exist, so the query budget is not exhausted.
  CHECK(calls == 4);
}

TEST_CASE("BFS with constant bricks fills depth 1 then the first depth-2 sockets") {
  const MorphologyTree tree = decode_bfs(t::constant_oracle(CellKind::Brick));
  REQUIRE(tree.size() == 10);
  const std::vector<Vec3> expected{{0, 0, 0}, {0, 1, 0},  {1, 0, 0},  {0, -1, 0}, {-1, 0, 0},
                                   {0, 2, 0}, {1, 1, 0},  {-1, 1, 0}, {2, 0, 0},  {1, -1, 0}};
  for (int i = 0; i < 10; ++i) CHECK(tree.module(i).position == expected[static_cast<std::size_t>(i)]);
  for (int i = 1; i < 5; ++i) CHECK(tree.module(i).tree_depth == 1);
  for (int i = 5; i < 10; ++i) CHECK(tree.module(i).tree_depth == 2);
  CHECK(t::same_layout(t::reference_bfs(t::constant_oracle(CellKind::Brick)), tree));
}

TEST_CASE("queries carry the tree distance of the target") {
  std::vector<CppnQuery> seen;
  const CellOracle recording = [&](const CppnQuery& q) {
    seen.push_back(q);
    return CellDecision{q.tree_distance < 2 ? CellKind::Brick : CellKind::Empty, Rotation::Deg0};
  };
  decode_bfs(recording);
  REQUIRE(seen.size() == 4 + 12);
  CHECK(seen[0].tree_distance == 1);
  CHECK(seen[4].tree_distance == 2);
  CHECK(seen[4].y == 2);
}

TEST_CASE("decoders are deterministic") {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const CppnGenome g = varied_genome(rng);
    CHECK(decode_bfs(g) == decode_bfs(g));
    CHECK(decode(g, QueryMechanism::Bfs, 1) == decode(g, QueryMechanism::Bfs, 999));
    CHECK(decode(g, QueryMechanism::Random, 17) == decode(g, QueryMechanism::Random, 17));
  }
}

TEST_CASE("constant bricks under random query match the reference for 1000 seeds") {
  const CellOracle bricks = t::constant_oracle(CellKind::Brick);
  int full = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng a(seed), b(seed);
    const MorphologyTree tree = decode_random(bricks, a);
    const t::RefResult ref = t::reference_random(bricks, b);
    REQUIRE(t::same_layout(ref, tree));
    CHECK(ref.queries == kRandomQueries);
    full += tree.size() == 10;
    check_tree_invariants(tree);
  }
  // Collisions do happen (a brick's side socket can reach a filled cell),
  // so not every seed reaches ten modules.
  CHECK(full > 0);
  CHECK(full < 1000);
}

TEST_CASE("CPPN decodes match the reference decoders") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const CppnGenome g = varied_genome(rng);
    const CellOracle oracle = cppn_oracle(g);
    const MorphologyTree bfs = decode_bfs(oracle);
    CHECK(t::same_layout(t::reference_bfs(oracle), bfs));
    check_tree_invariants(bfs);

    const std::uint64_t seed = rng.next();
    Rng a(seed), b(seed);
    const MorphologyTree rnd = decode_random(oracle, a);
    const t::RefResult ref = t::reference_random(oracle, b);
    CHECK(t::same_layout(ref, rnd));
    CHECK(ref.queries <= kRandomQueries);
    check_tree_invariants(rnd);
  }
}

TEST_CASE("rolled constant oracle builds out of plane") {
  const CellOracle rolled = t::constant_oracle(CellKind::Brick, Rotation::Deg90);
  const MorphologyTree tree = decode_bfs(rolled);
  CHECK(t::same_layout(t::reference_bfs(rolled), tree));
  bool off_plane = false;
  for (const auto& m : tree.modules()) off_plane = off_plane || m.position[2] != 0;
  CHECK(off_plane);
  CHECK(query_mechanism_from_string(to_string(QueryMechanism::Random)) == QueryMechanism::Random);
  CHECK_THROWS(query_mechanism_from_string("dfs"));
}
