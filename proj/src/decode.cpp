#include "morphoevo/decode.hpp"

#include <deque>
#include <memory>
#include <stdexcept>

namespace morphoevo {

namespace {

ModuleKind to_module(CellKind k) { return k == CellKind::Brick ? ModuleKind::Brick : ModuleKind::ActiveHinge; }

CppnQuery query_for(const MorphologyTree& tree, const Socket& s) {
  return {s.target[0], s.target[1], s.target[2], tree.module(s.owner).tree_depth + 1};
}

}  // namespace

CellDecision decode_cell(const CppnOutput& out) {
  CellDecision d;
  if (out.p_brick >= out.p_joint && out.p_brick >= out.p_empty) {
    d.kind = CellKind::Brick;
  } else if (out.p_joint >= out.p_empty) {
    d.kind = CellKind::ActiveHinge;
  } else {
    d.kind = CellKind::Empty;
  }
  d.rotation = out.p_rot0 >= out.p_rot90 ? Rotation::Deg0 : Rotation::Deg90;
  return d;
}

CellDecision decode_cell(const CppnGenome& genome, const CppnQuery& q) { return decode_cell(evaluate(genome, q)); }

CellOracle cppn_oracle(const CppnGenome& genome) {
  auto compiled = std::make_shared<const CompiledCppn>(genome);
  return [compiled](const CppnQuery& q) { return decode_cell(compiled->evaluate(q)); };
}

std::string to_string(QueryMechanism q) { return q == QueryMechanism::Bfs ? "bfs" : "random"; }

QueryMechanism query_mechanism_from_string(const std::string& s) {
  if (s == "bfs") return QueryMechanism::Bfs;
  if (s == "random") return QueryMechanism::Random;
  throw std::invalid_argument("unknown query mechanism: " + s);
}

MorphologyTree decode_bfs(const CellOracle& oracle) {
  MorphologyTree tree;
  std::deque<Socket> queue;
  for (const auto& s : open_sockets_of(tree, 0)) queue.push_back(s);
  while (!queue.empty() && tree.size() < kMaxModules) {
    const Socket socket = queue.front();
    queue.pop_front();
    const CellDecision d = oracle(query_for(tree, socket));
    if (d.kind == CellKind::Empty) continue;
    auto next = attach(tree, socket, to_module(d.kind), d.rotation);
    if (!next) continue;  // occupied: not placed, branch ends
    tree = std::move(*next);
    for (const auto& s : open_sockets_of(tree, tree.size() - 1)) queue.push_back(s);
  }
  return tree;
}

MorphologyTree decode_bfs(const CppnGenome& genome) { return decode_bfs(cppn_oracle(genome)); }

MorphologyTree decode_random(const CellOracle& oracle, Rng& rng) {
  MorphologyTree tree;
  std::vector<Socket> live = open_sockets_of(tree, 0);
  for (int q = 0; q < kRandomQueries && !live.empty(); ++q) {
    const std::size_t pick = rng.index(live.size());
    const Socket socket = live[pick];
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
    const CellDecision d = oracle(query_for(tree, socket));
    if (d.kind == CellKind::Empty) continue;
    auto next = attach(tree, socket, to_module(d.kind), d.rotation);
    if (!next) continue;
    tree = std::move(*next);
    const auto fresh = open_sockets_of(tree, tree.size() - 1);
    live.insert(live.end(), fresh.begin(), fresh.end());
  }
  return tree;
}

MorphologyTree decode_random(const CppnGenome& genome, Rng& rng) { return decode_random(cppn_oracle(genome), rng); }

MorphologyTree decode(const CppnGenome& genome, QueryMechanism mechanism, std::uint64_t seed) {
  if (mechanism == QueryMechanism::Bfs) return decode_bfs(genome);
  Rng rng(seed);
  return decode_random(genome, rng);
}

}  // namespace morphoevo
