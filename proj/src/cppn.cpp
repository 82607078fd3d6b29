#include "morphoevo/cppn.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace morphoevo {

namespace {

constexpr std::array<Activation, 5> kHiddenPalette{Activation::Linear, Activation::Sigmoid, Activation::Sine,
                                                   Activation::Gaussian, Activation::Tanh};

bool is_source_role(NodeRole r) { return r != NodeRole::Output; }
bool is_target_role(NodeRole r) { return r == NodeRole::Hidden || r == NodeRole::Output; }

}  // namespace

double activate(Activation a, double x) {
  switch (a) {
    case Activation::Linear: return x;
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::Sine: return std::sin(x);
    case Activation::Gaussian: return std::exp(-x * x);
    case Activation::Tanh: return std::tanh(x);
  }
  return x;
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Linear: return "linear";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Sine: return "sine";
    case Activation::Gaussian: return "gaussian";
    case Activation::Tanh: return "tanh";
  }
  return "?";
}

Activation activation_from_string(const std::string& s) {
  for (Activation a : kHiddenPalette) {
    if (to_string(a) == s) return a;
  }
  throw std::invalid_argument("unknown activation: " + s);
}

std::string to_string(NodeRole r) {
  switch (r) {
    case NodeRole::Input: return "input";
    case NodeRole::Bias: return "bias";
    case NodeRole::Hidden: return "hidden";
    case NodeRole::Output: return "output";
  }
  return "?";
}

NodeRole node_role_from_string(const std::string& s) {
  if (s == "input") return NodeRole::Input;
  if (s == "bias") return NodeRole::Bias;
  if (s == "hidden") return NodeRole::Hidden;
  if (s == "output") return NodeRole::Output;
  throw std::invalid_argument("unknown node role: " + s);
}

const NodeGene* CppnGenome::find_node(int id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [id](const NodeGene& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const ConnectionGene* CppnGenome::find_connection(int innovation) const {
  auto it = std::find_if(connections.begin(), connections.end(),
                         [innovation](const ConnectionGene& c) { return c.innovation == innovation; });
  return it == connections.end() ? nullptr : &*it;
}

void CppnGenome::validate() const {
  std::set<int> ids;
  int inputs = 0, bias = 0, outputs = 0;
  for (const auto& n : nodes) {
    if (!ids.insert(n.id).second) throw InvalidGenome("duplicate node id");
    inputs += n.role == NodeRole::Input;
    bias += n.role == NodeRole::Bias;
    outputs += n.role == NodeRole::Output;
  }
  if (inputs != kCppnInputs || bias != 1 || outputs != kCppnOutputs) {
    throw InvalidGenome("CPPN must have 4 inputs, 1 bias and 5 outputs");
  }
  for (int i = 0; i < kCppnInputs; ++i) {
    const NodeGene* n = find_node(i);
    if (n == nullptr || n->role != NodeRole::Input) throw InvalidGenome("input nodes must have ids 0..3");
  }
  if (const NodeGene* b = find_node(kBiasNode); b == nullptr || b->role != NodeRole::Bias) {
    throw InvalidGenome("bias node must have id 4");
  }
  for (int i = 0; i < kCppnOutputs; ++i) {
    const NodeGene* n = find_node(kFirstOutputNode + i);
    if (n == nullptr || n->role != NodeRole::Output) throw InvalidGenome("output nodes must have ids 5..9");
  }
  std::set<int> innovations;
  for (const auto& c : connections) {
    if (!innovations.insert(c.innovation).second) throw InvalidGenome("duplicate innovation id");
    const NodeGene* s = find_node(c.source);
    const NodeGene* t = find_node(c.target);
    if (s == nullptr || t == nullptr) throw InvalidGenome("connection endpoint missing");
    if (!is_source_role(s->role) || !is_target_role(t->role)) throw InvalidGenome("connection direction invalid");
    if (!std::isfinite(c.weight)) throw InvalidGenome("non-finite connection weight");
  }
}

bool CppnGenome::same_genes(const CppnGenome& other) const {
  auto by_node = [](std::vector<NodeGene> v) {
    std::sort(v.begin(), v.end(), [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; });
    return v;
  };
  auto by_innov = [](std::vector<ConnectionGene> v) {
    std::sort(v.begin(), v.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) { return a.innovation < b.innovation; });
    return v;
  };
  return by_node(nodes) == by_node(other.nodes) && by_innov(connections) == by_innov(other.connections);
}

InnovationTracker::InnovationTracker() {
  for (int s = 0; s <= kBiasNode; ++s) {
    for (int o = 0; o < kCppnOutputs; ++o) connection_innovation(s, kFirstOutputNode + o);
  }
}

int InnovationTracker::connection_innovation(int source, int target) {
  auto [it, inserted] = innovations_.try_emplace({source, target}, next_innovation_);
  if (inserted) ++next_innovation_;
  return it->second;
}

int InnovationTracker::split_node(int innovation, bool fresh) {
  if (fresh) return next_node_++;
  auto [it, inserted] = split_nodes_.try_emplace(innovation, next_node_);
  if (inserted) ++next_node_;
  return it->second;
}

CppnGenome random_cppn(Rng& rng) {
  CppnGenome g;
  for (int i = 0; i < kCppnInputs; ++i) g.nodes.push_back({i, NodeRole::Input, Activation::Linear});
  g.nodes.push_back({kBiasNode, NodeRole::Bias, Activation::Linear});
  for (int i = 0; i < kCppnOutputs; ++i) g.nodes.push_back({kFirstOutputNode + i, NodeRole::Output, Activation::Linear});
  for (int s = 0; s <= kBiasNode; ++s) {
    for (int o = 0; o < kCppnOutputs; ++o) {
      g.connections.push_back({s * kCppnOutputs + o, s, kFirstOutputNode + o, rng.uniform(-1.0, 1.0), true});
    }
  }
  return g;
}

CompiledCppn::CompiledCppn(const CppnGenome& genome) {
  std::unordered_map<int, std::size_t> slot_of;
  for (const auto& n : genome.nodes) slot_of.emplace(n.id, slot_of.size());
  slots_ = slot_of.size();

  std::vector<std::vector<Edge>> incoming(slots_);
  std::vector<int> pending(slots_, 0);
  std::vector<std::vector<std::size_t>> outgoing(slots_);
  for (const auto& c : genome.connections) {
    if (!c.enabled) continue;
    const std::size_t s = slot_of.at(c.source);
    const std::size_t t = slot_of.at(c.target);
    incoming[t].push_back({s, c.weight});
    outgoing[s].push_back(t);
    ++pending[t];
  }

  // Kahn's algorithm; ready nodes processed in genome order for a fixed schedule.
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < slots_; ++i) {
    if (pending[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  std::size_t head = 0;
  while (head < ready.size()) {
    const std::size_t n = ready[head++];
    order.push_back(n);
    std::vector<std::size_t> next;
    for (std::size_t t : outgoing[n]) {
      if (--pending[t] == 0) next.push_back(t);
    }
    std::sort(next.begin(), next.end());
    ready.insert(ready.end(), next.begin(), next.end());
  }
  if (order.size() != slots_) throw CyclicGenome();

  for (std::size_t slot : order) {
    const NodeGene& node = genome.nodes[slot];
    if (node.role == NodeRole::Input || node.role == NodeRole::Bias) continue;
    steps_.push_back({slot, node.activation, incoming[slot]});
  }
  for (int i = 0; i < kCppnOutputs; ++i) outputs_[static_cast<std::size_t>(i)] = slot_of.at(kFirstOutputNode + i);
  inputs_.fill(0);
  for (int i = 0; i < kCppnInputs; ++i) inputs_[static_cast<std::size_t>(i)] = slot_of.at(i);
  bias_ = slot_of.at(kBiasNode);
}

CppnOutput CompiledCppn::evaluate(const CppnQuery& q) const {
  std::vector<double> value(slots_, 0.0);
  const std::array<double, kCppnInputs> in{q.x / 10.0, q.y / 10.0, q.z / 10.0, q.tree_distance / 10.0};
  for (std::size_t i = 0; i < in.size(); ++i) value[inputs_[i]] = in[i];
  value[bias_] = 1.0;
  for (const Step& step : steps_) {
    double sum = 0.0;
    for (const Edge& e : step.inputs) sum += e.weight * value[e.source];
    value[step.slot] = activate(step.activation, sum);
  }
  return {value[outputs_[0]], value[outputs_[1]], value[outputs_[2]], value[outputs_[3]], value[outputs_[4]]};
}

CppnOutput evaluate(const CppnGenome& genome, const CppnQuery& q) { return CompiledCppn(genome).evaluate(q); }

bool creates_cycle(const CppnGenome& genome, int source, int target) {
  if (source == target) return true;
  // Cycle iff source is reachable from target.
  std::vector<int> stack{target};
  std::set<int> seen{target};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    for (const auto& c : genome.connections) {
      if (c.source != n) continue;
      if (c.target == source) return true;
      if (seen.insert(c.target).second) stack.push_back(c.target);
    }
  }
  return false;
}

bool is_acyclic(const CppnGenome& genome) {
  try {
    CompiledCppn compiled(genome);
    return true;
  } catch (const CyclicGenome&) {
    return false;
  }
}

CppnGenome mutate_body(const CppnGenome& genome, const BodyMutationConfig& cfg, InnovationTracker& tracker, Rng& rng) {
  CppnGenome g = genome;

  for (auto& c : g.connections) {
    if (rng.bernoulli(cfg.weight_rate)) c.weight += rng.normal(0.0, cfg.weight_sigma);
  }

  if (rng.bernoulli(cfg.add_connection_rate)) {
    std::vector<int> sources, targets;
    for (const auto& n : g.nodes) {
      if (is_source_role(n.role)) sources.push_back(n.id);
      if (is_target_role(n.role)) targets.push_back(n.id);
    }
    constexpr int kAttempts = 20;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      const int s = sources[rng.index(sources.size())];
      const int t = targets[rng.index(targets.size())];
      const bool exists = std::any_of(g.connections.begin(), g.connections.end(),
                                      [&](const ConnectionGene& c) { return c.source == s && c.target == t; });
      if (exists || creates_cycle(g, s, t)) continue;
      g.connections.push_back({tracker.connection_innovation(s, t), s, t, rng.uniform(-1.0, 1.0), true});
      break;
    }
  }

  if (rng.bernoulli(cfg.add_node_rate)) {
    std::vector<std::size_t> enabled;
    for (std::size_t i = 0; i < g.connections.size(); ++i) {
      if (g.connections[i].enabled) enabled.push_back(i);
    }
    if (!enabled.empty()) {
      const std::size_t pick = enabled[rng.index(enabled.size())];
      const ConnectionGene split = g.connections[pick];
      g.connections[pick].enabled = false;
      int node = tracker.split_node(split.innovation, false);
      if (g.find_node(node) != nullptr) node = tracker.split_node(split.innovation, true);
      const Activation act = kHiddenPalette[rng.index(kHiddenPalette.size())];
      g.nodes.push_back({node, NodeRole::Hidden, act});
      g.connections.push_back({tracker.connection_innovation(split.source, node), split.source, node, 1.0, true});
      g.connections.push_back({tracker.connection_innovation(node, split.target), node, split.target, split.weight, true});
    }
  }

  if (!g.connections.empty() && rng.bernoulli(cfg.toggle_rate)) {
    auto& c = g.connections[rng.index(g.connections.size())];
    c.enabled = !c.enabled;
  }
  return g;
}

CppnGenome crossover_body(const CppnGenome& parent_a, double fitness_a, const CppnGenome& parent_b, double fitness_b,
                          Rng& rng) {
  const bool a_fitter = fitness_a >= fitness_b;
  const CppnGenome& fitter = a_fitter ? parent_a : parent_b;
  const CppnGenome& other = a_fitter ? parent_b : parent_a;

  CppnGenome child;
  child.nodes = fitter.nodes;
  child.connections.reserve(fitter.connections.size());
  for (const auto& gene : fitter.connections) {
    const ConnectionGene* match = other.find_connection(gene.innovation);
    if (match != nullptr && match->source == gene.source && match->target == gene.target) {
      ConnectionGene inherited = gene;
      if (rng.bernoulli(0.5)) inherited.weight = match->weight;
      child.connections.push_back(inherited);
    } else {
      child.connections.push_back(gene);
    }
  }
  return child;
}

}  // namespace morphoevo
