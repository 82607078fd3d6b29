#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "morphoevo/rng.hpp"

namespace morphoevo {

enum class NodeRole : std::uint8_t { Input, Bias, Hidden, Output };
enum class Activation : std::uint8_t { Linear, Sigmoid, Sine, Gaussian, Tanh };

inline constexpr int kCppnInputs = 4;
inline constexpr int kCppnOutputs = 5;
inline constexpr int kBiasNode = kCppnInputs;           // node id 4
inline constexpr int kFirstOutputNode = kCppnInputs + 1;  // node ids 5..9
inline constexpr int kFirstHiddenNode = kFirstOutputNode + kCppnOutputs;

double activate(Activation a, double x);
std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);
std::string to_string(NodeRole r);
NodeRole node_role_from_string(const std::string& s);

struct NodeGene {
  int id = 0;
  NodeRole role = NodeRole::Hidden;
  Activation activation = Activation::Linear;
  friend bool operator==(const NodeGene&, const NodeGene&) = default;
};

struct ConnectionGene {
  int innovation = 0;
  int source = 0;
  int target = 0;
  double weight = 0.0;
  bool enabled = true;
  friend bool operator==(const ConnectionGene&, const ConnectionGene&) = default;
};

class CyclicGenome : public std::runtime_error {
 public:
  CyclicGenome() : std::runtime_error("CPPN genome contains a cycle among enabled connections") {}
};

class InvalidGenome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CppnGenome {
  std::vector<NodeGene> nodes;
  std::vector<ConnectionGene> connections;

  const NodeGene* find_node(int id) const;
  const ConnectionGene* find_connection(int innovation) const;
  /// Structural checks: 4 inputs, 1 bias, 5 outputs, unique ids, endpoints exist.
  void validate() const;
  /// Same genes regardless of storage order.
  bool same_genes(const CppnGenome& other) const;

  friend bool operator==(const CppnGenome&, const CppnGenome&) = default;
};

/// Hands out innovation ids per (source, target) and node ids per split
/// connection. One tracker per run; used only in the sequential reproduction phase.
class InnovationTracker {
 public:
  InnovationTracker();

  int connection_innovation(int source, int target);
  /// Node id for splitting `innovation`; `fresh` forces a new id.
  int split_node(int innovation, bool fresh);

  int next_innovation() const { return next_innovation_; }
  int next_node() const { return next_node_; }

 private:
  std::map<std::pair<int, int>, int> innovations_;
  std::map<int, int> split_nodes_;
  int next_innovation_ = 0;
  int next_node_ = kFirstHiddenNode;
};

/// Fully connected (inputs + bias) -> outputs, weights ~ U(-1, 1), no hidden nodes.
/// Innovation ids of these 25 connections are fixed: source * 5 + output slot.
CppnGenome random_cppn(Rng& rng);

struct CppnQuery {
  int x = 0;
  int y = 0;
  int z = 0;
  int tree_distance = 0;
};

struct CppnOutput {
  double p_brick = 0.0;
  double p_joint = 0.0;
  double p_empty = 0.0;
  double p_rot0 = 0.0;
  double p_rot90 = 0.0;
  friend bool operator==(const CppnOutput&, const CppnOutput&) = default;
};

/// Genome compiled into topological evaluation order.
class CompiledCppn {
 public:
  /// Throws CyclicGenome when enabled connections form a cycle.
  explicit CompiledCppn(const CppnGenome& genome);
  CppnOutput evaluate(const CppnQuery& q) const;

 private:
  struct Edge {
    std::size_t source;
    double weight;
  };
  struct Step {
    std::size_t slot;
    Activation activation;
    std::vector<Edge> inputs;
  };
  std::size_t slots_ = 0;
  std::vector<Step> steps_;
  std::array<std::size_t, kCppnOutputs> outputs_{};
  std::array<std::size_t, kCppnInputs> inputs_{};
  std::size_t bias_ = 0;
};

CppnOutput evaluate(const CppnGenome& genome, const CppnQuery& q);

/// True if adding source -> target to `genome` (all connections counted) forms a cycle.
bool creates_cycle(const CppnGenome& genome, int source, int target);
bool is_acyclic(const CppnGenome& genome);

struct BodyMutationConfig {
  double weight_rate = 0.8;
  double weight_sigma = 0.5;
  double add_connection_rate = 0.2;
  double add_node_rate = 0.1;
  double toggle_rate = 0.05;

  static BodyMutationConfig none() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }
};

CppnGenome mutate_body(const CppnGenome& genome, const BodyMutationConfig& cfg, InnovationTracker& tracker, Rng& rng);

/// Genes aligned by innovation; matching genes pick either parent uniformly,
/// disjoint and excess genes come from the fitter parent (ties: parent_a).
CppnGenome crossover_body(const CppnGenome& parent_a, double fitness_a, const CppnGenome& parent_b, double fitness_b,
                          Rng& rng);

}  // namespace morphoevo
