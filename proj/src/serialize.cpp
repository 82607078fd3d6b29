#include "morphoevo/serialize.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace morphoevo {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
  return s;
}

ordered_json to_json(const MorphologyTree& tree) {
  ordered_json modules = ordered_json::array();
  for (int i = 0; i < tree.size(); ++i) {
    const Module& m = tree.module(i);
    ordered_json jm;
    jm["id"] = i;
    jm["kind"] = to_string(m.kind);
    jm["pos"] = {m.position[0], m.position[1], m.position[2]};
    jm["rotation"] = to_string(m.rotation);
    if (m.parent) {
      jm["parent"] = {m.parent->module, m.parent->socket};
    } else {
      jm["parent"] = nullptr;
    }
    modules.push_back(std::move(jm));
  }
  ordered_json j;
  j["modules"] = std::move(modules);
  return j;
}

MorphologyTree morphology_from_json(const ordered_json& j) {
  const auto& modules = j.at("modules");
  if (!modules.is_array() || modules.empty()) throw InvalidMorphology("morphology JSON needs a module list");
  MorphologyTree tree;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const auto& jm = modules[i];
    if (jm.at("id").get<int>() != static_cast<int>(i)) throw InvalidMorphology("module ids must be 0..n-1 in order");
    const ModuleKind kind = module_kind_from_string(jm.at("kind").get<std::string>());
    const Rotation rotation = rotation_from_string(jm.at("rotation").get<std::string>());
    if (i == 0) {
      if (kind != ModuleKind::Core || !jm.at("parent").is_null()) throw InvalidMorphology("module 0 must be the core");
      continue;
    }
    const auto parent = jm.at("parent").get<std::array<int, 2>>();
    if (parent[0] < 0 || parent[0] >= tree.size()) throw InvalidMorphology("parent id out of range");
    const Module& owner = tree.module(parent[0]);
    if (parent[1] < 0 || parent[1] >= socket_count(owner.kind)) throw InvalidMorphology("socket out of range");
    if (tree.is_socket_filled(parent[0], parent[1])) throw InvalidMorphology("socket filled twice");
    const Vec3 dir = owner.orientation.apply(local_socket_direction(owner.kind, parent[1]));
    const Socket socket{parent[0], parent[1], dir, owner.position + dir};
    auto next = attach(tree, socket, kind, rotation);
    if (!next) throw InvalidMorphology("two modules share a cell");
    if (next->module(static_cast<int>(i)).position != jm.at("pos").get<Vec3>()) {
      throw InvalidMorphology("stored position disagrees with the attachment chain");
    }
    tree = std::move(*next);
  }
  tree.validate();
  return tree;
}

std::uint64_t body_hash(const MorphologyTree& tree) { return fnv1a64(to_json(tree).dump()); }

ordered_json to_json(const CppnGenome& genome) {
  ordered_json nodes = ordered_json::array();
  for (const auto& n : genome.nodes) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["role"] = to_string(n.role);
    jn["activation"] = to_string(n.activation);
    nodes.push_back(std::move(jn));
  }
  ordered_json connections = ordered_json::array();
  for (const auto& c : genome.connections) {
    ordered_json jc;
    jc["innovation"] = c.innovation;
    jc["source"] = c.source;
    jc["target"] = c.target;
    jc["weight"] = c.weight;
    jc["enabled"] = c.enabled;
    connections.push_back(std::move(jc));
  }
  ordered_json j;
  j["nodes"] = std::move(nodes);
  j["connections"] = std::move(connections);
  return j;
}

CppnGenome cppn_from_json(const ordered_json& j) {
  CppnGenome g;
  for (const auto& jn : j.at("nodes")) {
    g.nodes.push_back({jn.at("id").get<int>(), node_role_from_string(jn.at("role").get<std::string>()),
                       activation_from_string(jn.at("activation").get<std::string>())});
  }
  for (const auto& jc : j.at("connections")) {
    g.connections.push_back({jc.at("innovation").get<int>(), jc.at("source").get<int>(), jc.at("target").get<int>(),
                             jc.at("weight").get<double>(), jc.at("enabled").get<bool>()});
  }
  g.validate();
  if (!is_acyclic(g)) throw CyclicGenome();
  return g;
}

namespace {

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated brain genome file");
  return v;
}

}  // namespace

void write_brain_file(const std::filesystem::path& path, const BrainGenome& genome, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  put(out, kBrainFileVersion);
  put(out, kBrainWeightMax);
  put(out, seed);
  for (double w : genome.values()) put(out, w);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

BrainFile read_brain_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  BrainFile f;
  f.version = get<std::uint32_t>(in);
  if (f.version != kBrainFileVersion) throw std::runtime_error("unsupported brain file version");
  f.w_max = get<double>(in);
  f.seed = get<std::uint64_t>(in);
  std::vector<double> values(static_cast<std::size_t>(kBrainRows * kBrainSlots));
  for (auto& v : values) v = get<double>(in);
  f.genome = BrainGenome::from_values(values);
  return f;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("cannot format double");
  return std::string(buf, end);
}

}  // namespace morphoevo
