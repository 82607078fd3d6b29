#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "morphoevo/brain.hpp"
#include "morphoevo/cppn.hpp"
#include "morphoevo/morphology.hpp"

namespace morphoevo {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// {"modules": [{"id", "kind", "pos", "rotation", "parent"}]} with fixed field order.
ordered_json to_json(const MorphologyTree& tree);
/// Rebuilds the tree by replaying attachments; validates the result.
MorphologyTree morphology_from_json(const ordered_json& j);
/// FNV-1a over the compact morphology JSON.
std::uint64_t body_hash(const MorphologyTree& tree);

ordered_json to_json(const CppnGenome& genome);
CppnGenome cppn_from_json(const ordered_json& j);

inline constexpr std::uint32_t kBrainFileVersion = 1;

/// Binary layout: u32 version, f64 w_max, u64 seed, then 6160 f64 row-major
/// (row, slot). Little-endian host order.
void write_brain_file(const std::filesystem::path& path, const BrainGenome& genome, std::uint64_t seed);
struct BrainFile {
  std::uint32_t version = 0;
  double w_max = 0.0;
  std::uint64_t seed = 0;
  BrainGenome genome;
};
BrainFile read_brain_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace morphoevo
