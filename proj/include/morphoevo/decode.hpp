#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "morphoevo/cppn.hpp"
#include "morphoevo/morphology.hpp"
#include "morphoevo/rng.hpp"

namespace morphoevo {

enum class CellKind : std::uint8_t { Brick, ActiveHinge, Empty };

struct CellDecision {
  CellKind kind = CellKind::Empty;
  Rotation rotation = Rotation::Deg0;
  friend bool operator==(const CellDecision&, const CellDecision&) = default;
};

/// Argmax over module type and rotation. Ties: Brick < Joint < Empty, Deg0 < Deg90.
CellDecision decode_cell(const CppnOutput& out);
CellDecision decode_cell(const CppnGenome& genome, const CppnQuery& q);

/// Anything that answers a cell query. Decoders accept it so tests can
/// substitute constant or counting oracles for a CPPN.
using CellOracle = std::function<CellDecision(const CppnQuery&)>;

CellOracle cppn_oracle(const CppnGenome& genome);

enum class QueryMechanism : std::uint8_t { Bfs, Random };

std::string to_string(QueryMechanism q);
QueryMechanism query_mechanism_from_string(const std::string& s);

inline constexpr int kRandomQueries = 9;

/// Breadth-first expansion from the core. No randomness.
MorphologyTree decode_bfs(const CellOracle& oracle);
MorphologyTree decode_bfs(const CppnGenome& genome);

/// Nine queries at sockets drawn uniformly, without replacement, from the
/// live open-socket set.
MorphologyTree decode_random(const CellOracle& oracle, Rng& rng);
MorphologyTree decode_random(const CppnGenome& genome, Rng& rng);

/// Dispatches on `mechanism`; `seed` is ignored for BFS.
MorphologyTree decode(const CppnGenome& genome, QueryMechanism mechanism, std::uint64_t seed);

}  // namespace morphoevo
