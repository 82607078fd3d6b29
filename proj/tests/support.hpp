#pragma once

// Shared builders for tests. The reference decoders here track frames with
// explicit (forward, up) vectors so they do not share the library's
// orientation or socket code.

#include <array>
#include <optional>
#include <vector>

#include "morphoevo/decode.hpp"
#include "morphoevo/morphology.hpp"
#include "morphoevo/rng.hpp"

namespace morphoevo::testing {

/// Attach through the library and fail loudly if the socket is missing or occupied.
inline MorphologyTree add(const MorphologyTree& tree, int owner, int socket, ModuleKind kind,
                          Rotation rotation = Rotation::Deg0) {
  for (const auto& s : open_sockets_of(tree, owner)) {
    if (s.index == socket) {
      auto next = attach(tree, s, kind, rotation);
      if (!next) throw std::runtime_error("test body: target occupied");
      return *next;
    }
  }
  throw std::runtime_error("test body: socket not open");
}

/// Core with hinges on all four lateral faces.
inline MorphologyTree plus_shape() {
  MorphologyTree t;
  for (int s = 0; s < 4; ++s) t = add(t, 0, s, ModuleKind::ActiveHinge);
  return t;
}

/// Core followed by a straight chain of 9 bricks along +y.
inline MorphologyTree straight_line() {
  MorphologyTree t = add(MorphologyTree{}, 0, 0, ModuleKind::Brick);
  for (int i = 1; i < 9; ++i) t = add(t, i, 0, ModuleKind::Brick);
  return t;
}

/// Hinges at (1,0,0) and (1,0,1) via a rolled brick.
inline MorphologyTree stacked_joints() {
  MorphologyTree t = add(MorphologyTree{}, 0, 1, ModuleKind::ActiveHinge);        // (1,0,0)
  t = add(t, 1, 0, ModuleKind::Brick, Rotation::Deg90);                         // (2,0,0)
  t = add(t, 2, 2, ModuleKind::Brick);                                           // (2,0,1)
  t = add(t, 3, 2, ModuleKind::ActiveHinge);                                     // (1,0,1)
  return t;
}

/// Random attachment script applied through the library.
struct Step {
  int owner_pick;  // index into the open-socket list at that moment
  ModuleKind kind;
  Rotation rotation;
};

inline MorphologyTree random_body(Rng& rng, int target_modules) {
  MorphologyTree t;
  for (int guard = 0; t.size() < target_modules && guard < 100; ++guard) {
    const auto sockets = open_sockets(t);
    if (sockets.empty()) break;
    const auto& s = sockets[rng.index(sockets.size())];
    const ModuleKind kind = rng.bernoulli(0.5) ? ModuleKind::Brick : ModuleKind::ActiveHinge;
    const Rotation rot = rng.bernoulli(0.5) ? Rotation::Deg0 : Rotation::Deg90;
    if (auto next = attach(t, s, kind, rot)) t = *next;
  }
  return t;
}

// ---- reference decoder -------------------------------------------------

struct RefModule {
  int kind;  // 1 brick, 2 hinge, 0 core
  std::array<int, 3> pos;
  std::array<int, 3> forward;
  std::array<int, 3> up;
  int depth;
};

struct RefSocket {
  int owner;
  std::array<int, 3> dir;
};

inline std::array<int, 3> ref_cross(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline std::vector<RefSocket> ref_sockets(const RefModule& m, int owner) {
  const auto right = ref_cross(m.forward, m.up);
  const std::array<int, 3> left{-right[0], -right[1], -right[2]};
  const std::array<int, 3> back{-m.forward[0], -m.forward[1], -m.forward[2]};
  std::vector<std::array<int, 3>> dirs;
  if (m.kind == 0) dirs = {m.forward, right, back, left};
  if (m.kind == 1) dirs = {m.forward, right, left};
  if (m.kind == 2) dirs = {m.forward};
  std::vector<RefSocket> out;
  for (const auto& d : dirs) {
    const std::array<int, 3> t{m.pos[0] + d[0], m.pos[1] + d[1], m.pos[2] + d[2]};
    bool inside = true;
    for (int c : t) inside = inside && c >= -10 && c <= 10;
    if (inside) out.push_back({owner, d});
  }
  return out;
}

struct RefResult {
  std::vector<RefModule> modules;
  int queries = 0;
};

/// Shared placement rule: returns true if a module was added.
inline bool ref_place(RefResult& r, const RefSocket& s, const CellOracle& oracle, std::vector<RefSocket>& fresh) {
  const RefModule& owner = r.modules[static_cast<std::size_t>(s.owner)];
  const std::array<int, 3> target{owner.pos[0] + s.dir[0], owner.pos[1] + s.dir[1], owner.pos[2] + s.dir[2]};
  ++r.queries;
  const CellDecision d = oracle({target[0], target[1], target[2], owner.depth + 1});
  if (d.kind == CellKind::Empty) return false;
  for (const auto& m : r.modules) {
    if (m.pos == target) return false;
  }
  RefModule child{d.kind == CellKind::Brick ? 1 : 2, target, s.dir, owner.up, owner.depth + 1};
  if (d.rotation == Rotation::Deg90) child.up = ref_cross(child.forward, child.up);  // roll: up -> old right
  r.modules.push_back(child);
  fresh = ref_sockets(child, static_cast<int>(r.modules.size()) - 1);
  return true;
}

inline RefResult reference_bfs(const CellOracle& oracle) {
  RefResult r;
  r.modules.push_back({0, {0, 0, 0}, {0, 1, 0}, {0, 0, 1}, 0});
  std::vector<RefSocket> queue = ref_sockets(r.modules[0], 0);
  for (std::size_t head = 0; head < queue.size() && r.modules.size() < 10; ++head) {
    std::vector<RefSocket> fresh;
    if (ref_place(r, queue[head], oracle, fresh)) queue.insert(queue.end(), fresh.begin(), fresh.end());
  }
  return r;
}

inline RefResult reference_random(const CellOracle& oracle, Rng& rng) {
  RefResult r;
  r.modules.push_back({0, {0, 0, 0}, {0, 1, 0}, {0, 0, 1}, 0});
  std::vector<RefSocket> live = ref_sockets(r.modules[0], 0);
  for (int q = 0; q < 9 && !live.empty(); ++q) {
    const std::size_t pick = rng.index(live.size());
    const RefSocket s = live[pick];
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
    std::vector<RefSocket> fresh;
    if (ref_place(r, s, oracle, fresh)) live.insert(live.end(), fresh.begin(), fresh.end());
  }
  return r;
}

inline bool same_layout(const RefResult& ref, const MorphologyTree& tree) {
  if (static_cast<int>(ref.modules.size()) != tree.size()) return false;
  for (int i = 0; i < tree.size(); ++i) {
    const auto& a = ref.modules[static_cast<std::size_t>(i)];
    const auto& b = tree.module(i);
    if (a.pos != b.position || a.forward != b.orientation.forward() || a.up != b.orientation.up()) return false;
    if (a.kind != static_cast<int>(b.kind)) return false;
  }
  return true;
}

inline CellOracle constant_oracle(CellKind kind, Rotation rot = Rotation::Deg0) {
  return [kind, rot](const CppnQuery&) { return CellDecision{kind, rot}; };
}

}  // namespace morphoevo::testing
