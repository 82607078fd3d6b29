#include "morphoevo/morphology.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace morphoevo {

bool in_grid(const Vec3& p) {
  return std::all_of(p.begin(), p.end(), [](int c) { return c >= -kGridHalf && c <= kGridHalf; });
}

Orientation::Orientation() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}

Orientation::Orientation(const Matrix& m) : m_(m) {}

Orientation Orientation::yaw_to(const Vec3& dir) {
  if (dir[2] != 0 || std::abs(dir[0]) + std::abs(dir[1]) != 1) {
    throw std::invalid_argument("yaw_to expects a lateral unit direction");
  }
  // Columns are the images of local x, y, z.
  const Vec3 z{0, 0, 1};
  const Vec3 x = cross(dir, z);
  Matrix m{};
  for (int r = 0; r < 3; ++r) {
    m[r][0] = x[r];
    m[r][1] = dir[r];
    m[r][2] = z[r];
  }
  return Orientation(m);
}

Orientation Orientation::roll90() {
  // About +y: z -> x, x -> -z.
  return Orientation(Matrix{{{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}}});
}

Vec3 Orientation::apply(const Vec3& v) const {
  Vec3 out{0, 0, 0};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out[r] += m_[r][c] * v[c];
  }
  return out;
}

Orientation Orientation::compose(const Orientation& inner) const {
  Matrix out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      int s = 0;
      for (int k = 0; k < 3; ++k) s += m_[r][k] * inner.m_[k][c];
      out[r][c] = s;
    }
  }
  return Orientation(out);
}

bool Orientation::is_rotation() const {
  for (int c = 0; c < 3; ++c) {
    int nonzero = 0;
    for (int r = 0; r < 3; ++r) {
      const int v = m_[r][c];
      if (v != 0 && v != 1 && v != -1) return false;
      nonzero += v != 0;
    }
    if (nonzero != 1) return false;
  }
  const int det = m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
                  m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
                  m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
  return det == 1;
}

int socket_count(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::Core: return 4;
    case ModuleKind::Brick: return 3;
    case ModuleKind::ActiveHinge: return 1;
  }
  return 0;
}

Vec3 local_socket_direction(ModuleKind kind, int socket) {
  static constexpr std::array<Vec3, 4> kCore{{{0, 1, 0}, {1, 0, 0}, {0, -1, 0}, {-1, 0, 0}}};
  static constexpr std::array<Vec3, 3> kBrick{{{0, 1, 0}, {1, 0, 0}, {-1, 0, 0}}};
  if (socket < 0 || socket >= socket_count(kind)) throw std::out_of_range("socket index out of range");
  switch (kind) {
    case ModuleKind::Core: return kCore[static_cast<std::size_t>(socket)];
    case ModuleKind::Brick: return kBrick[static_cast<std::size_t>(socket)];
    case ModuleKind::ActiveHinge: return {0, 1, 0};
  }
  return {0, 0, 0};
}

MorphologyTree::MorphologyTree() { modules_.push_back(Module{}); }

std::vector<int> MorphologyTree::children(int id) const {
  std::vector<std::pair<int, int>> by_socket;
  for (int i = 1; i < size(); ++i) {
    const auto& p = modules_[static_cast<std::size_t>(i)].parent;
    if (p && p->module == id) by_socket.emplace_back(p->socket, i);
  }
  std::sort(by_socket.begin(), by_socket.end());
  std::vector<int> out;
  out.reserve(by_socket.size());
  for (const auto& [socket, child] : by_socket) out.push_back(child);
  return out;
}

std::optional<int> MorphologyTree::occupant(const Vec3& cell) const {
  for (int i = 0; i < size(); ++i) {
    if (modules_[static_cast<std::size_t>(i)].position == cell) return i;
  }
  return std::nullopt;
}

bool MorphologyTree::is_socket_filled(int owner, int socket) const {
  return std::any_of(modules_.begin(), modules_.end(), [&](const Module& m) {
    return m.parent && m.parent->module == owner && m.parent->socket == socket;
  });
}

int MorphologyTree::count(ModuleKind kind) const {
  return static_cast<int>(std::count_if(modules_.begin(), modules_.end(), [kind](const Module& m) { return m.kind == kind; }));
}

void MorphologyTree::validate() const {
  if (modules_.empty() || size() > kMaxModules) throw InvalidMorphology("module count outside [1, 10]");
  const Module& core = modules_.front();
  if (core.kind != ModuleKind::Core || core.position != Vec3{0, 0, 0} || core.parent || core.tree_depth != 0) {
    throw InvalidMorphology("module 0 must be the core at the origin");
  }
  std::set<Vec3> cells;
  std::set<std::pair<int, int>> used_sockets;
  for (int i = 0; i < size(); ++i) {
    const Module& m = modules_[static_cast<std::size_t>(i)];
    if (!in_grid(m.position)) throw InvalidMorphology("module outside grid bounds");
    if (!cells.insert(m.position).second) throw InvalidMorphology("two modules share a cell");
    if (!m.orientation.is_rotation()) throw InvalidMorphology("orientation is not an axis-aligned rotation");
    if (i == 0) continue;
    if (m.kind == ModuleKind::Core) throw InvalidMorphology("more than one core");
    if (!m.parent) throw InvalidMorphology("non-core module without parent");
    const int p = m.parent->module;
    if (p < 0 || p >= i) throw InvalidMorphology("parent must precede child");
    const Module& parent = modules_[static_cast<std::size_t>(p)];
    if (m.parent->socket < 0 || m.parent->socket >= socket_count(parent.kind)) {
      throw InvalidMorphology("parent socket index out of range");
    }
    if (!used_sockets.insert({p, m.parent->socket}).second) throw InvalidMorphology("socket filled twice");
    if (m.tree_depth != parent.tree_depth + 1) throw InvalidMorphology("tree depth mismatch");
    const Vec3 dir = parent.orientation.apply(local_socket_direction(parent.kind, m.parent->socket));
    if (m.position != parent.position + dir) throw InvalidMorphology("position does not match parent socket");
  }
  // Parents precede children, so every chain of parent links ends at the core.
}

std::vector<Socket> open_sockets_of(const MorphologyTree& tree, int owner) {
  std::vector<Socket> out;
  const Module& m = tree.module(owner);
  for (int s = 0; s < socket_count(m.kind); ++s) {
    if (tree.is_socket_filled(owner, s)) continue;
    const Vec3 dir = m.orientation.apply(local_socket_direction(m.kind, s));
    const Vec3 target = m.position + dir;
    if (!in_grid(target)) continue;
    out.push_back(Socket{owner, s, dir, target});
  }
  return out;
}

std::vector<Socket> open_sockets(const MorphologyTree& tree) {
  std::vector<int> order(static_cast<std::size_t>(tree.size()));
  for (int i = 0; i < tree.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return tree.module(a).tree_depth < tree.module(b).tree_depth; });
  std::vector<Socket> out;
  for (int owner : order) {
    auto s = open_sockets_of(tree, owner);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::optional<MorphologyTree> attach(const MorphologyTree& tree, const Socket& socket, ModuleKind kind,
                                     Rotation rotation) {
  if (kind == ModuleKind::Core) throw std::invalid_argument("cannot attach a second core");
  if (tree.size() >= kMaxModules) throw CapacityExceeded();
  if (tree.occupant(socket.target)) return std::nullopt;

  const Module& parent = tree.module(socket.owner);
  const Vec3 local = local_socket_direction(parent.kind, socket.index);
  Orientation orient = parent.orientation.compose(Orientation::yaw_to(local));
  if (rotation == Rotation::Deg90) orient = orient.compose(Orientation::roll90());

  Module child;
  child.kind = kind;
  child.position = parent.position + parent.orientation.apply(local);
  child.orientation = orient;
  child.rotation = rotation;
  child.parent = ParentLink{socket.owner, socket.index};
  child.tree_depth = parent.tree_depth + 1;

  MorphologyTree out = tree;
  out.modules_.push_back(child);
  return out;
}

BodyGrid2d to_body_grid_2d(const MorphologyTree& tree) {
  BodyGrid2d grid;
  for (int i = 0; i < tree.size(); ++i) {
    const Module& m = tree.module(i);
    if (m.kind == ModuleKind::ActiveHinge) grid[{m.position[0], m.position[1]}].push_back(i);
  }
  return grid;
}

std::string to_string(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::Core: return "core";
    case ModuleKind::Brick: return "brick";
    case ModuleKind::ActiveHinge: return "hinge";
  }
  return "?";
}

std::string to_string(Rotation rotation) { return rotation == Rotation::Deg0 ? "deg0" : "deg90"; }

ModuleKind module_kind_from_string(const std::string& s) {
  if (s == "core") return ModuleKind::Core;
  if (s == "brick") return ModuleKind::Brick;
  if (s == "hinge") return ModuleKind::ActiveHinge;
  throw std::invalid_argument("unknown module kind: " + s);
}

Rotation rotation_from_string(const std::string& s) {
  if (s == "deg0") return Rotation::Deg0;
  if (s == "deg90") return Rotation::Deg90;
  throw std::invalid_argument("unknown rotation: " + s);
}

}  // namespace morphoevo
