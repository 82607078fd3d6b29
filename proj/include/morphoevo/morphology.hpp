#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace morphoevo {

enum class ModuleKind : std::uint8_t { Core, Brick, ActiveHinge };
enum class Rotation : std::uint8_t { Deg0, Deg90 };

using Vec3 = std::array<int, 3>;

inline constexpr int kMaxModules = 10;
inline constexpr int kGridHalf = 10;

constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
constexpr Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool in_grid(const Vec3& p);

/// One of the 24 axis-aligned rotations. Maps the local frame
/// (right = +x, forward = +y, up = +z) into world coordinates.
class Orientation {
 public:
  using Matrix = std::array<std::array<int, 3>, 3>;

  Orientation();  // identity
  explicit Orientation(const Matrix& m);

  /// Rotation about the local up axis that takes local forward onto `dir`.
  /// `dir` must be a lateral unit vector (z component 0).
  static Orientation yaw_to(const Vec3& dir);
  /// +90 degree roll about the local forward axis (local up -> local right).
  static Orientation roll90();

  Vec3 apply(const Vec3& v) const;
  Orientation compose(const Orientation& inner) const;

  Vec3 forward() const { return apply({0, 1, 0}); }
  Vec3 up() const { return apply({0, 0, 1}); }
  Vec3 right() const { return apply({1, 0, 0}); }

  /// True when the matrix is a signed permutation with determinant +1.
  bool is_rotation() const;
  const Matrix& matrix() const { return m_; }

  friend bool operator==(const Orientation&, const Orientation&) = default;

 private:
  Matrix m_;
};

struct ParentLink {
  int module = 0;
  int socket = 0;
  friend bool operator==(const ParentLink&, const ParentLink&) = default;
};

struct Module {
  ModuleKind kind = ModuleKind::Core;
  Vec3 position{0, 0, 0};
  Orientation orientation;
  Rotation rotation = Rotation::Deg0;
  std::optional<ParentLink> parent;
  int tree_depth = 0;
  friend bool operator==(const Module&, const Module&) = default;
};

struct Socket {
  int owner = 0;
  int index = 0;
  Vec3 direction{0, 0, 0};
  Vec3 target{0, 0, 0};
  friend bool operator==(const Socket&, const Socket&) = default;
};

class CapacityExceeded : public std::runtime_error {
 public:
  CapacityExceeded() : std::runtime_error("morphology already holds the maximum of 10 modules") {}
};

class InvalidMorphology : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of child sockets a module of `kind` exposes.
int socket_count(ModuleKind kind);
/// Socket direction in the owner's local frame.
Vec3 local_socket_direction(ModuleKind kind, int socket);

/// Robot body: a tree of modules rooted at the core (index 0).
class MorphologyTree {
 public:
  MorphologyTree();  // core only

  const std::vector<Module>& modules() const { return modules_; }
  const Module& module(int id) const { return modules_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(modules_.size()); }

  /// Children of `id` ordered by socket index.
  std::vector<int> children(int id) const;
  std::optional<int> occupant(const Vec3& cell) const;
  bool is_socket_filled(int owner, int socket) const;
  int count(ModuleKind kind) const;

  /// Checks every structural invariant; throws InvalidMorphology.
  void validate() const;

  friend bool operator==(const MorphologyTree&, const MorphologyTree&) = default;

 private:
  friend std::optional<MorphologyTree> attach(const MorphologyTree&, const Socket&, ModuleKind, Rotation);
  std::vector<Module> modules_;
};

/// Unfilled sockets whose target lies in the grid, ordered by
/// (owner depth, owner index, socket index). Occupied targets are included.
std::vector<Socket> open_sockets(const MorphologyTree& tree);
/// Open sockets of a single module, in socket order.
std::vector<Socket> open_sockets_of(const MorphologyTree& tree, int owner);

/// Places a module at the socket's target. Returns nullopt when the target
/// cell is occupied. Throws CapacityExceeded at 10 modules.
std::optional<MorphologyTree> attach(const MorphologyTree& tree, const Socket& socket, ModuleKind kind,
                                     Rotation rotation);

using BodyGrid2d = std::map<std::pair<int, int>, std::vector<int>>;
/// Projects hinge positions onto (x, y); joint ids per cell in module order.
BodyGrid2d to_body_grid_2d(const MorphologyTree& tree);

std::string to_string(ModuleKind kind);
std::string to_string(Rotation rotation);
ModuleKind module_kind_from_string(const std::string& s);
Rotation rotation_from_string(const std::string& s);

}  // namespace morphoevo
