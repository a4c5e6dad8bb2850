#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "polymer/errors.hpp"

namespace polymer {

/// A point of Z^2. `x` is the e1 coordinate, `y` the e2 coordinate.
struct Point {
  int x = 0;
  int y = 0;

  constexpr Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  constexpr Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  constexpr Point operator*(int k) const { return {x * k, y * k}; }
  constexpr auto operator<=>(const Point&) const = default;

  /// l1 level x + y; anti-diagonals are level sets.
  constexpr int level() const { return x + y; }
};

inline constexpr Point kE1{1, 0};
inline constexpr Point kE2{0, 1};

constexpr Point diag(int a) { return {a, a}; }

inline int l1_norm(Point p) { return std::abs(p.x) + std::abs(p.y); }
inline int linf_norm(Point p) { return std::max(std::abs(p.x), std::abs(p.y)); }

std::string to_string(Point p);

/// Closed lattice rectangle [lower.x, upper.x] x [lower.y, upper.y].
struct RegionSpec {
  Point lower;
  Point upper;

  RegionSpec() = default;
  RegionSpec(Point lo, Point hi);

  /// Square [0, n] x [0, n].
  static RegionSpec square(int n) { return RegionSpec({0, 0}, {n, n}); }

  int width() const { return upper.x - lower.x + 1; }
  int height() const { return upper.y - lower.y + 1; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
  }
  bool contains(Point p) const {
    return p.x >= lower.x && p.x <= upper.x && p.y >= lower.y && p.y <= upper.y;
  }
  bool contains(const RegionSpec& r) const { return contains(r.lower) && contains(r.upper); }
  /// Row-major index, rows indexed by the e2 coordinate.
  std::size_t index(Point p) const {
    return static_cast<std::size_t>(p.y - lower.y) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(p.x - lower.x);
  }
  int min_level() const { return lower.level(); }
  int max_level() const { return upper.level(); }

  bool operator==(const RegionSpec&) const = default;
};

/// Default cap on materialized cells (8 bytes each).
inline constexpr std::size_t kDefaultCellCap = std::size_t{1} << 27;

/// Throws MemoryCapError when `region` exceeds `cap` cells.
void check_cell_cap(const RegionSpec& region, std::size_t cap = kDefaultCellCap);

/// Anti-diagonal segment {a + (j,-j) : |j| <= k}.
struct AntidiagonalSegment {
  Point center;
  int half_width = 0;

  /// Members ordered by increasing e1 coordinate.
  std::vector<Point> points() const;
  /// Members that lie in `region`, same order.
  std::vector<Point> points_in(const RegionSpec& region) const;
};

/// Lattice path with steps e1 or -e2, z0 has the largest e2 coordinate.
class DownRightPath {
 public:
  DownRightPath() = default;
  /// Validates that consecutive vertices differ by e1 or -e2.
  explicit DownRightPath(std::vector<Point> vertices);

  /// Path from `start` taking `steps`, each 'E' (e1) or 'S' (-e2).
  static DownRightPath from_steps(Point start, const std::string& steps);
  /// Horizontal path of k steps, centered on `through` (k/2 steps before it).
  static DownRightPath horizontal_through(Point through, int k);
  /// Staircase alternating -e2 and e1 steps, starting with -e2.
  static DownRightPath staircase(Point start, int k);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t steps() const { return vertices_.empty() ? 0 : vertices_.size() - 1; }
  /// True when step i (1-based) is an e1 step.
  bool is_east_step(std::size_t i) const { return vertices_[i].x != vertices_[i - 1].x; }
  bool contains(Point p) const;
  /// Smallest rectangle containing every vertex.
  RegionSpec bounding_box() const;

 private:
  std::vector<Point> vertices_;
};

/// Monotone up-right lattice path.
class PolymerPath {
 public:
  PolymerPath() = default;
  explicit PolymerPath(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  Point start() const { return vertices_.front(); }
  Point end() const { return vertices_.back(); }
  std::size_t steps() const { return vertices_.size() - 1; }

  /// Run-length encoding of the step string, e.g. "E3N2E1".
  std::string run_length_steps() const;

  bool operator==(const PolymerPath&) const = default;

 private:
  std::vector<Point> vertices_;
};

}  // namespace polymer
