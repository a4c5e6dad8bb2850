#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "polymer/environment.hpp"
#include "polymer/lattice.hpp"

namespace polymer {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b) without overflow; exact -inf handling.
inline double logaddexp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

/// Whether the weight at the first vertex of a path is counted.
enum class StartConvention {
  kExcludeStart,  ///< prod_{i>=1} Y_{gamma_i}
  kIncludeStart,  ///< prod_{i>=0} Y_{gamma_i}
};

enum class ConstraintMode {
  kUnconstrained,
  kInside,  ///< every vertex in the parallelogram
  kExited,  ///< at least one vertex outside the parallelogram
};

/// Parallelogram R^k_{a,b} with corners a +- (-k, k) and b +- (-k, k).
///
/// p is a member when p = a + u (b - a) + w (-1, 1) with 0 <= u <= 1 and
/// |w| <= k, boundary inclusive with a 1e-9 tolerance on the solve. For
/// paths whose vertices all lie between the levels of a and b, leaving the
/// parallelogram is the same as crossing one of its sides parallel to b - a.
class PathConstraint {
 public:
  PathConstraint() = default;
  PathConstraint(Point a, Point b, double half_width, ConstraintMode mode);

  static PathConstraint none() { return {}; }

  ConstraintMode mode() const { return mode_; }
  Point a() const { return a_; }
  Point b() const { return b_; }
  double half_width() const { return half_width_; }

  bool in_parallelogram(Point p) const;
  /// Same geometry, different mode.
  PathConstraint with_mode(ConstraintMode mode) const;

 private:
  Point a_{};
  Point b_{};
  double half_width_ = 0;
  ConstraintMode mode_ = ConstraintMode::kUnconstrained;
};

/// A source (or, for reverse tables, sink) vertex with initial log-mass.
struct SourceMass {
  Point point;
  double log_mass = 0.0;
};

enum class Orientation {
  kForward,  ///< entry(v) = log Z_{source, v}
  kReverse,  ///< entry(v) = log Z_{v, sink}
};

/// Log-space table of partition functions anchored at a source (forward)
/// or sink (reverse). Immutable once built.
class FreeEnergyTable {
 public:
  FreeEnergyTable(RegionSpec region, std::vector<double> entries, std::vector<SourceMass> anchors,
                  std::map<Point, double> anchor_arrivals, Orientation orientation,
                  StartConvention convention, PathConstraint constraint);

  RegionSpec region() const { return region_; }
  Orientation orientation() const { return orientation_; }
  StartConvention convention() const { return convention_; }
  const PathConstraint& constraint() const { return constraint_; }
  const std::vector<SourceMass>& anchors() const { return anchors_; }
  std::optional<Point> point_anchor() const;

  /// Recursion value; anchors carry their seed mass (0 for a point source
  /// under the exclude-start convention). -inf outside the region.
  double entry(Point p) const {
    return region_.contains(p) ? entries_[region_.index(p)] : kNegInf;
  }

  /// Free energy under the polymer convention. Excluding the start weight,
  /// a zero-length path carries no mass, so Z_{u,u} = 0 and anchors report
  /// only the mass that reaches them along paths of positive length. With
  /// the start weight included the zero-length path weighs Y_u.
  double log_z(Point p) const;

  std::span<const double> entries() const { return entries_; }

 private:
  RegionSpec region_;
  std::vector<double> entries_;
  std::vector<SourceMass> anchors_;
  std::map<Point, double> arrivals_;
  Orientation orientation_;
  StartConvention convention_;
  PathConstraint constraint_;
};

/// Forward anti-diagonal sweep over `region` (defaults to the source's
/// region). entry(v) = log Y_v + logaddexp(entry(v - e1), entry(v - e2))
/// with -inf for predecessors outside the region.
///
/// Inside mode masks cells outside the parallelogram with -inf. Exited
/// mode runs a two-layer recursion (never exited / has exited) and
/// reports the has-exited layer.
FreeEnergyTable log_partition_table(const WeightSource& weights, std::span<const SourceMass> sources,
                                    const PathConstraint& constraint = PathConstraint::none(),
                                    StartConvention convention = StartConvention::kExcludeStart,
                                    std::optional<RegionSpec> region = std::nullopt);

FreeEnergyTable log_partition_table(const WeightSource& weights, Point source,
                                    const PathConstraint& constraint = PathConstraint::none(),
                                    StartConvention convention = StartConvention::kExcludeStart,
                                    std::optional<RegionSpec> region = std::nullopt);

/// Reverse sweep: entry(v) = log Z_{v, sink}, weights counted at the
/// vertices after v (or at v too under kIncludeStart).
FreeEnergyTable reverse_table(const WeightSource& weights, std::span<const SourceMass> sinks,
                              const PathConstraint& constraint = PathConstraint::none(),
                              StartConvention convention = StartConvention::kExcludeStart,
                              std::optional<RegionSpec> region = std::nullopt);

FreeEnergyTable reverse_table(const WeightSource& weights, Point sink,
                              const PathConstraint& constraint = PathConstraint::none(),
                              StartConvention convention = StartConvention::kExcludeStart,
                              std::optional<RegionSpec> region = std::nullopt);

/// Single-source, unconstrained forward sweep holding only two
/// anti-diagonals. Arithmetic is identical to log_partition_table, so the
/// values agree bit for bit.
class RollingForwardSweep {
 public:
  RollingForwardSweep(const WeightSource& weights, RegionSpec region, Point source);

  /// Level of the diagonal held in current().
  int level() const { return level_; }
  int x_begin() const { return x_begin_; }
  int x_end() const { return x_end_; }
  std::span<const double> current() const {
    return {cur_.data(), static_cast<std::size_t>(x_end_ - x_begin_ + 1)};
  }
  /// Entry at p, which must lie on the current level.
  double at(Point p) const;
  /// Computes the next level. Returns false once the region is exhausted.
  bool advance();

  struct Snapshot {
    int level = 0;
    int x_begin = 0;
    std::vector<double> values;
  };
  /// Copy of the current diagonal; restore() rewinds or fast-forwards to it.
  Snapshot snapshot() const;
  void restore(const Snapshot& snap);

  RegionSpec region() const { return region_; }

 private:
  const WeightSource& weights_;
  RegionSpec region_;
  Point source_;
  int level_;
  int x_begin_;
  int x_end_;
  std::vector<double> cur_;
  std::vector<double> prev_;
  std::vector<double> wbuf_;
};

/// Mirror of RollingForwardSweep: descending levels, entry(v) = log Z_{v, sink}.
class RollingReverseSweep {
 public:
  RollingReverseSweep(const WeightSource& weights, RegionSpec region, Point sink);

  int level() const { return level_; }
  int x_begin() const { return x_begin_; }
  int x_end() const { return x_end_; }
  std::span<const double> current() const {
    return {cur_.data(), static_cast<std::size_t>(x_end_ - x_begin_ + 1)};
  }
  double at(Point p) const;
  bool advance();

 private:
  const WeightSource& weights_;
  RegionSpec region_;
  Point sink_;
  int level_;
  int x_begin_;
  int x_end_;
  std::vector<double> cur_;   // log Z_{v, sink}
  std::vector<double> gcur_;  // log Y_v + log Z_{v, sink}
  std::vector<double> prev_;
  std::vector<double> gprev_;
  std::vector<double> wbuf_;
};

/// log Z from the table's source to each requested diagonal point (a,a),
/// using a rolling sweep from (0,0) over [0, max]^2.
std::vector<double> diagonal_free_energies(const WeightSource& weights, std::span<const int> diagonal_points);

struct SegmentMax {
  double value = kNegInf;
  std::optional<Point> argmax;
};

/// log of the summed mass over the segment members, i.e. log Z_{source, segment}.
double segment_logsum(const FreeEnergyTable& table, const AntidiagonalSegment& segment);
/// Largest member entry; ties go to the smallest e1 coordinate.
SegmentMax segment_logmax(const FreeEnergyTable& table, const AntidiagonalSegment& segment);

/// log Z(z_i) - log Z(z_{i-1}) for i = 1..k along a down-right path.
std::vector<double> profile_increments(const FreeEnergyTable& table, const DownRightPath& theta);

struct CrossingArgmax {
  Point point;
  double best = kNegInf;
  /// best minus the runner-up; +inf when L_r has a single candidate.
  double gap = std::numeric_limits<double>::infinity();
  /// log Z_{0,N}, the logsum over the same candidates.
  double log_total = kNegInf;
  std::size_t candidates = 0;

  /// Anti-diagonal offset (x - y) / 2, positive below the diagonal.
  int displacement() const { return (point.x - point.y) / 2; }
};

/// Maximizer over p in L_r within [0,N]^2 of log Z_{0,p} + log Z_{p,N}.
CrossingArgmax crossing_argmax(const WeightSource& weights, int n, int r);

/// max over a in A, b in B of log Z_{a,b}, by one table per point of the
/// smaller set. Sets are capped at 1000 points.
double log_partition_max(const WeightSource& weights, std::span<const Point> from,
                         std::span<const Point> to);

}  // namespace polymer
