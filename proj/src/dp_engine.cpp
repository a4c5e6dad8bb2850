#include "polymer/dp_engine.hpp"

#include <algorithm>
#include <string>

#include "polymer/errors.hpp"

namespace polymer {

namespace {

constexpr double kMembershipTolerance = 1e-9;

struct LevelRange {
  int begin;
  int end;  // inclusive; empty when end < begin
  bool contains(int x) const { return x >= begin && x <= end; }
  std::size_t size() const { return end < begin ? 0 : static_cast<std::size_t>(end - begin + 1); }
};

LevelRange level_range(const RegionSpec& r, int level) {
  return {std::max(r.lower.x, level - r.upper.y), std::min(r.upper.x, level - r.lower.y)};
}

std::size_t max_diagonal(const RegionSpec& r) {
  return static_cast<std::size_t>(std::min(r.width(), r.height()));
}

void check_finite_entries(std::span<const double> values) {
  for (double v : values) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw NumericError("partition table produced a NaN or +inf entry");
    }
  }
}

// Anchors sorted in sweep order so the sweep can consume them with a cursor.
std::vector<SourceMass> sorted_anchors(std::span<const SourceMass> anchors, const RegionSpec& region,
                                       bool descending) {
  std::vector<SourceMass> out(anchors.begin(), anchors.end());
  for (const auto& s : out) {
    if (!region.contains(s.point)) {
      throw GeometryError("anchor " + to_string(s.point) + " lies outside the table region");
    }
  }
  std::sort(out.begin(), out.end(), [&](const SourceMass& a, const SourceMass& b) {
    if (a.point.level() != b.point.level()) {
      return descending ? a.point.level() > b.point.level() : a.point.level() < b.point.level();
    }
    return a.point.x < b.point.x;
  });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].point == out[i - 1].point) {
      throw GeometryError("duplicate anchor " + to_string(out[i].point));
    }
  }
  return out;
}

struct LayerPair {
  double in = kNegInf;
  double out = kNegInf;
};

// Shared anti-diagonal sweep for both orientations.
FreeEnergyTable sweep_table(const WeightSource& weights, std::span<const SourceMass> anchors_in,
                            const PathConstraint& constraint, StartConvention convention,
                            std::optional<RegionSpec> region_opt, Orientation orientation) {
  const RegionSpec region = region_opt.value_or(weights.region());
  if (!weights.region().contains(region)) {
    throw GeometryError("table region exceeds the weight source region");
  }
  check_cell_cap(region);
  const bool reverse = orientation == Orientation::kReverse;
  const auto anchors = sorted_anchors(anchors_in, region, reverse);
  const bool include_start = convention == StartConvention::kIncludeStart;
  const ConstraintMode mode = constraint.mode();

  std::vector<double> table(region.cell_count(), kNegInf);
  std::map<Point, double> arrivals;

  const std::size_t diag = max_diagonal(region);
  // Forward: layers hold log Z_{src, v}. Reverse: layers hold
  // log Y_v + log Z_{v, sink}, the quantity a predecessor consumes.
  std::vector<LayerPair> prev(diag), cur(diag);
  std::vector<double> wbuf(diag);
  LevelRange prev_range{1, 0};
  std::size_t cursor = 0;

  const int first = reverse ? region.max_level() : region.min_level();
  const int last = reverse ? region.min_level() : region.max_level();
  const int dir = reverse ? -1 : 1;

  for (int level = first; reverse ? level >= last : level <= last; level += dir) {
    const LevelRange range = level_range(region, level);
    weights.fill_antidiagonal(level, range.begin, range.end, std::span<double>(wbuf.data(), range.size()));

    auto neighbor = [&](int x) -> LayerPair {
      return prev_range.contains(x) ? prev[static_cast<std::size_t>(x - prev_range.begin)] : LayerPair{};
    };

    for (int x = range.begin; x <= range.end; ++x) {
      const std::size_t k = static_cast<std::size_t>(x - range.begin);
      const Point p{x, level - x};
      const double w = wbuf[k];
      // Forward predecessors p - e1, p - e2; reverse successors p + e1, p + e2.
      const LayerPair n1 = neighbor(reverse ? x + 1 : x - 1);
      const LayerPair n2 = neighbor(x);

      const bool inside = mode == ConstraintMode::kUnconstrained || constraint.in_parallelogram(p);
      double in_val;
      double out_val = kNegInf;
      if (mode == ConstraintMode::kExited) {
        if (inside) {
          in_val = logaddexp(n1.in, n2.in);
          out_val = logaddexp(n1.out, n2.out);
        } else {
          in_val = kNegInf;
          out_val = logaddexp(logaddexp(n1.in, n2.in), logaddexp(n1.out, n2.out));
        }
      } else {
        in_val = inside ? logaddexp(n1.in, n2.in) : kNegInf;
      }
      if (!reverse) {
        in_val = w + in_val;
        out_val = w + out_val;
      }

      // Arrival value in the reported layer, before any seed mass.
      const bool exited_layer = mode == ConstraintMode::kExited;
      double& seed_target = (mode == ConstraintMode::kExited && !inside) ? out_val : in_val;
      const bool is_anchor = cursor < anchors.size() && anchors[cursor].point == p;
      if (is_anchor) {
        double reported_arrival = exited_layer ? out_val : in_val;
        if (reverse && include_start) reported_arrival = w + reported_arrival;
        arrivals.emplace(p, reported_arrival);
        if (inside || mode == ConstraintMode::kExited) {
          double seed = anchors[cursor].log_mass;
          if (include_start && !reverse) seed += w;
          seed_target = logaddexp(seed, seed_target);
        }
        ++cursor;
      }

      double reported = exited_layer ? out_val : in_val;
      if (reverse && include_start) reported = w + reported;
      table[region.index(p)] = reported;

      if (reverse) {
        cur[k] = {w + in_val, w + out_val};
      } else {
        cur[k] = {in_val, out_val};
      }
    }
    std::swap(prev, cur);
    prev_range = range;
  }

  check_finite_entries(table);
  return FreeEnergyTable(region, std::move(table), std::vector<SourceMass>(anchors_in.begin(), anchors_in.end()),
                         std::move(arrivals), orientation, convention, constraint);
}

}  // namespace

PathConstraint::PathConstraint(Point a, Point b, double half_width, ConstraintMode mode)
    : a_(a), b_(b), half_width_(half_width), mode_(mode) {
  if (mode != ConstraintMode::kUnconstrained) {
    if ((b - a).level() <= 0) {
      throw GeometryError("parallelogram needs b above a in l1 level");
    }
    if (!(half_width >= 0)) throw GeometryError("parallelogram half-width must be nonnegative");
  }
}

bool PathConstraint::in_parallelogram(Point p) const {
  if (mode_ == ConstraintMode::kUnconstrained) return true;
  const Point d = b_ - a_;
  const Point q = p - a_;
  // q = u d + w (-1, 1); determinant d.x + d.y.
  const double det = static_cast<double>(d.x + d.y);
  const double u = static_cast<double>(q.x + q.y) / det;
  const double w = static_cast<double>(d.x * q.y - d.y * q.x) / det;
  return u >= -kMembershipTolerance && u <= 1.0 + kMembershipTolerance &&
         std::abs(w) <= half_width_ + kMembershipTolerance;
}

PathConstraint PathConstraint::with_mode(ConstraintMode mode) const {
  PathConstraint c = *this;
  c.mode_ = mode;
  return c;
}

FreeEnergyTable::FreeEnergyTable(RegionSpec region, std::vector<double> entries,
                                 std::vector<SourceMass> anchors,
                                 std::map<Point, double> anchor_arrivals, Orientation orientation,
                                 StartConvention convention, PathConstraint constraint)
    : region_(region),
      entries_(std::move(entries)),
      anchors_(std::move(anchors)),
      arrivals_(std::move(anchor_arrivals)),
      orientation_(orientation),
      convention_(convention),
      constraint_(constraint) {
  if (entries_.size() != region_.cell_count()) {
    throw GeometryError("table entries do not match the region");
  }
}

std::optional<Point> FreeEnergyTable::point_anchor() const {
  if (anchors_.size() == 1) return anchors_.front().point;
  return std::nullopt;
}

double FreeEnergyTable::log_z(Point p) const {
  if (!region_.contains(p)) return kNegInf;
  if (convention_ == StartConvention::kIncludeStart) return entries_[region_.index(p)];
  if (auto it = arrivals_.find(p); it != arrivals_.end()) return it->second;
  return entries_[region_.index(p)];
}

FreeEnergyTable log_partition_table(const WeightSource& weights, std::span<const SourceMass> sources,
                                    const PathConstraint& constraint, StartConvention convention,
                                    std::optional<RegionSpec> region) {
  if (sources.empty()) throw GeometryError("log_partition_table needs at least one source");
  return sweep_table(weights, sources, constraint, convention, region, Orientation::kForward);
}

FreeEnergyTable log_partition_table(const WeightSource& weights, Point source,
                                    const PathConstraint& constraint, StartConvention convention,
                                    std::optional<RegionSpec> region) {
  const SourceMass s{source, 0.0};
  return log_partition_table(weights, std::span<const SourceMass>(&s, 1), constraint, convention, region);
}

FreeEnergyTable reverse_table(const WeightSource& weights, std::span<const SourceMass> sinks,
                              const PathConstraint& constraint, StartConvention convention,
                              std::optional<RegionSpec> region) {
  if (sinks.empty()) throw GeometryError("reverse_table needs at least one sink");
  return sweep_table(weights, sinks, constraint, convention, region, Orientation::kReverse);
}

FreeEnergyTable reverse_table(const WeightSource& weights, Point sink, const PathConstraint& constraint,
                              StartConvention convention, std::optional<RegionSpec> region) {
  const SourceMass s{sink, 0.0};
  return reverse_table(weights, std::span<const SourceMass>(&s, 1), constraint, convention, region);
}

RollingForwardSweep::RollingForwardSweep(const WeightSource& weights, RegionSpec region, Point source)
    : weights_(weights), source_(source) {
  if (!region.contains(source)) throw GeometryError("sweep source outside region");
  if (!weights.region().contains(region)) throw GeometryError("sweep region exceeds weight source");
  // Cells not above-right of the source are unreachable.
  region_ = RegionSpec(source, region.upper);
  const std::size_t diag = max_diagonal(region_);
  cur_.assign(diag, kNegInf);
  prev_.assign(diag, kNegInf);
  wbuf_.assign(diag, 0.0);
  level_ = source.level();
  x_begin_ = x_end_ = source.x;
  cur_[0] = 0.0;
}

double RollingForwardSweep::at(Point p) const {
  if (p.level() != level_) throw GeometryError("point not on the current sweep level");
  if (p.x < x_begin_ || p.x > x_end_) return kNegInf;
  return cur_[static_cast<std::size_t>(p.x - x_begin_)];
}

bool RollingForwardSweep::advance() {
  const int level = level_ + 1;
  if (level > region_.max_level()) return false;
  const LevelRange range = level_range(region_, level);
  const std::size_t n = range.size();
  weights_.fill_antidiagonal(level, range.begin, range.end, std::span<double>(wbuf_.data(), n));
  std::swap(prev_, cur_);
  const int pb = x_begin_;
  const int pe = x_end_;
  const double* prev = prev_.data();
  const double* w = wbuf_.data();
  double* out = cur_.data();
  for (int x = range.begin; x <= range.end; ++x) {
    const double a = (x - 1 >= pb) ? prev[x - 1 - pb] : kNegInf;
    const double b = (x <= pe) ? prev[x - pb] : kNegInf;
    out[x - range.begin] = w[x - range.begin] + logaddexp(a, b);
  }
  level_ = level;
  x_begin_ = range.begin;
  x_end_ = range.end;
  return true;
}

RollingForwardSweep::Snapshot RollingForwardSweep::snapshot() const {
  const auto diag = current();
  return {level_, x_begin_, std::vector<double>(diag.begin(), diag.end())};
}

void RollingForwardSweep::restore(const Snapshot& snap) {
  if (snap.values.empty() || snap.values.size() > cur_.size()) {
    throw GeometryError("snapshot does not fit the sweep");
  }
  std::copy(snap.values.begin(), snap.values.end(), cur_.begin());
  level_ = snap.level;
  x_begin_ = snap.x_begin;
  x_end_ = snap.x_begin + static_cast<int>(snap.values.size()) - 1;
}

RollingReverseSweep::RollingReverseSweep(const WeightSource& weights, RegionSpec region, Point sink)
    : weights_(weights), sink_(sink) {
  if (!region.contains(sink)) throw GeometryError("sweep sink outside region");
  if (!weights.region().contains(region)) throw GeometryError("sweep region exceeds weight source");
  region_ = RegionSpec(region.lower, sink);
  const std::size_t diag = max_diagonal(region_);
  cur_.assign(diag, kNegInf);
  gcur_.assign(diag, kNegInf);
  prev_.assign(diag, kNegInf);
  gprev_.assign(diag, kNegInf);
  wbuf_.assign(diag, 0.0);
  level_ = sink.level();
  x_begin_ = x_end_ = sink.x;
  cur_[0] = 0.0;
  gcur_[0] = weights.log_weight(sink);
}

double RollingReverseSweep::at(Point p) const {
  if (p.level() != level_) throw GeometryError("point not on the current sweep level");
  if (p.x < x_begin_ || p.x > x_end_) return kNegInf;
  return cur_[static_cast<std::size_t>(p.x - x_begin_)];
}

bool RollingReverseSweep::advance() {
  const int level = level_ - 1;
  if (level < region_.min_level()) return false;
  const LevelRange range = level_range(region_, level);
  const std::size_t n = range.size();
  weights_.fill_antidiagonal(level, range.begin, range.end, std::span<double>(wbuf_.data(), n));
  std::swap(prev_, cur_);
  std::swap(gprev_, gcur_);
  const int pb = x_begin_;
  const int pe = x_end_;
  for (int x = range.begin; x <= range.end; ++x) {
    const double a = (x + 1 <= pe) ? gprev_[static_cast<std::size_t>(x + 1 - pb)] : kNegInf;
    const double b = (x >= pb) ? gprev_[static_cast<std::size_t>(x - pb)] : kNegInf;
    const std::size_t k = static_cast<std::size_t>(x - range.begin);
    cur_[k] = logaddexp(a, b);
    gcur_[k] = wbuf_[k] + cur_[k];
  }
  level_ = level;
  x_begin_ = range.begin;
  x_end_ = range.end;
  return true;
}

std::vector<double> diagonal_free_energies(const WeightSource& weights, std::span<const int> diagonal_points) {
  if (diagonal_points.empty()) return {};
  int top = 0;
  for (int a : diagonal_points) {
    if (a <= 0) throw GeometryError("diagonal endpoint must be positive");
    top = std::max(top, a);
  }
  RollingForwardSweep sweep(weights, RegionSpec::square(top), {0, 0});
  std::vector<double> out(diagonal_points.size(), kNegInf);
  while (sweep.advance()) {
    if (sweep.level() % 2 != 0) continue;
    const int a = sweep.level() / 2;
    for (std::size_t i = 0; i < diagonal_points.size(); ++i) {
      if (diagonal_points[i] == a) out[i] = sweep.at(diag(a));
    }
  }
  return out;
}

double segment_logsum(const FreeEnergyTable& table, const AntidiagonalSegment& segment) {
  double acc = kNegInf;
  for (Point p : segment.points()) {
    if (!table.region().contains(p)) {
      throw GeometryError("segment point " + to_string(p) + " outside table region");
    }
    acc = logaddexp(acc, table.log_z(p));
  }
  return acc;
}

SegmentMax segment_logmax(const FreeEnergyTable& table, const AntidiagonalSegment& segment) {
  SegmentMax best;
  for (Point p : segment.points()) {
    if (!table.region().contains(p)) {
      throw GeometryError("segment point " + to_string(p) + " outside table region");
    }
    const double v = table.log_z(p);
    if (v > best.value) {
      best.value = v;
      best.argmax = p;
    }
  }
  return best;
}

std::vector<double> profile_increments(const FreeEnergyTable& table, const DownRightPath& theta) {
  const auto& z = theta.vertices();
  std::vector<double> out;
  if (z.empty()) return out;
  out.reserve(z.size() - 1);
  double prev = table.log_z(z.front());
  if (!std::isfinite(prev)) throw DomainError("profile vertex " + to_string(z.front()) + " has no finite entry");
  for (std::size_t i = 1; i < z.size(); ++i) {
    const double v = table.log_z(z[i]);
    if (!std::isfinite(v)) throw DomainError("profile vertex " + to_string(z[i]) + " has no finite entry");
    out.push_back(v - prev);
    prev = v;
  }
  return out;
}

CrossingArgmax crossing_argmax(const WeightSource& weights, int n, int r) {
  if (!(r > 0 && r < n)) {
    throw GeometryError("crossing level r=" + std::to_string(r) + " must satisfy 0 < r < N=" + std::to_string(n));
  }
  const RegionSpec box = RegionSpec::square(n);
  const int level = 2 * r;
  RollingForwardSweep fwd(weights, box, {0, 0});
  while (fwd.level() < level) fwd.advance();
  RollingReverseSweep rev(weights, box, diag(n));
  while (rev.level() > level) rev.advance();

  CrossingArgmax result;
  double second = kNegInf;
  for (int x = fwd.x_begin(); x <= fwd.x_end(); ++x) {
    const Point p{x, level - x};
    const double v = fwd.at(p) + rev.at(p);
    result.log_total = logaddexp(result.log_total, v);
    ++result.candidates;
    if (v > result.best) {
      second = result.best;
      result.best = v;
      result.point = p;
    } else if (v > second) {
      second = v;
    }
  }
  result.gap = result.candidates > 1 ? result.best - second : std::numeric_limits<double>::infinity();
  return result;
}

double log_partition_max(const WeightSource& weights, std::span<const Point> from, std::span<const Point> to) {
  if (from.empty() || to.empty()) return kNegInf;
  const bool forward = from.size() <= to.size();
  const auto& anchors = forward ? from : to;
  const auto& targets = forward ? to : from;
  if (anchors.size() > 1000) throw GeometryError("log_partition_max supports sets of at most 1000 points");
  double best = kNegInf;
  for (Point a : anchors) {
    const auto table = forward ? log_partition_table(weights, a) : reverse_table(weights, a);
    for (Point t : targets) best = std::max(best, table.log_z(t));
  }
  return best;
}

}  // namespace polymer
