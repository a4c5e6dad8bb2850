#include "polymer/path_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polymer/errors.hpp"

namespace polymer {

namespace {

// exp(a - logaddexp(a, b)) written in terms of a - b only.
double west_share(double west, double south) {
  const double d = west - south;
  if (d >= 0) return 1.0 / (1.0 + std::exp(-d));
  const double e = std::exp(d);
  return e / (1.0 + e);
}

// One backward step from w given the two predecessor entries.
Point step_back(Point w, double west, double south, CounterRng& rng) {
  if (west == kNegInf && south == kNegInf) {
    throw NumericError("backward step from " + to_string(w) + " has no reachable predecessor");
  }
  if (south == kNegInf) return w - kE1;
  if (west == kNegInf) return w - kE2;
  return rng.uniform() < west_share(west, south) ? w - kE1 : w - kE2;
}

void check_sink(Point source, Point sink, const RegionSpec& region) {
  if (!region.contains(sink)) throw GeometryError("sink " + to_string(sink) + " outside the table");
  if (sink == source || sink.x < source.x || sink.y < source.y) {
    throw GeometryError("sink " + to_string(sink) + " not reachable by a path of positive length");
  }
}

}  // namespace

QuenchedSampler::QuenchedSampler(const WeightSource& weights, Point source,
                                 std::optional<RegionSpec> region)
    : QuenchedSampler(log_partition_table(weights, source, PathConstraint::none(),
                                          StartConvention::kExcludeStart, region)) {}

QuenchedSampler::QuenchedSampler(FreeEnergyTable table) : table_(std::move(table)) {
  const auto anchor = table_.point_anchor();
  if (!anchor || table_.orientation() != Orientation::kForward ||
      table_.constraint().mode() != ConstraintMode::kUnconstrained) {
    throw GeometryError("sampler needs a forward unconstrained single-source table");
  }
  source_ = *anchor;
}

std::pair<double, double> QuenchedSampler::transition(Point w) const {
  if (w == source_) throw GeometryError("no backward transition at the source");
  const double west = table_.entry(w - kE1);
  const double south = table_.entry(w - kE2);
  if (west == kNegInf && south == kNegInf) return {0.0, 0.0};
  if (south == kNegInf) return {1.0, 0.0};
  if (west == kNegInf) return {0.0, 1.0};
  return {west_share(west, south), west_share(south, west)};
}

PolymerPath QuenchedSampler::sample(Point sink, CounterRng& rng) const {
  check_sink(source_, sink, table_.region());
  if (!std::isfinite(table_.entry(sink))) {
    throw NumericError("sink " + to_string(sink) + " has a non-finite entry");
  }
  std::vector<Point> reversed{sink};
  Point w = sink;
  while (w != source_) {
    w = step_back(w, table_.entry(w - kE1), table_.entry(w - kE2), rng);
    reversed.push_back(w);
  }
  std::reverse(reversed.begin(), reversed.end());
  return PolymerPath(std::move(reversed));
}

PolymerPath sample_path(const QuenchedSampler& sampler, Point sink, CounterRng& rng) {
  return sampler.sample(sink, rng);
}

CheckpointedSampler::CheckpointedSampler(const WeightSource& weights, Point source,
                                         RegionSpec region)
    : weights_(weights), source_(source), region_(RegionSpec(source, region.upper)) {
  RollingForwardSweep sweep(weights, region, source);
  const int levels = region_.max_level() - source.level() + 1;
  spacing_ = std::max(1, (levels + 15) / 16);
  checkpoints_.push_back(sweep.snapshot());
  while (sweep.advance()) {
    if ((sweep.level() - source.level()) % spacing_ == 0) checkpoints_.push_back(sweep.snapshot());
  }
}

PolymerPath CheckpointedSampler::sample(Point sink, CounterRng& rng) const {
  check_sink(source_, sink, region_);
  const int base_level = source_.level();
  RollingForwardSweep sweep(weights_, region_, source_);
  std::vector<RollingForwardSweep::Snapshot> slab;

  std::vector<Point> reversed{sink};
  Point w = sink;
  bool checked_sink = false;
  while (w != source_) {
    // Regenerate levels [checkpoint, w.level() - 1], or through the sink
    // level on the first slab so its entry can be validated.
    const int top = checked_sink ? w.level() - 1 : w.level();
    const std::size_t c = static_cast<std::size_t>((std::min(top, w.level() - 1) - base_level) / spacing_);
    const int bottom = base_level + static_cast<int>(c) * spacing_;
    sweep.restore(checkpoints_[c]);
    slab.clear();
    slab.push_back(sweep.snapshot());
    while (sweep.level() < top && sweep.advance()) slab.push_back(sweep.snapshot());

    auto entry = [&](Point p) {
      const auto& snap = slab[static_cast<std::size_t>(p.level() - bottom)];
      const int i = p.x - snap.x_begin;
      if (i < 0 || i >= static_cast<int>(snap.values.size())) return kNegInf;
      return snap.values[static_cast<std::size_t>(i)];
    };
    if (!checked_sink) {
      if (!std::isfinite(entry(sink))) {
        throw NumericError("sink " + to_string(sink) + " has a non-finite entry");
      }
      checked_sink = true;
    }
    while (w != source_ && w.level() - 1 >= bottom) {
      w = step_back(w, entry(w - kE1), entry(w - kE2), rng);
      reversed.push_back(w);
    }
  }
  std::reverse(reversed.begin(), reversed.end());
  return PolymerPath(std::move(reversed));
}

int midpoint_displacement(const PolymerPath& path, int r) {
  const int target = 2 * r;
  if (target < path.start().level() || target > path.end().level()) {
    throw GeometryError("level " + std::to_string(r) + " outside the path's span");
  }
  for (Point p : path.vertices()) {
    if (p.level() >= target) return (p.x - p.y) / 2;
  }
  throw GeometryError("path never reaches level " + std::to_string(r));
}

}  // namespace polymer
