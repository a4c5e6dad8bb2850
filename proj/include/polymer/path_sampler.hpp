#pragma once

#include <optional>
#include <vector>

#include "polymer/dp_engine.hpp"
#include "polymer/environment.hpp"
#include "polymer/lattice.hpp"
#include "polymer/random.hpp"

namespace polymer {

/// Draws paths from the quenched measure Q_{u, sink} by walking backward
/// from the sink through a retained forward table. At w the predecessor is
/// w - e1 with probability exp(entry(w - e1) - logaddexp(entry(w - e1),
/// entry(w - e2))); a single reachable predecessor is taken without a draw.
class QuenchedSampler {
 public:
  QuenchedSampler(const WeightSource& weights, Point source,
                  std::optional<RegionSpec> region = std::nullopt);
  /// Takes a forward, unconstrained, single-point table.
  explicit QuenchedSampler(FreeEnergyTable table);

  const FreeEnergyTable& table() const { return table_; }
  Point source() const { return source_; }

  /// (P(w - e1), P(w - e2)) for w != source.
  std::pair<double, double> transition(Point w) const;

  PolymerPath sample(Point sink, CounterRng& rng) const;

 private:
  FreeEnergyTable table_;
  Point source_;
};

PolymerPath sample_path(const QuenchedSampler& sampler, Point sink, CounterRng& rng);

/// Same law and the same draws as QuenchedSampler, but stores only every
/// ceil(L/16)-th anti-diagonal of the forward sweep (L = number of levels)
/// and regenerates the slab between checkpoints while walking back.
class CheckpointedSampler {
 public:
  CheckpointedSampler(const WeightSource& weights, Point source, RegionSpec region);

  Point source() const { return source_; }
  int spacing() const { return spacing_; }
  std::size_t checkpoint_count() const { return checkpoints_.size(); }

  PolymerPath sample(Point sink, CounterRng& rng) const;

 private:
  const WeightSource& weights_;
  Point source_;
  RegionSpec region_;
  int spacing_;
  std::vector<RollingForwardSweep::Snapshot> checkpoints_;
};

/// (x - y) / 2 at the first vertex on or past l1 level 2r. Positive values
/// lie below the diagonal.
int midpoint_displacement(const PolymerPath& path, int r);

}  // namespace polymer
