#include "polymer/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polymer/errors.hpp"
#include "polymer/parallel.hpp"
#include "polymer/random.hpp"
#include "polymer/special_functions.hpp"
#include "polymer/statistics.hpp"

namespace polymer {

namespace {

void check_rho(double mu, double rho) {
  if (!(mu > 0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
  if (!(rho > 0 && rho < mu)) {
    throw DomainError("rho must lie in (0, mu), got rho=" + std::to_string(rho) +
                      " mu=" + std::to_string(mu));
  }
}

}  // namespace

StationaryEnvironment::StationaryEnvironment(double mu, double rho, Point base, Point far_corner,
                                             std::uint64_t seed, std::uint64_t replica_id,
                                             std::shared_ptr<const WeightSource> bulk)
    : mu_(mu), rho_(rho), region_(base, far_corner), bulk_(std::move(bulk)) {
  check_rho(mu, rho);
  if (!bulk_) bulk_ = std::make_shared<InverseGammaField>(mu, region_, seed, replica_id);
  if (far_corner.x > base.x && far_corner.y > base.y &&
      !bulk_->region().contains(RegionSpec(base + Point{1, 1}, far_corner))) {
    throw GeometryError("bulk field does not cover the stationary quadrant");
  }

  const LogGammaSampler east_gamma(mu - rho);
  const LogGammaSampler north_gamma(rho);
  const auto east_key = CounterRng::stream_key(seed, StreamTag::kEastBoundary, replica_id);
  const auto north_key = CounterRng::stream_key(seed, StreamTag::kNorthBoundary, replica_id);
  east_.resize(static_cast<std::size_t>(far_corner.x - base.x));
  north_.resize(static_cast<std::size_t>(far_corner.y - base.y));
  for (std::size_t k = 0; k < east_.size(); ++k) {
    auto rng = CounterRng::for_cell_key(east_key, base.x + static_cast<int>(k) + 1, base.y);
    east_[k] = -east_gamma(rng);
  }
  for (std::size_t k = 0; k < north_.size(); ++k) {
    auto rng = CounterRng::for_cell_key(north_key, base.x, base.y + static_cast<int>(k) + 1);
    north_[k] = -north_gamma(rng);
  }
}

double StationaryEnvironment::log_weight(Point p) const {
  const Point v = region_.lower;
  if (!region_.contains(p)) throw GeometryError("cell " + to_string(p) + " outside stationary region");
  if (p == v) return 0.0;
  if (p.y == v.y) return east_[static_cast<std::size_t>(p.x - v.x - 1)];
  if (p.x == v.x) return north_[static_cast<std::size_t>(p.y - v.y - 1)];
  return bulk_->log_weight(p);
}

void StationaryEnvironment::fill_antidiagonal(int level, int x_begin, int x_end,
                                              std::span<double> out) const {
  const Point v = region_.lower;
  const int inner_begin = std::max(x_begin, v.x + 1);
  const int inner_end = std::min(x_end, level - v.y - 1);
  if (inner_begin <= inner_end) {
    bulk_->fill_antidiagonal(
        level, inner_begin, inner_end,
        out.subspan(static_cast<std::size_t>(inner_begin - x_begin),
                    static_cast<std::size_t>(inner_end - inner_begin + 1)));
  }
  if (x_begin == v.x) out[0] = log_weight({v.x, level - v.x});
  if (x_end == level - v.y) out[static_cast<std::size_t>(x_end - x_begin)] = log_weight({x_end, v.y});
}

FreeEnergyTable stationary_table(const StationaryEnvironment& env, const RegionSpec& extent) {
  const Point v = env.base();
  if (!env.region().contains(extent) || extent.lower.x < v.x || extent.lower.y < v.y) {
    throw GeometryError("stationary extent must lie in the environment's quadrant");
  }
  // The base weight is 1, so including it gives Z^rho_{v,v} = 1.
  return log_partition_table(env, v, PathConstraint::none(), StartConvention::kIncludeStart,
                             RegionSpec(v, extent.upper));
}

Point characteristic_point(double mu, double rho, int n) {
  const Direction2 xi = characteristic_direction(mu, rho);
  return {static_cast<int>(std::floor(2.0 * n * xi.e1)),
          static_cast<int>(std::floor(2.0 * n * xi.e2))};
}

std::vector<std::vector<double>> burke_increment_samples(double mu, double rho,
                                                         const DownRightPath& path,
                                                         std::size_t replicas, std::uint64_t seed,
                                                         unsigned threads) {
  check_rho(mu, rho);
  if (path.steps() == 0) throw GeometryError("increment path needs at least one step");
  const RegionSpec box = path.bounding_box();
  if (box.lower.x < 0 || box.lower.y < 0) {
    throw GeometryError("increment path must lie in the nonnegative quadrant");
  }
  std::vector<std::vector<double>> rows(replicas);
  for_each_replica(seed, replicas, threads, [&](std::size_t r) {
    const StationaryEnvironment env(mu, rho, {0, 0}, box.upper, seed, r);
    const FreeEnergyTable table = stationary_table(env, env.region());
    rows[r] = profile_increments(table, path);
  });
  return rows;
}

IndependenceResult burke_independence_check(const std::vector<std::vector<double>>& samples,
                                            std::size_t min_replicas) {
  if (samples.size() < min_replicas) {
    throw StatisticsError("independence check needs at least " + std::to_string(min_replicas) +
                          " replicas, got " + std::to_string(samples.size()));
  }
  const std::size_t k = samples.front().size();
  if (k < 2) throw StatisticsError("independence check needs at least 2 increments");
  for (const auto& row : samples) {
    if (row.size() != k) throw StatisticsError("ragged increment matrix");
  }
  IndependenceResult result;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      PairAccumulator acc;
      for (const auto& row : samples) acc.add(row[i], row[j]);
      const double r = std::abs(acc.correlation());
      if (r > result.max_abs_r || (i == 0 && j == 1)) result = {r, i, j};
    }
  }
  return result;
}

double quenched_exit_probability(const StationaryEnvironment& env, const ExitQuery& query) {
  const Point v = env.base();
  const Point w = query.target;
  if (!env.region().contains(w) || w == v) {
    throw GeometryError("exit target " + to_string(w) + " not reachable from the base");
  }
  const int k = query.threshold;
  if (k < 1 || k > l1_norm(w - v)) {
    throw GeometryError("exit threshold " + std::to_string(k) + " beyond the rectangle");
  }
  const bool east = query.side == ExitSide::kEast;
  const int room = east ? w.x - v.x : w.y - v.y;
  if (k > room) return 0.0;

  const FreeEnergyTable total = stationary_table(env, RegionSpec(v, w));
  const double log_total = total.log_z(w);

  double prefix = 0.0;
  const auto edges = east ? env.east_edges() : env.north_edges();
  for (int j = 0; j < k; ++j) prefix += edges[static_cast<std::size_t>(j)];
  const Point start = east ? v + kE1 * k : v + kE2 * k;
  const SourceMass seed_mass{start, prefix};
  const FreeEnergyTable restricted =
      log_partition_table(env, std::span<const SourceMass>(&seed_mass, 1), PathConstraint::none(),
                          StartConvention::kExcludeStart, RegionSpec(start, w));
  const double p = std::exp(restricted.entry(w) - log_total);
  if (std::isnan(p)) throw NumericError("exit probability is NaN");
  return std::min(1.0, p);
}

SandwichReport rw_sandwich_check(const SandwichParams& params) {
  check_rho(params.mu, params.rho);
  if (params.n < 1) throw DomainError("sandwich needs N >= 1");
  if (!(params.s > 0) || !(params.q0 > 0)) throw DomainError("sandwich needs s > 0 and q0 > 0");
  const double shift = params.q0 * params.s * std::pow(static_cast<double>(params.n), -1.0 / 3.0);
  SandwichReport report;
  report.lambda = params.rho + shift;
  report.eta = params.rho - shift;
  if (!(report.lambda < params.mu) || !(report.eta > 0)) {
    throw DomainError("lambda or eta outside (0, mu); s is too large for N");
  }
  report.characteristic = characteristic_point(params.mu, params.rho, params.n);
  const DownRightPath& theta = params.theta;
  if (!theta.contains(report.characteristic)) {
    throw GeometryError("theta must pass through " + to_string(report.characteristic));
  }
  const double k_max = params.s * std::pow(static_cast<double>(params.n), 2.0 / 3.0);
  if (static_cast<double>(theta.steps()) > k_max) {
    throw GeometryError("theta has more than s N^{2/3} steps");
  }
  report.replicas = params.replicas;
  report.per_replica.assign(params.replicas, true);
  if (theta.steps() == 0) {
    report.held = params.replicas;
    report.frequency = 1.0;
    return report;
  }
  const RegionSpec box = theta.bounding_box();
  if (box.lower.x < 0 || box.lower.y < 0 || box.lower == Point{0, 0}) {
    throw GeometryError("theta must lie in the quadrant away from the origin");
  }
  const Point base{-1, -1};
  const double lower_slack = std::log(0.9);
  const double upper_slack = std::log(10.0 / 9.0);

  std::vector<char> held(params.replicas, 0);
  for_each_replica(params.seed, params.replicas, params.threads, [&](std::size_t r) {
    auto bulk = std::make_shared<InverseGammaField>(params.mu, RegionSpec(base, box.upper),
                                                    params.seed, r);
    const FreeEnergyTable iid = log_partition_table(*bulk, Point{0, 0}, PathConstraint::none(),
                                                    StartConvention::kExcludeStart,
                                                    RegionSpec({0, 0}, box.upper));
    const StationaryEnvironment upper(params.mu, report.lambda, base, box.upper, params.seed, r, bulk);
    const StationaryEnvironment lower(params.mu, report.eta, base, box.upper, params.seed, r, bulk);
    const auto incr = profile_increments(iid, theta);
    const auto x = profile_increments(stationary_table(upper, upper.region()), theta);
    const auto y = profile_increments(stationary_table(lower, lower.region()), theta);
    bool ok = true;
    for (std::size_t i = 0; i < incr.size() && ok; ++i) {
      ok = lower_slack + y[i] <= incr[i] && incr[i] <= upper_slack + x[i];
    }
    held[r] = ok ? 1 : 0;
  });
  for (std::size_t r = 0; r < params.replicas; ++r) {
    report.per_replica[r] = held[r] != 0;
    report.held += held[r];
  }
  report.frequency = static_cast<double>(report.held) / static_cast<double>(params.replicas);
  return report;
}

}  // namespace polymer
