#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "polymer/dp_engine.hpp"
#include "polymer/environment.hpp"
#include "polymer/lattice.hpp"

namespace polymer {

/// Increment-stationary polymer with base v. Cells v + k e1 carry the edge
/// weight I_k ~ InverseGamma(mu - rho), cells v + k e2 carry J_k ~
/// InverseGamma(rho), the base itself carries weight 1 and every other
/// cell reads the bulk field.
///
/// Boundary variates come from their own stream tags, keyed by the
/// absolute coordinates of the cell, so one bulk field can be shared by
/// several environments with different rho.
class StationaryEnvironment final : public WeightSource {
 public:
  /// A null bulk means the lazy i.i.d. field of (mu, seed, replica_id).
  StationaryEnvironment(double mu, double rho, Point base, Point far_corner, std::uint64_t seed,
                        std::uint64_t replica_id,
                        std::shared_ptr<const WeightSource> bulk = nullptr);

  RegionSpec region() const override { return region_; }
  double log_weight(Point p) const override;
  void fill_antidiagonal(int level, int x_begin, int x_end, std::span<double> out) const override;

  double mu() const { return mu_; }
  double rho() const { return rho_; }
  Point base() const { return region_.lower; }
  const WeightSource& bulk() const { return *bulk_; }

  /// log I_k for k = 1..width-1, stored at index k - 1.
  std::span<const double> east_edges() const { return east_; }
  /// log J_k for k = 1..height-1.
  std::span<const double> north_edges() const { return north_; }

 private:
  double mu_;
  double rho_;
  RegionSpec region_;
  std::shared_ptr<const WeightSource> bulk_;
  std::vector<double> east_;
  std::vector<double> north_;
};

/// log Z^rho_{v, w} for w in [v, extent.upper]. log_z(v) = entry(v) = 0
/// and the boundary rows are prefix sums of the log edge weights.
FreeEnergyTable stationary_table(const StationaryEnvironment& env, const RegionSpec& extent);

/// floor(2 N xi[rho]) coordinatewise.
Point characteristic_point(double mu, double rho, int n);

/// Profile increments of a fresh stationary table per replica, base (0,0).
/// Row r holds the increments of replica r along `path`.
std::vector<std::vector<double>> burke_increment_samples(double mu, double rho,
                                                         const DownRightPath& path,
                                                         std::size_t replicas, std::uint64_t seed,
                                                         unsigned threads = 1);

struct IndependenceResult {
  double max_abs_r = 0;
  std::size_t first = 0;
  std::size_t second = 0;
};

/// Largest absolute Pearson correlation over pairs of increment positions.
IndependenceResult burke_independence_check(const std::vector<std::vector<double>>& samples,
                                            std::size_t min_replicas = 10000);

enum class ExitSide {
  kEast,   ///< tau >= k: the first k steps run along the e1 boundary
  kNorth,  ///< tau <= -k: the first k steps run along the e2 boundary
};

struct ExitQuery {
  Point target;
  int threshold = 1;
  ExitSide side = ExitSide::kEast;
};

/// Quenched probability of the exit event under Q^rho_{v, target}.
double quenched_exit_probability(const StationaryEnvironment& env, const ExitQuery& query);

struct SandwichParams {
  double mu = 2.0;
  double rho = 1.0;
  int n = 128;
  double s = 2.0;
  double q0 = 1.0;
  DownRightPath theta;
  std::size_t replicas = 500;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

struct SandwichReport {
  double lambda = 0;
  double eta = 0;
  Point characteristic{};
  std::size_t replicas = 0;
  std::size_t held = 0;
  double frequency = 0;
  std::vector<bool> per_replica;
};

/// Shares one bulk field among the i.i.d. table from (0,0) and stationary
/// tables at base (-1,-1) with parameters lambda = rho + q0 s N^{-1/3} and
/// eta = rho - q0 s N^{-1/3}, then checks
/// log(9/10) + Y_i <= increment_i <= log(10/9) + X_i along theta.
SandwichReport rw_sandwich_check(const SandwichParams& params);

}  // namespace polymer
