#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "polymer/lattice.hpp"
#include "polymer/random.hpp"

namespace polymer {

/// Read access to log-weights log Y_z. Every downstream computation runs
/// in log space, so sources hand out log Y rather than Y.
class WeightSource {
 public:
  virtual ~WeightSource() = default;

  /// Cells for which log_weight is defined.
  virtual RegionSpec region() const = 0;
  virtual double log_weight(Point p) const = 0;

  /// Writes log Y at (x, level - x) for x in [x_begin, x_end] into `out`.
  virtual void fill_antidiagonal(int level, int x_begin, int x_end, std::span<double> out) const;
};

/// Lazily evaluated i.i.d. inverse-gamma field. The log-weight at (x, y)
/// of replica k is a pure function of (seed, k, x, y), so slabs can be
/// regenerated in any order.
class InverseGammaField final : public WeightSource {
 public:
  InverseGammaField(double mu, RegionSpec region, std::uint64_t seed, std::uint64_t replica_id);

  RegionSpec region() const override { return region_; }
  double log_weight(Point p) const override;
  void fill_antidiagonal(int level, int x_begin, int x_end, std::span<double> out) const override;

  double mu() const { return sampler_.shape(); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica_id() const { return replica_id_; }

 private:
  LogGammaSampler sampler_;
  RegionSpec region_;
  std::uint64_t seed_;
  std::uint64_t replica_id_;
  std::uint64_t stream_;
};

/// Materialized grid of log-weights, row-major with rows along e2.
class WeightField final : public WeightSource {
 public:
  WeightField(RegionSpec region, std::vector<double> log_values, double mu, std::uint64_t seed,
              std::uint64_t replica_id);

  RegionSpec region() const override { return region_; }
  double log_weight(Point p) const override { return values_[region_.index(p)]; }
  void fill_antidiagonal(int level, int x_begin, int x_end, std::span<double> out) const override;

  /// Replaces one cell; used for coupling experiments on fixed fields.
  void set_log_weight(Point p, double log_y);

  std::span<const double> log_values() const { return values_; }
  double mu() const { return mu_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica_id() const { return replica_id_; }

 private:
  RegionSpec region_;
  std::vector<double> values_;
  double mu_;
  std::uint64_t seed_;
  std::uint64_t replica_id_;
};

/// I.i.d. Y ~ InverseGamma(mu, 1) on `region`, i.e. 1/Y ~ Gamma(mu).
WeightField sample_weight_field(double mu, const RegionSpec& region, std::uint64_t seed,
                                std::uint64_t replica_id, std::size_t cell_cap = kDefaultCellCap);

/// Every cell equal to `constant`. mu is recorded as NaN.
WeightField forced_field(const RegionSpec& region, double constant,
                         std::size_t cell_cap = kDefaultCellCap);

/// Binary fixture: 32-byte little-endian header (magic "IGPF", u32 version,
/// four i32 corners lower.x lower.y upper.x upper.y, f64 mu) followed by
/// the row-major log-weights as f64.
inline constexpr std::uint32_t kFieldDumpVersion = 1;

void write_field_dump(const std::filesystem::path& path, const WeightField& field);
WeightField read_field_dump(const std::filesystem::path& path);

}  // namespace polymer
