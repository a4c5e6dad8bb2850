#include "polymer/environment.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "polymer/errors.hpp"

namespace polymer {

static_assert(std::endian::native == std::endian::little,
              "field dumps assume a little-endian host");

void WeightSource::fill_antidiagonal(int level, int x_begin, int x_end,
                                     std::span<double> out) const {
  for (int x = x_begin; x <= x_end; ++x) {
    out[static_cast<std::size_t>(x - x_begin)] = log_weight({x, level - x});
  }
}

InverseGammaField::InverseGammaField(double mu, RegionSpec region, std::uint64_t seed,
                                     std::uint64_t replica_id)
    : sampler_(mu),
      region_(region),
      seed_(seed),
      replica_id_(replica_id),
      stream_(CounterRng::stream_key(seed, StreamTag::kBulk, replica_id)) {}

double InverseGammaField::log_weight(Point p) const {
  auto rng = CounterRng::for_cell_key(stream_, p.x, p.y);
  return -sampler_(rng);
}

void InverseGammaField::fill_antidiagonal(int level, int x_begin, int x_end,
                                          std::span<double> out) const {
  for (int x = x_begin; x <= x_end; ++x) {
    auto rng = CounterRng::for_cell_key(stream_, x, level - x);
    out[static_cast<std::size_t>(x - x_begin)] = -sampler_(rng);
  }
}

WeightField::WeightField(RegionSpec region, std::vector<double> log_values, double mu,
                         std::uint64_t seed, std::uint64_t replica_id)
    : region_(region), values_(std::move(log_values)), mu_(mu), seed_(seed), replica_id_(replica_id) {
  if (values_.size() != region_.cell_count()) {
    throw GeometryError("weight field size does not match its region");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericError("weight field holds a non-finite log-weight");
  }
}

void WeightField::fill_antidiagonal(int level, int x_begin, int x_end,
                                    std::span<double> out) const {
  for (int x = x_begin; x <= x_end; ++x) {
    out[static_cast<std::size_t>(x - x_begin)] = values_[region_.index({x, level - x})];
  }
}

void WeightField::set_log_weight(Point p, double log_y) {
  if (!region_.contains(p)) throw GeometryError("cell " + to_string(p) + " outside field");
  if (!std::isfinite(log_y)) throw NumericError("non-finite log-weight");
  values_[region_.index(p)] = log_y;
}

WeightField sample_weight_field(double mu, const RegionSpec& region, std::uint64_t seed,
                                std::uint64_t replica_id, std::size_t cell_cap) {
  check_cell_cap(region, cell_cap);
  const InverseGammaField lazy(mu, region, seed, replica_id);
  std::vector<double> values(region.cell_count());
  for (int y = region.lower.y; y <= region.upper.y; ++y) {
    for (int x = region.lower.x; x <= region.upper.x; ++x) {
      values[region.index({x, y})] = lazy.log_weight({x, y});
    }
  }
  return WeightField(region, std::move(values), mu, seed, replica_id);
}

WeightField forced_field(const RegionSpec& region, double constant, std::size_t cell_cap) {
  if (!(constant > 0) || !std::isfinite(constant)) {
    throw DomainError("forced field constant must be positive and finite");
  }
  check_cell_cap(region, cell_cap);
  return WeightField(region, std::vector<double>(region.cell_count(), std::log(constant)),
                     std::numeric_limits<double>::quiet_NaN(), 0, 0);
}

namespace {

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated field dump");
  return value;
}

}  // namespace

void write_field_dump(const std::filesystem::path& path, const WeightField& field) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write("IGPF", 4);
  put<std::uint32_t>(out, kFieldDumpVersion);
  const RegionSpec r = field.region();
  put<std::int32_t>(out, r.lower.x);
  put<std::int32_t>(out, r.lower.y);
  put<std::int32_t>(out, r.upper.x);
  put<std::int32_t>(out, r.upper.y);
  put<double>(out, field.mu());
  const auto values = field.log_values();
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

WeightField read_field_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "IGPF", 4) != 0) throw std::runtime_error("bad field dump magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kFieldDumpVersion) {
    throw std::runtime_error("unsupported field dump version " + std::to_string(version));
  }
  Point lo, hi;
  lo.x = get<std::int32_t>(in);
  lo.y = get<std::int32_t>(in);
  hi.x = get<std::int32_t>(in);
  hi.y = get<std::int32_t>(in);
  const double mu = get<double>(in);
  const RegionSpec region(lo, hi);
  check_cell_cap(region);
  std::vector<double> values(region.cell_count());
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated field dump body");
  return WeightField(region, std::move(values), mu, 0, 0);
}

}  // namespace polymer
