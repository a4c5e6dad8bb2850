#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include <boost/random/normal_distribution.hpp>

namespace polymer {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a sequence of words into one key. Order sensitive.
constexpr std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (auto w : words) h = mix64(h ^ w);
  return h;
}

/// Stream tags keep independent randomness sources disjoint.
enum class StreamTag : std::uint64_t {
  kBulk = 1,
  kEastBoundary = 2,
  kNorthBoundary = 3,
  kPathSampling = 4,
  kSynthetic = 5,
};

/// Counter-based generator: the state is a pure function of a key, so any
/// cell's variates can be regenerated without replaying other cells.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) : state_(key) {}

  static constexpr std::uint64_t stream_key(std::uint64_t seed, StreamTag tag, std::uint64_t replica) {
    return hash_words({seed, static_cast<std::uint64_t>(tag), replica});
  }
  /// Same key as for_cell(seed, tag, replica, x, y) with the stream prefix precomputed.
  static constexpr CounterRng for_cell_key(std::uint64_t stream, std::int64_t x, std::int64_t y) {
    return CounterRng(mix64(mix64(stream ^ static_cast<std::uint64_t>(x)) ^ static_cast<std::uint64_t>(y)));
  }
  static constexpr CounterRng for_cell(std::uint64_t seed, StreamTag tag, std::uint64_t replica,
                                       std::int64_t x, std::int64_t y) {
    return for_cell_key(stream_key(seed, tag, replica), x, y);
  }
  static constexpr CounterRng for_stream(std::uint64_t seed, StreamTag tag, std::uint64_t replica) {
    return CounterRng(stream_key(seed, tag, replica));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Gamma(shape, 1) sampler returning log of the variate.
///
/// Marsaglia-Tsang squeeze/accept for shape >= 1, normals from the Boost
/// ziggurat. For shape < 1 the variate
/// is boosted: if G ~ Gamma(shape + 1) and U ~ U(0,1) then G U^{1/shape} ~
/// Gamma(shape), which in log form is log G + log(U) / shape.
class LogGammaSampler {
 public:
  explicit LogGammaSampler(double shape);

  double shape() const { return shape_; }

  double operator()(CounterRng& rng) const {
    boost::random::normal_distribution<double> normal;
    double log_value;
    for (;;) {
      double x, v;
      do {
        x = normal(rng);
        v = 1.0 + c_ * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = rng.uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d_ * (1.0 - v + std::log(v))) {
        log_value = log_d_ + std::log(v);
        break;
      }
    }
    if (boosted_) log_value += std::log(rng.uniform()) * inv_shape_;
    return log_value;
  }

 private:
  double shape_;
  bool boosted_;
  double d_;
  double c_;
  double log_d_;
  double inv_shape_;
};

}  // namespace polymer
