#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "polymer/errors.hpp"
#include "polymer/statistics.hpp"

namespace polymer {
namespace {

std::vector<double> fixed_sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  boost::random::normal_distribution<double> normal(3.0, 2.0);
  std::vector<double> out(n);
  for (auto& x : out) x = normal(gen);
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(MomentAccumulator, MergeMatchesConcatenationOnRandomPartitions) {
  const auto data = fixed_sample(1000, 1);
  MomentAccumulator whole;
  for (double x : data) whole.add(x);

  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> cuts{0, data.size()};
    std::uniform_int_distribution<std::size_t> pick(0, data.size());
    for (int k = 0; k < 5; ++k) cuts.push_back(pick(gen));
    std::sort(cuts.begin(), cuts.end());
    std::vector<MomentAccumulator> parts(cuts.size() - 1);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      for (std::size_t i = cuts[p]; i < cuts[p + 1]; ++i) parts[p].add(data[i]);
    }
    MomentAccumulator left;
    for (const auto& p : parts) left.merge(p);
    MomentAccumulator right;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) right.merge(*it);
    for (const auto* acc : {&left, &right}) {
      EXPECT_EQ(acc->count(), whole.count());
      EXPECT_LE(rel(acc->mean(), whole.mean()), 1e-12);
      EXPECT_LE(rel(acc->variance(), whole.variance()), 1e-12);
    }
  }
}

TEST(MomentAccumulator, SmallSamples) {
  MomentAccumulator acc;
  EXPECT_EQ(acc.variance(), 0.0);
  acc.add(5.0);
  EXPECT_EQ(acc.mean(), 5.0);
  EXPECT_EQ(acc.variance(), 0.0);
  acc.add(7.0);
  EXPECT_DOUBLE_EQ(acc.variance(), 2.0);
  EXPECT_GE(acc.variance(), 0.0);
}

TEST(PairAccumulator, MergeMatchesConcatenation) {
  const auto x = fixed_sample(600, 3);
  const auto y = fixed_sample(600, 4);
  PairAccumulator whole;
  PairAccumulator a;
  PairAccumulator b;
  for (std::size_t i = 0; i < x.size(); ++i) {
    whole.add(x[i], y[i]);
    (i < 250 ? a : b).add(x[i], y[i]);
  }
  b.merge(a);
  EXPECT_LE(rel(b.covariance(), whole.covariance()), 1e-12);
  EXPECT_LE(rel(b.correlation(), whole.correlation()), 1e-12);
}

TEST(PairAccumulator, AffineInvariance) {
  const auto x = fixed_sample(500, 5);
  auto y = fixed_sample(500, 6);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.7 * x[i];
  const double r = pearson_correlation(x, y);
  std::vector<double> xs(x.size());
  std::vector<double> ys(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xs[i] = 4.5 * x[i] - 11.0;
    ys[i] = 0.03 * y[i] + 1e3;
  }
  EXPECT_NEAR(pearson_correlation(xs, ys), r, 1e-12);
}

TEST(PairAccumulator, IdenticalSeriesGiveExactlyOne) {
  const auto x = fixed_sample(300, 7);
  EXPECT_EQ(pearson_correlation(x, x), 1.0);
}

TEST(PairAccumulator, ConstantSeriesThrows) {
  std::vector<double> x{1, 2, 3};
  std::vector<double> c{4, 4, 4};
  EXPECT_THROW(pearson_correlation(x, c), StatisticsError);
}

TEST(PairAccumulator, VarianceIdentityOnEmpiricalPairs) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto u = fixed_sample(200, 100 + s);
    auto v = fixed_sample(200, 200 + s);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.1 * static_cast<double>(s) * u[i];
    PairAccumulator acc;
    MomentAccumulator diff;
    for (std::size_t i = 0; i < u.size(); ++i) {
      acc.add(u[i], v[i]);
      diff.add(u[i] - v[i]);
    }
    const double c = acc.correlation();
    EXPECT_GE(diff.variance(), (1 - c * c) * acc.variance_x() - 1e-9);
  }
}

TEST(Intervals, WilsonKnownValues) {
  // Closed form for k = 0: [0, z^2 / (n + z^2)].
  const double z = 1.959963984540054;
  const Interval zero = wilson_interval(0, 100);
  EXPECT_EQ(zero.lower, 0.0);
  EXPECT_NEAR(zero.upper, z * z / (100 + z * z), 1e-15);
  const Interval half = wilson_interval(50, 100);
  EXPECT_NEAR(half.lower + half.upper, 1.0, 1e-15);
  EXPECT_LT(half.lower, 0.5);
  EXPECT_THROW(wilson_interval(3, 0), StatisticsError);
  EXPECT_THROW(wilson_interval(5, 4), StatisticsError);
}

TEST(Intervals, FisherZ) {
  const Interval ci = fisher_z_interval(0.5, 103);
  // tanh(atanh(0.5) +- z / 10)
  EXPECT_NEAR(ci.lower, std::tanh(std::atanh(0.5) - 0.1959963984540054), 1e-14);
  EXPECT_NEAR(ci.upper, std::tanh(std::atanh(0.5) + 0.1959963984540054), 1e-14);
  EXPECT_THROW(fisher_z_interval(0.5, 3), StatisticsError);
}

TEST(Jackknife, MatchesBruteForceLeaveOneOut) {
  const auto data = fixed_sample(60, 8);
  const JackknifeEstimate jk = jackknife_variance(data);
  std::vector<double> loo;
  for (std::size_t i = 0; i < data.size(); ++i) {
    MomentAccumulator acc;
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (j != i) acc.add(data[j]);
    }
    loo.push_back(acc.variance());
  }
  const double n = static_cast<double>(data.size());
  const double m = std::accumulate(loo.begin(), loo.end(), 0.0) / n;
  double ss = 0;
  for (double v : loo) ss += (v - m) * (v - m);
  MomentAccumulator all;
  for (double x : data) all.add(x);
  EXPECT_NEAR(jk.value, all.variance(), 1e-12);
  EXPECT_NEAR(jk.standard_error, std::sqrt((n - 1) / n * ss), 1e-10);
}

TEST(KolmogorovSmirnov, QuantileAndCriticalValues) {
  // Tabulated asymptotic points of the Kolmogorov distribution.
  EXPECT_NEAR(kolmogorov_quantile(0.05), 1.3580986393225507, 1e-9);
  EXPECT_NEAR(kolmogorov_quantile(0.001), 1.9494746035043753, 1e-9);
  const double n = 400;
  EXPECT_NEAR(ks_critical_value(0.05, 400),
              1.3580986393225507 / (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)), 1e-9);
  EXPECT_NEAR(ks_two_sample_critical_value(0.05, 100, 100), 1.3580986393225507 * std::sqrt(0.02), 1e-9);
}

TEST(KolmogorovSmirnov, StatisticOnExplicitSample) {
  const std::vector<double> sample{0.1, 0.4, 0.7};
  // Against U(0,1): max over i of max(i/n - x_i, x_i - (i-1)/n).
  const double d = ks_statistic(sample, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_NEAR(d, 0.3, 1e-15);
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{3.5, 5, 6, 7};
  EXPECT_NEAR(ks_two_sample_statistic(a, b), 0.75, 1e-15);
}

TEST(Distributions, GammaAndInverseGammaCdf) {
  EXPECT_NEAR(gamma_cdf(1.0, 2.0), 1 - std::exp(-2.0), 1e-15);
  // Y = 1/G with G ~ Exp(1): P(Y <= y) = exp(-1/y).
  EXPECT_NEAR(inverse_gamma_cdf(1.0, 0.5), std::exp(-2.0), 1e-15);
  EXPECT_EQ(inverse_gamma_cdf(2.0, 0.0), 0.0);
}

TEST(PowerLaw, ExactDataRecoversSlope) {
  std::vector<std::pair<double, double>> pts;
  for (double x : {64.0, 128.0, 256.0, 512.0}) pts.emplace_back(x, 3 * std::pow(x, 2.0 / 3.0));
  const PowerLawFit fit = fit_power_law(pts);
  EXPECT_NEAR(fit.slope, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(fit.slope_standard_error, 0.0, 1e-12);
}

TEST(PowerLaw, RejectsBadInput) {
  const std::vector<std::pair<double, double>> two{{1, 1}, {2, 2}};
  EXPECT_THROW(fit_power_law(two), StatisticsError);
  const std::vector<std::pair<double, double>> zero{{1, 1}, {2, 0}, {3, 3}};
  EXPECT_THROW(fit_power_law(zero), DomainError);
}

TEST(PowerLaw, NoisySlopeWithinTwoStandardErrors) {
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(seed);
    boost::random::normal_distribution<double> noise(0.0, 0.05);
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 20; ++k) {
      const double x = std::pow(2.0, 3 + 0.3 * k);
      pts.emplace_back(x, 2 * std::pow(x, 0.4) * std::exp(noise(gen)));
    }
    const PowerLawFit fit = fit_power_law(pts);
    if (std::abs(fit.slope - 0.4) <= 2 * fit.slope_standard_error) ++covered;
  }
  // Nominal coverage of a t interval with 18 degrees of freedom at 2 SE is about 0.94.
  EXPECT_GE(covered, 88);
}

}  // namespace
}  // namespace polymer
