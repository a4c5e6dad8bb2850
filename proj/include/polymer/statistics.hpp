#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace polymer {

/// Single-pass mean and second central moment (Welford), mergeable by the
/// pairwise update of Chan, Golub and LeVeque.
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  double stddev() const;
  /// Standard error of the mean.
  double standard_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Bivariate version carrying the co-moment.
class PairAccumulator {
 public:
  void add(double x, double y);
  void merge(const PairAccumulator& other);

  std::size_t count() const { return n_; }
  double mean_x() const { return mean_x_; }
  double mean_y() const { return mean_y_; }
  double variance_x() const;
  double variance_y() const;
  double covariance() const;
  /// Pearson correlation; throws StatisticsError for a constant series.
  double correlation() const;

 private:
  std::size_t n_ = 0;
  double mean_x_ = 0.0;
  double mean_y_ = 0.0;
  double m2x_ = 0.0;
  double m2y_ = 0.0;
  double cxy_ = 0.0;
};

double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct Interval {
  double lower = 0;
  double upper = 0;
};

/// Fisher z interval for a correlation estimate from n pairs; needs n >= 4.
Interval fisher_z_interval(double r, std::size_t n, double z_crit = 1.959963984540054);

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z_crit = 1.959963984540054);

struct JackknifeEstimate {
  double value = 0;
  double standard_error = 0;
};

/// Sample variance with its delete-one jackknife standard error, O(n).
JackknifeEstimate jackknife_variance(std::span<const double> samples);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample statistic sup |F_n - G_m|.
double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b);

/// Upper-alpha quantile of the Kolmogorov distribution, K^{-1}(1 - alpha).
double kolmogorov_quantile(double alpha);

/// One-sample critical value with Stephens' small-sample correction,
/// c / (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
double ks_critical_value(double alpha, std::size_t n);

/// Two-sample asymptotic critical value c * sqrt((n + m) / (n m)).
double ks_two_sample_critical_value(double alpha, std::size_t n, std::size_t m);

/// CDF of Gamma(shape, 1).
double gamma_cdf(double shape, double x);
/// CDF of InverseGamma(shape, 1): P(Y <= y) = Q(shape, 1 / y).
double inverse_gamma_cdf(double shape, double y);

/// Ordinary least squares on (log x, log y).
struct PowerLawFit {
  std::vector<std::pair<double, double>> log_points;
  double slope = 0;
  double intercept = 0;
  double slope_standard_error = 0;
};

/// Needs at least three points with strictly positive coordinates.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

}  // namespace polymer
