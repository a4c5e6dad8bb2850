#include "polymer/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "polymer/errors.hpp"

namespace polymer {

void MomentAccumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double MomentAccumulator::variance() const {
  return n_ < 2 ? 0.0 : std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

double MomentAccumulator::stddev() const { return std::sqrt(variance()); }

double MomentAccumulator::standard_error() const {
  return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

void PairAccumulator::add(double x, double y) {
  ++n_;
  const double n = static_cast<double>(n_);
  const double dx = x - mean_x_;
  const double dy = y - mean_y_;
  mean_x_ += dx / n;
  mean_y_ += dy / n;
  m2x_ += dx * (x - mean_x_);
  m2y_ += dy * (y - mean_y_);
  cxy_ += dx * (y - mean_y_);
}

void PairAccumulator::merge(const PairAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double dx = other.mean_x_ - mean_x_;
  const double dy = other.mean_y_ - mean_y_;
  const double w = na * nb / n;
  mean_x_ += dx * nb / n;
  mean_y_ += dy * nb / n;
  m2x_ += other.m2x_ + dx * dx * w;
  m2y_ += other.m2y_ + dy * dy * w;
  cxy_ += other.cxy_ + dx * dy * w;
  n_ += other.n_;
}

double PairAccumulator::variance_x() const {
  return n_ < 2 ? 0.0 : std::max(0.0, m2x_ / static_cast<double>(n_ - 1));
}

double PairAccumulator::variance_y() const {
  return n_ < 2 ? 0.0 : std::max(0.0, m2y_ / static_cast<double>(n_ - 1));
}

double PairAccumulator::covariance() const {
  return n_ < 2 ? 0.0 : cxy_ / static_cast<double>(n_ - 1);
}

double PairAccumulator::correlation() const {
  if (n_ < 2 || !(m2x_ > 0) || !(m2y_ > 0)) {
    throw StatisticsError("correlation of a constant or too-short series");
  }
  const double r = cxy_ / std::sqrt(m2x_ * m2y_);
  return std::clamp(r, -1.0, 1.0);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StatisticsError("correlation of series with different lengths");
  PairAccumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i], y[i]);
  return acc.correlation();
}

Interval fisher_z_interval(double r, std::size_t n, double z_crit) {
  if (n < 4) throw StatisticsError("Fisher z interval needs at least 4 pairs");
  if (r >= 1.0) return {1.0, 1.0};
  if (r <= -1.0) return {-1.0, -1.0};
  const double z = std::atanh(r);
  const double se = 1.0 / std::sqrt(static_cast<double>(n) - 3.0);
  return {std::tanh(z - z_crit * se), std::tanh(z + z_crit * se)};
}

Interval wilson_interval(std::size_t k, std::size_t n, double z_crit) {
  if (n == 0) throw StatisticsError("Wilson interval needs at least one trial");
  if (k > n) throw StatisticsError("Wilson interval with more successes than trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z_crit * z_crit;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z_crit * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {k == 0 ? 0.0 : std::max(0.0, center - half), k == n ? 1.0 : std::min(1.0, center + half)};
}

JackknifeEstimate jackknife_variance(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3) throw StatisticsError("jackknife variance needs at least 3 samples");
  MomentAccumulator acc;
  for (double x : samples) acc.add(x);
  const double nn = static_cast<double>(n);
  const double mean = acc.mean();
  // Centered sums keep the leave-one-out updates well conditioned.
  double s2 = 0.0;
  for (double x : samples) s2 += (x - mean) * (x - mean);
  MomentAccumulator loo;
  for (double x : samples) {
    const double d = x - mean;
    // Sum of centered values without x is -d.
    const double s1_minus = -d;
    const double s2_minus = s2 - d * d;
    const double var_minus = (s2_minus - s1_minus * s1_minus / (nn - 1)) / (nn - 2);
    loo.add(var_minus);
  }
  const double se = std::sqrt((nn - 1) / nn * loo.m2());
  return {acc.variance(), se};
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw StatisticsError("KS statistic of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw StatisticsError("KS statistic of an empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double kolmogorov_quantile(double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw StatisticsError("KS alpha must lie in (0, 1)");
  // Solve Q_KS(c) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 c^2) = alpha by bisection.
  auto survival = [](double c) {
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * c * c);
      s += (k % 2 == 1 ? 2.0 : -2.0) * term;
      if (term < 1e-300) break;
    }
    return s;
  };
  double lo = 0.3, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (survival(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ks_critical_value(double alpha, std::size_t n) {
  if (n == 0) throw StatisticsError("KS critical value needs n > 0");
  const double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_quantile(alpha) / (sn + 0.12 + 0.11 / sn);
}

double ks_two_sample_critical_value(double alpha, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw StatisticsError("KS critical value needs nonempty samples");
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return kolmogorov_quantile(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

double gamma_cdf(double shape, double x) {
  if (!(shape > 0)) throw DomainError("gamma_cdf: shape must be positive");
  if (x <= 0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(shape, x);
}

double inverse_gamma_cdf(double shape, double y) {
  if (!(shape > 0)) throw DomainError("inverse_gamma_cdf: shape must be positive");
  if (y <= 0) return 0.0;
  if (std::isinf(y)) return 1.0;
  return boost::math::gamma_q(shape, 1.0 / y);
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw StatisticsError("power-law fit needs at least 3 points, got " + std::to_string(points.size()));
  }
  PowerLawFit fit;
  PairAccumulator acc;
  for (auto [x, y] : points) {
    if (!(x > 0) || !(y > 0)) throw DomainError("power-law fit needs strictly positive coordinates");
    fit.log_points.emplace_back(std::log(x), std::log(y));
    acc.add(std::log(x), std::log(y));
  }
  const double sxx = acc.variance_x();
  if (!(sxx > 0)) throw StatisticsError("power-law fit needs distinct x values");
  fit.slope = acc.covariance() / sxx;
  fit.intercept = acc.mean_y() - fit.slope * acc.mean_x();
  double rss = 0.0;
  for (auto [lx, ly] : fit.log_points) {
    const double r = ly - (fit.intercept + fit.slope * lx);
    rss += r * r;
  }
  const double n = static_cast<double>(points.size());
  const double sigma2 = rss / (n - 2);
  fit.slope_standard_error = std::sqrt(sigma2 / (sxx * (n - 1)));
  return fit;
}

}  // namespace polymer
