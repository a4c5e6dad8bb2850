#include "polymer/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <string>

#include "polymer/dp_engine.hpp"
#include "polymer/environment.hpp"
#include "polymer/errors.hpp"
#include "polymer/parallel.hpp"
#include "polymer/special_functions.hpp"

namespace polymer {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class ConstantField final : public WeightSource {
 public:
  explicit ConstantField(RegionSpec region) : region_(region) {}
  RegionSpec region() const override { return region_; }
  double log_weight(Point) const override { return 0.0; }
  void fill_antidiagonal(int, int, int, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
  }

 private:
  RegionSpec region_;
};

std::unique_ptr<WeightSource> make_field(double mu, FieldModel model, int n, std::uint64_t seed,
                                         std::uint64_t replica) {
  const RegionSpec box = RegionSpec::square(n);
  if (model == FieldModel::kForcedOnes) return std::make_unique<ConstantField>(box);
  return std::make_unique<InverseGammaField>(mu, box, seed, replica);
}

double cube_root(int n) { return std::cbrt(static_cast<double>(n)); }

std::vector<std::size_t> uniform_counts(std::size_t points, std::size_t replicas) {
  return std::vector<std::size_t>(points, replicas);
}

}  // namespace

void ExperimentPlan::validate(bool allow_r_equal_n) const {
  if (!(mu > 0) || !std::isfinite(mu)) throw DomainError("mu must be positive and finite");
  if (n_values.empty()) throw DomainError("plan needs at least one N");
  if (replicas < 2) throw DomainError("plan needs at least 2 replicas");
  for (int n : n_values) {
    if (n < 1) throw DomainError("N must be positive, got " + std::to_string(n));
    for (int r : levels_for(n)) {
      const bool ok = r > 0 && (r < n || (allow_r_equal_n && r == n));
      if (!ok) {
        throw DomainError("level r=" + std::to_string(r) + " invalid for N=" + std::to_string(n));
      }
    }
  }
  for (double q : r_ratios) {
    if (!(q > 0) || !std::isfinite(q)) throw DomainError("r ratios must be positive");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw DomainError("t grid must be positive and strictly ascending");
    }
  }
}

std::vector<int> ExperimentPlan::levels_for(int n) const {
  std::set<int> levels(r_values.begin(), r_values.end());
  for (double q : r_ratios) levels.insert(static_cast<int>(std::floor(q * n)));
  return {levels.begin(), levels.end()};
}

std::vector<double> DiagonalSamples::column(int a, std::size_t count) const {
  const auto it = std::find(points.begin(), points.end(), a);
  if (it == points.end()) throw DomainError("diagonal point " + std::to_string(a) + " not sampled");
  if (count > replicas) throw DomainError("requested more replicas than sampled");
  const auto j = static_cast<std::size_t>(it - points.begin());
  std::vector<double> out(count);
  for (std::size_t r = 0; r < count; ++r) {
    out[r] = at(r, j);
    if (std::isnan(out[r])) {
      throw DomainError("diagonal point " + std::to_string(a) + " not sampled for replica " +
                        std::to_string(r));
    }
  }
  return out;
}

DiagonalSamples sample_diagonal_free_energies(double mu, std::uint64_t seed, unsigned threads,
                                              FieldModel field, const std::vector<int>& points,
                                              const std::vector<std::size_t>& replicas_for) {
  if (points.size() != replicas_for.size()) throw DomainError("one replica count per point");
  DiagonalSamples out;
  out.points = points;
  out.replicas = replicas_for.empty() ? 0 : *std::max_element(replicas_for.begin(), replicas_for.end());
  out.values.assign(out.replicas * points.size(), kNaN);
  const std::size_t width = points.size();
  for_each_replica(seed, out.replicas, threads, [&](std::size_t r) {
    std::vector<int> wanted;
    std::vector<std::size_t> slots;
    for (std::size_t j = 0; j < width; ++j) {
      if (replicas_for[j] > r) {
        wanted.push_back(points[j]);
        slots.push_back(j);
      }
    }
    const int top = *std::max_element(wanted.begin(), wanted.end());
    const auto weights = make_field(mu, field, top, seed, r);
    const auto values = diagonal_free_energies(*weights, wanted);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (!std::isfinite(values[k])) throw NumericError("non-finite diagonal free energy");
      out.values[r * width + slots[k]] = values[k];
    }
  });
  return out;
}

double diagonal_centering(const ExperimentPlan& plan, int n) {
  if (plan.field == FieldModel::kForcedOnes) {
    return std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0);
  }
  return 2.0 * n * shape_f_diagonal(plan.mu);
}

FitOutcome try_fit(const std::vector<std::pair<double, double>>& points) {
  FitOutcome out;
  try {
    out.fit = fit_power_law(points);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

// Variance

VarianceReport summarize_variance(const ExperimentPlan& plan, const DiagonalSamples& samples) {
  VarianceReport report;
  std::vector<std::pair<double, double>> points;
  for (int n : plan.n_values) {
    const auto column = samples.column(n, plan.replicas);
    MomentAccumulator acc;
    for (double v : column) acc.add(v);
    const JackknifeEstimate jk = jackknife_variance(column);
    report.rows.push_back({n, acc.mean(), acc.standard_error(), jk.value, jk.standard_error});
    points.emplace_back(n, jk.value);
  }
  report.fit = try_fit(points);
  return report;
}

VarianceReport estimate_variance_scaling(const ExperimentPlan& plan) {
  plan.validate();
  const auto samples = sample_diagonal_free_energies(plan.mu, plan.seed, plan.threads, plan.field,
                                                     plan.n_values,
                                                     uniform_counts(plan.n_values.size(), plan.replicas));
  return summarize_variance(plan, samples);
}

// Time correlation

namespace {

std::vector<int> correlation_points(const ExperimentPlan& plan) {
  const int n = plan.n_values.front();
  auto points = plan.levels_for(n);
  if (std::find(points.begin(), points.end(), n) == points.end()) points.push_back(n);
  return points;
}

void check_correlation_plan(const ExperimentPlan& plan) {
  plan.validate(true);
  if (plan.n_values.size() != 1) throw DomainError("correlation takes exactly one N");
  if (plan.levels_for(plan.n_values.front()).empty()) throw DomainError("correlation needs levels r");
  if (plan.replicas < 100) {
    throw StatisticsError("correlation needs at least 100 replicas, got " +
                          std::to_string(plan.replicas));
  }
}

}  // namespace

CorrelationReport summarize_correlation(const ExperimentPlan& plan, const DiagonalSamples& samples) {
  check_correlation_plan(plan);
  CorrelationReport report;
  report.n = plan.n_values.front();
  const auto u = samples.column(report.n, plan.replicas);
  for (int r : plan.levels_for(report.n)) {
    const auto v = samples.column(r, plan.replicas);
    PairAccumulator acc;
    MomentAccumulator diff;
    for (std::size_t i = 0; i < u.size(); ++i) {
      acc.add(u[i], v[i]);
      diff.add(u[i] - v[i]);
    }
    CorrelationRow row;
    row.r = r;
    row.correlation = r == report.n ? 1.0 : acc.correlation();
    row.ci = r == report.n ? Interval{1.0, 1.0} : fisher_z_interval(row.correlation, u.size());
    row.var_n = acc.variance_x();
    row.var_r = acc.variance_y();
    row.var_difference = diff.variance();
    const double bound = (1.0 - row.correlation * row.correlation) * row.var_n;
    row.variance_identity_holds = row.var_difference >= bound - 1e-9 * std::max(1.0, row.var_n);
    report.rows.push_back(row);
  }
  return report;
}

CorrelationReport estimate_time_correlation(const ExperimentPlan& plan) {
  check_correlation_plan(plan);
  const auto points = correlation_points(plan);
  const auto samples = sample_diagonal_free_energies(plan.mu, plan.seed, plan.threads, plan.field,
                                                     points, uniform_counts(points.size(), plan.replicas));
  return summarize_correlation(plan, samples);
}

// Tails

TailCounter::TailCounter(std::vector<double> thresholds)
    : thresholds_(std::move(thresholds)),
      upper_(thresholds_.size(), 0),
      lower_(thresholds_.size(), 0) {
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    if (!(thresholds_[i] > 0) || (i > 0 && !(thresholds_[i] > thresholds_[i - 1]))) {
      throw DomainError("tail thresholds must be positive and strictly ascending");
    }
  }
}

void TailCounter::add(double x) {
  if (std::isnan(x)) throw NumericError("tail sample is NaN");
  ++n_;
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    if (x >= thresholds_[i]) ++upper_[i];
    if (x <= -thresholds_[i]) ++lower_[i];
  }
}

void TailCounter::merge(const TailCounter& other) {
  if (other.thresholds_ != thresholds_) throw DomainError("tail counters use different thresholds");
  n_ += other.n_;
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    upper_[i] += other.upper_[i];
    lower_[i] += other.lower_[i];
  }
}

TailReport summarize_tails(const ExperimentPlan& plan, const DiagonalSamples& samples) {
  plan.validate();
  if (plan.t_grid.empty()) throw DomainError("tail curve needs a t grid");
  TailReport report;
  report.n = plan.n_values.front();
  report.centering = diagonal_centering(plan, report.n);
  report.replicas = plan.replicas;
  const double scale = cube_root(report.n);
  TailCounter counter(plan.t_grid);
  std::size_t above = 0;
  for (double v : samples.column(report.n, plan.replicas)) {
    const double x = v - report.centering;
    if (x >= 0) ++above;
    counter.add(x / scale);
  }
  const auto total = static_cast<double>(counter.count());
  report.p_above_centering = static_cast<double>(above) / total;
  for (std::size_t i = 0; i < plan.t_grid.size(); ++i) {
    TailRow row;
    row.t = plan.t_grid[i];
    row.upper_hits = counter.upper()[i];
    row.lower_hits = counter.lower()[i];
    row.p_upper = static_cast<double>(row.upper_hits) / total;
    row.p_lower = static_cast<double>(row.lower_hits) / total;
    row.upper_ci = wilson_interval(row.upper_hits, counter.count());
    row.lower_ci = wilson_interval(row.lower_hits, counter.count());
    report.rows.push_back(row);
  }
  return report;
}

TailReport estimate_tail_curve(const ExperimentPlan& plan) {
  plan.validate();
  const std::vector<int> points{plan.n_values.front()};
  const auto samples = sample_diagonal_free_energies(plan.mu, plan.seed, plan.threads, plan.field,
                                                     points, {plan.replicas});
  return summarize_tails(plan, samples);
}

bool superlinear_decay(const std::vector<double>& probabilities) {
  if (probabilities.size() < 3) return false;
  std::vector<double> g;
  for (double p : probabilities) {
    if (!(p > 0)) return false;
    g.push_back(-std::log(p));
  }
  for (std::size_t i = 2; i < g.size(); ++i) {
    if (!(g[i] - g[i - 1] > g[i - 1] - g[i - 2])) return false;
  }
  return true;
}

// Nonrandom fluctuation

NonrandomReport summarize_nonrandom(const ExperimentPlan& plan, const DiagonalSamples& samples) {
  NonrandomReport report;
  for (int n : plan.n_values) {
    MomentAccumulator acc;
    for (double v : samples.column(n, plan.replicas)) acc.add(v);
    const double scale = cube_root(n);
    report.rows.push_back({n, (diagonal_centering(plan, n) - acc.mean()) / scale,
                           acc.standard_error() / scale});
  }
  return report;
}

NonrandomReport estimate_nonrandom_fluctuation(const ExperimentPlan& plan) {
  plan.validate();
  const auto samples = sample_diagonal_free_energies(plan.mu, plan.seed, plan.threads, plan.field,
                                                     plan.n_values,
                                                     uniform_counts(plan.n_values.size(), plan.replicas));
  return summarize_nonrandom(plan, samples);
}

// Transversal exponent

TransversalReport estimate_transversal_exponent(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.n_values.size() < 3) throw DomainError("transversal fit needs at least three N values");
  TransversalReport report;
  std::vector<std::pair<double, double>> points;
  for (int n : plan.n_values) {
    const int r = n / 2;
    if (r < 1) throw DomainError("transversal needs N >= 2");
    std::vector<int> displacement(plan.replicas);
    for_each_replica(plan.seed, plan.replicas, plan.threads, [&](std::size_t k) {
      const auto weights = make_field(plan.mu, plan.field, n, plan.seed, k);
      displacement[k] = crossing_argmax(*weights, n, r).displacement();
    });
    MomentAccumulator acc;
    for (int d : displacement) acc.add(d);
    report.rows.push_back({n, r, acc.mean(), acc.stddev()});
    points.emplace_back(n, acc.stddev());
  }
  report.fit = try_fit(points);
  return report;
}

}  // namespace polymer
