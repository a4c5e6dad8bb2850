#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polymer/statistics.hpp"

namespace polymer {

enum class FieldModel {
  kInverseGamma,
  kForcedOnes,  ///< every weight 1; deterministic control
};

struct ExperimentPlan {
  double mu = 2.0;
  std::vector<int> n_values;
  /// Absolute levels r.
  std::vector<int> r_values;
  /// Levels as fractions of N, floored.
  std::vector<double> r_ratios;
  std::size_t replicas = 1000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  /// Tail thresholds in units of N^{1/3}.
  std::vector<double> t_grid;
  FieldModel field = FieldModel::kInverseGamma;

  /// Throws DomainError on an invalid plan. With allow_r_equal_n the level
  /// r = N is admitted.
  void validate(bool allow_r_equal_n = false) const;
  /// Sorted distinct levels for N: r_values plus floor(ratio * N).
  std::vector<int> levels_for(int n) const;
};

/// Row-major matrix of log Z_{0,(a,a)}: values[r * points.size() + j] for
/// replica r and diagonal point points[j]. NaN where point j was not
/// requested for replica r.
struct DiagonalSamples {
  std::vector<int> points;
  std::size_t replicas = 0;
  std::vector<double> values;

  double at(std::size_t replica, std::size_t j) const { return values[replica * points.size() + j]; }
  /// Column for point a over its first `count` replicas.
  std::vector<double> column(int a, std::size_t count) const;
};

/// Replica r sweeps once from (0,0) to the largest point a with
/// replicas_for[a] > r and records every requested diagonal value on the
/// way. Values depend only on (mu, seed, r), never on the sharing.
DiagonalSamples sample_diagonal_free_energies(double mu, std::uint64_t seed, unsigned threads,
                                              FieldModel field, const std::vector<int>& points,
                                              const std::vector<std::size_t>& replicas_for);

/// Centering 2N f_d, or log C(2N, N) for the forced-ones control.
double diagonal_centering(const ExperimentPlan& plan, int n);

struct FitOutcome {
  std::optional<PowerLawFit> fit;
  std::string error;
};

FitOutcome try_fit(const std::vector<std::pair<double, double>>& points);

struct VarianceRow {
  int n = 0;
  double mean = 0;
  double mean_se = 0;
  double variance = 0;
  double variance_se = 0;
};

struct VarianceReport {
  std::vector<VarianceRow> rows;
  FitOutcome fit;
};

VarianceReport estimate_variance_scaling(const ExperimentPlan& plan);
VarianceReport summarize_variance(const ExperimentPlan& plan, const DiagonalSamples& samples);

struct CorrelationRow {
  int r = 0;
  double correlation = 0;
  Interval ci;
  double var_r = 0;
  double var_n = 0;
  double var_difference = 0;
  /// Sample version of Var(U - V) >= (1 - Corr^2) Var(U), U = log Z_{0,N}.
  bool variance_identity_holds = false;
};

struct CorrelationReport {
  int n = 0;
  std::vector<CorrelationRow> rows;
};

/// One sweep per replica records log Z at every (r, r) and at (N, N).
/// Needs at least 100 replicas; r = N is allowed and gives correlation 1.
CorrelationReport estimate_time_correlation(const ExperimentPlan& plan);
CorrelationReport summarize_correlation(const ExperimentPlan& plan, const DiagonalSamples& samples);

/// Hit counts of X >= t (upper) and X <= -t (lower) per threshold t.
class TailCounter {
 public:
  explicit TailCounter(std::vector<double> thresholds);
  void add(double x);
  void merge(const TailCounter& other);

  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<std::size_t>& upper() const { return upper_; }
  const std::vector<std::size_t>& lower() const { return lower_; }
  std::size_t count() const { return n_; }

 private:
  std::vector<double> thresholds_;
  std::vector<std::size_t> upper_;
  std::vector<std::size_t> lower_;
  std::size_t n_ = 0;
};

struct TailRow {
  double t = 0;
  std::size_t upper_hits = 0;
  std::size_t lower_hits = 0;
  double p_upper = 0;
  double p_lower = 0;
  Interval upper_ci;
  Interval lower_ci;
};

struct TailReport {
  int n = 0;
  double centering = 0;
  std::size_t replicas = 0;
  /// Fraction with log Z - centering >= 0.
  double p_above_centering = 0;
  std::vector<TailRow> rows;
};

/// Uses the first N of the plan; X = (log Z_{0,N} - 2N f_d) / N^{1/3}.
TailReport estimate_tail_curve(const ExperimentPlan& plan);
TailReport summarize_tails(const ExperimentPlan& plan, const DiagonalSamples& samples);

/// -log p_i with increasing steps -log p_{i+1} + log p_i along a uniform
/// grid: superlinear growth. False when any probability is 0.
bool superlinear_decay(const std::vector<double>& probabilities);

struct NonrandomRow {
  int n = 0;
  double value = 0;
  double se = 0;
};

struct NonrandomReport {
  std::vector<NonrandomRow> rows;
};

/// (centering - mean log Z_{0,N}) / N^{1/3} with its standard error.
NonrandomReport estimate_nonrandom_fluctuation(const ExperimentPlan& plan);
NonrandomReport summarize_nonrandom(const ExperimentPlan& plan, const DiagonalSamples& samples);

struct TransversalRow {
  int n = 0;
  int r = 0;
  double mean = 0;
  double sd = 0;
};

struct TransversalReport {
  std::vector<TransversalRow> rows;
  FitOutcome fit;
};

/// sd over replicas of the crossing_argmax displacement at r = N/2, fitted
/// against N. Needs at least three N values.
TransversalReport estimate_transversal_exponent(const ExperimentPlan& plan);

}  // namespace polymer
