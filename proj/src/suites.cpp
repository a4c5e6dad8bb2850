#include "polymer/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>

#include "polymer/brute_force.hpp"
#include "polymer/dp_engine.hpp"
#include "polymer/environment.hpp"
#include "polymer/errors.hpp"
#include "polymer/parallel.hpp"
#include "polymer/path_sampler.hpp"
#include "polymer/special_functions.hpp"
#include "polymer/stationary.hpp"
#include "polymer/statistics.hpp"

namespace polymer {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool close_rel(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

void check(SuiteOutcome& out, std::string name, bool passed, std::string detail) {
  out.checks.push_back({std::move(name), passed, std::move(detail)});
}

void row(SuiteOutcome& out, std::string experiment, std::optional<int> n, std::optional<int> r,
         std::string statistic, double value, std::optional<double> se = std::nullopt) {
  out.rows.push_back({std::move(experiment), n, r, std::move(statistic), value, se});
}

void check_slope(SuiteOutcome& out, const std::string& name, const FitOutcome& fit, double target,
                 double tolerance) {
  if (!fit.fit) {
    check(out, name, false, "fit failed: " + fit.error);
    return;
  }
  const double slope = fit.fit->slope;
  check(out, name, std::abs(slope - target) <= tolerance,
        "slope " + num(slope) + " (SE " + num(fit.fit->slope_standard_error) + "), target " +
            num(target) + " +- " + num(tolerance));
}

double rho_of(const SuiteConfig& c) { return c.rho.value_or(c.mu / 2); }

}  // namespace

bool SuiteOutcome::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void SuiteOutcome::append(SuiteOutcome other) {
  for (auto& c : other.checks) checks.push_back(std::move(c));
  for (auto& r : other.rows) rows.push_back(std::move(r));
}

// Deterministic suites

SuiteOutcome shape_suite(const SuiteConfig& config) {
  SuiteOutcome out;
  const double mu = config.mu;
  const double fd = shape_f_diagonal(mu);
  const double diag_err = std::abs(shape_f(mu, mu / 2) - (-digamma(mu / 2)));
  check(out, "shape.diagonal", diag_err <= 1e-12, "|f(mu/2) + Psi0(mu/2)| = " + num(diag_err));
  row(out, "shape", std::nullopt, std::nullopt, "f_d", fd);

  double sym_err = 0;
  for (int i = 1; i <= 100; ++i) {
    const double rho = mu * i / 101.0;
    sym_err = std::max(sym_err, std::abs(shape_f(mu, rho) - shape_f(mu, mu - rho)));
  }
  check(out, "shape.symmetry", sym_err <= 1e-12, "max |f(rho) - f(mu - rho)| = " + num(sym_err));
  row(out, "shape", std::nullopt, std::nullopt, "symmetry_max_error", sym_err);

  const double z = 0.0125;
  const double ratio = (shape_f(mu, mu / 2 + z) - fd) / (z * z);
  const double target = 0.5 * polygamma(2, mu / 2);
  const double rel = std::abs(ratio - target) / std::abs(target);
  check(out, "shape.curvature", rel <= 1e-3,
        "(f(mu/2+z) - f_d)/z^2 = " + num(ratio) + " vs Psi2(mu/2)/2 = " + num(target));
  row(out, "shape", std::nullopt, std::nullopt, "curvature_ratio", ratio);
  row(out, "shape", std::nullopt, std::nullopt, "curvature_target", target);

  const Direction2 xi = characteristic_direction(mu, mu / 2);
  const bool diagonal = std::abs(xi.e1 - 0.5) <= 1e-15 && std::abs(xi.e2 - 0.5) <= 1e-15;
  check(out, "shape.characteristic_diagonal", diagonal, "xi(mu/2) = (" + num(xi.e1) + ", " + num(xi.e2) + ")");
  return out;
}

SuiteOutcome dp_suite(const SuiteConfig& config) {
  SuiteOutcome out;
  const std::uint64_t seed = config.seed;

  double worst = 0;
  bool ok = true;
  std::mt19937_64 gen(seed);
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const int w = 1 + static_cast<int>(gen() % 5);
    const int h = 1 + static_cast<int>(gen() % 5);
    const double mu = 0.5 + 0.25 * static_cast<double>(gen() % 12);
    const auto f = sample_weight_field(mu, RegionSpec({0, 0}, {w - 1, h - 1}), seed, rep);
    const auto t = log_partition_table(f, Point{0, 0});
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) {
        const double want = brute::log_sum_paths(f, brute::enumerate_paths({0, 0}, {x, y}), false);
        const double got = t.log_z({x, y});
        ok = ok && close_rel(got, want, 1e-12);
        if (std::isfinite(want)) worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
      }
    }
  }
  check(out, "dp.enumeration", ok, "50 fields, max relative error " + num(worst));
  row(out, "dp", std::nullopt, std::nullopt, "enumeration_max_rel_error", worst);

  worst = 0;
  ok = true;
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const auto f = sample_weight_field(2.0, RegionSpec::square(6), seed + 1, rep);
    const Point a{static_cast<int>(gen() % 2), static_cast<int>(gen() % 2)};
    const Point b{4 + static_cast<int>(gen() % 3), 4 + static_cast<int>(gen() % 3)};
    const double k = static_cast<double>(gen() % 3) + (gen() % 2 ? 0.5 : 0.0);
    const PathConstraint in(a, b, k, ConstraintMode::kInside);
    const double all = log_partition_table(f, a).log_z(b);
    const double inside = log_partition_table(f, a, in).log_z(b);
    const double exited = log_partition_table(f, a, in.with_mode(ConstraintMode::kExited)).log_z(b);
    const auto paths = brute::enumerate_paths(a, b);
    auto stays = [&](const brute::Path& p) {
      return std::all_of(p.begin(), p.end(), [&](Point q) { return in.in_parallelogram(q); });
    };
    const double e_in = brute::log_sum_paths(f, paths, false, stays);
    const double e_out = brute::log_sum_paths(f, paths, false, [&](const brute::Path& p) { return !stays(p); });
    const double joined = logaddexp(inside, exited);
    ok = ok && close_rel(joined, all, 1e-12) && close_rel(inside, e_in, 1e-12) &&
         close_rel(exited, e_out, 1e-12);
    worst = std::max(worst, std::abs(joined - all) / std::max(1.0, std::abs(all)));
  }
  check(out, "dp.parallelogram", ok, "50 instances, max |Z - (Z_in + Z_exit)| relative " + num(worst));
  row(out, "dp", std::nullopt, std::nullopt, "parallelogram_max_rel_error", worst);

  ok = true;
  const auto ones = forced_field(RegionSpec::square(12), 1.0);
  const auto t = log_partition_table(ones, Point{0, 0});
  for (int n = 1; n <= 12; ++n) {
    std::uint64_t c = 1;
    for (int i = 1; i <= n; ++i) c = c * static_cast<std::uint64_t>(n + i) / static_cast<std::uint64_t>(i);
    const double want = std::log(static_cast<double>(c));
    ok = ok && std::abs(t.log_z(diag(n)) - want) <= 4e-16 * want;
  }
  check(out, "dp.binomial", ok, "forced ones: log Z_{0,(n,n)} = log C(2n, n) for n <= 12");

  ok = true;
  const Point x{0, 1}, y{1, 0}, z{4, 4};
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto f = sample_weight_field(2.0, RegionSpec::square(4), seed + 2, rep);
    const RegionSpec box({0, 0}, z);
    const auto tx = log_partition_table(f, x, PathConstraint::none(), StartConvention::kExcludeStart, box);
    const auto ty = log_partition_table(f, y, PathConstraint::none(), StartConvention::kExcludeStart, box);
    ok = ok && tx.log_z(z) - tx.log_z(z - kE1) <= ty.log_z(z) - ty.log_z(z - kE1) + 1e-12;
    ok = ok && tx.log_z(z) - tx.log_z(z - kE2) >= ty.log_z(z) - ty.log_z(z - kE2) - 1e-12;
  }
  check(out, "monotonicity.ratio", ok, "20 instances of the ratio inequalities");
  return out;
}

SuiteOutcome burke_suite(const SuiteConfig& config) {
  SuiteOutcome out;
  const double mu = config.mu;
  const double rho = rho_of(config);
  const std::size_t m = config.replicas.value_or(20000);
  const auto path = DownRightPath::staircase({11, 19}, 8);
  const auto rows = burke_increment_samples(mu, rho, path, m, config.seed, config.threads);
  const double crit = ks_critical_value(0.001, m);
  bool ok = true;
  double worst = 0;
  for (std::size_t i = 1; i <= path.steps(); ++i) {
    const bool east = path.is_east_step(i);
    std::vector<double> sample;
    sample.reserve(m);
    for (const auto& r : rows) sample.push_back(std::exp(east ? r[i - 1] : -r[i - 1]));
    const double shape = east ? mu - rho : rho;
    const double d = ks_statistic(sample, [shape](double v) { return inverse_gamma_cdf(shape, v); });
    ok = ok && d < crit;
    worst = std::max(worst, d);
    row(out, "burke", std::nullopt, static_cast<int>(i), east ? "ks_e1" : "ks_e2", d);
  }
  check(out, "burke.ks", ok, "max KS " + num(worst) + " vs critical " + num(crit) + " at alpha 0.001");
  const auto ind = burke_independence_check(rows, std::min<std::size_t>(m, 10000));
  check(out, "burke.independence", ind.max_abs_r <= 0.03,
        "max |r| " + num(ind.max_abs_r) + " at steps " + std::to_string(ind.first + 1) + "," +
            std::to_string(ind.second + 1));
  row(out, "burke", std::nullopt, std::nullopt, "max_abs_correlation", ind.max_abs_r);

  const std::size_t me = 5 * m;
  const Point target{20, 10};
  std::vector<double> values(me);
  for_each_replica(config.seed, me, config.threads, [&](std::size_t r) {
    const StationaryEnvironment env(mu, rho, {0, 0}, target, config.seed, r);
    values[r] = stationary_table(env, env.region()).log_z(target);
  });
  MomentAccumulator acc;
  for (double v : values) acc.add(v);
  const double expected = -target.x * digamma(mu - rho) - target.y * digamma(rho);
  const double gap = std::abs(acc.mean() - expected);
  check(out, "stationary.expectation", gap <= 4 * acc.standard_error(),
        "mean " + num(acc.mean()) + " vs " + num(expected) + ", SE " + num(acc.standard_error()));
  row(out, "stationary", std::nullopt, std::nullopt, "mean_log_z_20_10", acc.mean(), acc.standard_error());
  row(out, "stationary", std::nullopt, std::nullopt, "expected_log_z_20_10", expected);
  return out;
}

SuiteOutcome exit_suite(const SuiteConfig& config) {
  SuiteOutcome out;
  const double mu = config.mu;
  const double rho = rho_of(config);
  const int n = config.n_values.empty() ? 16 : config.n_values.front();
  const std::size_t reps = config.replicas.value_or(200);

  bool ok = true;
  const Point z{6, 6}, z2 = z + kE1 * 2 - kE2 * 2;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const StationaryEnvironment env(mu, rho, {0, 0}, {8, 6}, config.seed, rep);
    const double a = quenched_exit_probability(env, {z, 2, ExitSide::kEast});
    const double b = quenched_exit_probability(env, {z2, 2, ExitSide::kEast});
    ok = ok && a <= b + 1e-12;
  }
  check(out, "monotonicity.exit", ok, "20 instances: Q(tau >= 2) nondecreasing under z -> z + 2e1 - 2e2");

  const Point v = characteristic_point(mu, rho, n);
  const std::vector<int> ks{1, 2, 4, 8};
  std::vector<std::vector<double>> probs(reps);
  std::vector<double> norm_err(reps);
  for_each_replica(config.seed, reps, config.threads, [&](std::size_t r) {
    const StationaryEnvironment env(mu, rho, {0, 0}, v, config.seed, r);
    norm_err[r] = std::abs(quenched_exit_probability(env, {v, 1, ExitSide::kEast}) +
                           quenched_exit_probability(env, {v, 1, ExitSide::kNorth}) - 1.0);
    for (int k : ks) probs[r].push_back(quenched_exit_probability(env, {v, k, ExitSide::kEast}));
  });
  const double worst_norm = *std::max_element(norm_err.begin(), norm_err.end());
  check(out, "exit.normalization", worst_norm <= 1e-12, "max |Q(tau>=1) + Q(tau<=-1) - 1| = " + num(worst_norm));
  bool nested = true;
  for (const auto& p : probs) {
    for (std::size_t i = 1; i < p.size(); ++i) nested = nested && p[i] <= p[i - 1] + 1e-12;
  }
  check(out, "exit.nested", nested, "Q(tau >= k) nonincreasing in k for every replica");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    MomentAccumulator acc;
    for (const auto& p : probs) acc.add(p[i]);
    row(out, "exit", n, ks[i], "mean_quenched_p_tau_ge_k", acc.mean(), acc.standard_error());
  }
  return out;
}

SuiteOutcome sandwich_suite(const SuiteConfig& config) {
  SuiteOutcome out;
  SandwichParams p;
  p.mu = config.mu;
  p.rho = rho_of(config);
  p.n = config.n_values.empty() ? 128 : config.n_values.front();
  p.s = config.s;
  p.q0 = config.q0;
  p.replicas = config.replicas.value_or(500);
  p.seed = config.seed;
  p.threads = config.threads;
  p.theta = DownRightPath::horizontal_through(characteristic_point(p.mu, p.rho, p.n), 32);
  const SandwichReport report = rw_sandwich_check(p);
  check(out, "sandwich.frequency", report.frequency >= 0.9,
        std::to_string(report.held) + "/" + std::to_string(report.replicas) + " replicas hold the sandwich");
  row(out, "sandwich", p.n, std::nullopt, "frequency", report.frequency);
  row(out, "sandwich", p.n, std::nullopt, "lambda", report.lambda);
  row(out, "sandwich", p.n, std::nullopt, "eta", report.eta);
  return out;
}

SuiteOutcome sampler_suite(const SuiteConfig& config) {
  SuiteOutcome out;
  const std::size_t draws = config.replicas.value_or(200000);
  const auto f = sample_weight_field(config.mu, RegionSpec::square(3), config.seed, 0);
  const QuenchedSampler sampler(f, {0, 0});
  const auto paths = brute::enumerate_paths({0, 0}, {3, 3});
  const double log_total = brute::log_sum_paths(f, paths, false);
  std::map<std::string, double> exact;
  for (const auto& p : paths) {
    exact[PolymerPath(p).run_length_steps()] =
        std::exp(static_cast<double>(brute::path_log_weight(f, p, false)) - log_total);
  }
  auto rng = CounterRng::for_stream(config.seed, StreamTag::kPathSampling, 0);
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < draws; ++i) ++counts[sampler.sample({3, 3}, rng).run_length_steps()];
  double tv = 0;
  for (const auto& [key, prob] : exact) {
    const auto it = counts.find(key);
    const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(draws);
    tv += std::abs(freq - prob);
  }
  tv *= 0.5;
  check(out, "sampler.total_variation", tv <= 0.01 && counts.size() == exact.size(),
        "TV " + num(tv) + " over " + std::to_string(draws) + " draws on 20 paths");
  row(out, "sampler", 3, std::nullopt, "total_variation", tv);

  const auto big = sample_weight_field(config.mu, RegionSpec::square(64), config.seed, 1);
  const QuenchedSampler full(big, {0, 0});
  const CheckpointedSampler lean(big, {0, 0}, big.region());
  bool same = true;
  auto a = CounterRng::for_stream(config.seed, StreamTag::kPathSampling, 1);
  auto b = a;
  MomentAccumulator disp;
  for (int i = 0; i < 50; ++i) {
    const auto pa = full.sample({64, 64}, a);
    same = same && pa == lean.sample({64, 64}, b);
    disp.add(midpoint_displacement(pa, 32));
  }
  check(out, "sampler.checkpointed", same, "checkpointed draws equal full-table draws");
  row(out, "sampler", 64, 32, "quenched_midpoint_sd", disp.stddev());
  return out;
}

// Statistical suites

namespace {

ExperimentPlan base_plan(const SuiteConfig& c, std::vector<int> default_n, std::size_t default_reps) {
  ExperimentPlan plan;
  plan.mu = c.mu;
  plan.seed = c.seed;
  plan.threads = c.threads;
  plan.n_values = c.n_values.empty() ? std::move(default_n) : c.n_values;
  plan.replicas = c.replicas.value_or(default_reps);
  plan.r_values = c.r_values;
  plan.r_ratios = c.r_ratios;
  plan.t_grid = c.t_grid;
  return plan;
}

ExperimentPlan variance_plan(const SuiteConfig& c) {
  auto plan = base_plan(c, {64, 128, 256, 512}, 4000);
  plan.r_values.clear();
  plan.r_ratios.clear();
  return plan;
}

ExperimentPlan correlation_plan(const SuiteConfig& c) {
  auto plan = base_plan(c, {512}, 20000);
  if (plan.r_values.empty() && plan.r_ratios.empty()) {
    plan.r_ratios = {0.0625, 0.125, 0.25, 0.75, 0.875, 0.9375};
  }
  return plan;
}

ExperimentPlan tails_plan(const SuiteConfig& c) {
  auto plan = base_plan(c, {256}, 50000);
  plan.r_values.clear();
  plan.r_ratios.clear();
  if (plan.t_grid.empty()) plan.t_grid = {0.5, 1.0, 1.5, 2.0};
  return plan;
}

ExperimentPlan nonrandom_plan(const SuiteConfig& c) {
  auto plan = base_plan(c, {128, 256, 512}, 4000);
  plan.r_values.clear();
  plan.r_ratios.clear();
  return plan;
}

ExperimentPlan transversal_plan(const SuiteConfig& c) {
  auto plan = base_plan(c, {128, 256, 512}, 2000);
  plan.r_values.clear();
  plan.r_ratios.clear();
  return plan;
}

SuiteOutcome variance_checks(const VarianceReport& report) {
  SuiteOutcome out;
  for (const auto& r : report.rows) {
    row(out, "variance", r.n, std::nullopt, "variance", r.variance, r.variance_se);
    row(out, "variance", r.n, std::nullopt, "mean", r.mean, r.mean_se);
  }
  if (report.fit.fit) {
    row(out, "variance", std::nullopt, std::nullopt, "slope", report.fit.fit->slope,
        report.fit.fit->slope_standard_error);
  }
  check_slope(out, "variance.slope", report.fit, 2.0 / 3.0, 0.10);
  return out;
}

SuiteOutcome correlation_checks(const CorrelationReport& report) {
  SuiteOutcome out;
  const int n = report.n;
  std::vector<std::pair<double, double>> far, close;
  std::vector<const CorrelationRow*> close_rows;
  bool nonnegative = true;
  bool identity = true;
  for (const auto& r : report.rows) {
    row(out, "correlation", n, r.r, "correlation", r.correlation);
    row(out, "correlation", n, r.r, "ci_lower", r.ci.lower);
    row(out, "correlation", n, r.r, "ci_upper", r.ci.upper);
    row(out, "correlation", n, r.r, "one_minus_correlation", 1.0 - r.correlation);
    row(out, "correlation", n, r.r, "var_difference", r.var_difference);
    nonnegative = nonnegative && r.ci.lower >= -0.02;
    identity = identity && r.variance_identity_holds;
    if (r.r == n) continue;
    if (2 * r.r <= n) {
      far.emplace_back(static_cast<double>(r.r) / n, r.correlation);
    } else {
      close.emplace_back(static_cast<double>(n - r.r) / n, 1.0 - r.correlation);
      close_rows.push_back(&r);
    }
  }
  check(out, "correlation.nonnegative", nonnegative, "every lower CI bound >= -0.02");
  check(out, "correlation.variance_identity", identity, "Var(U - V) >= (1 - Corr^2) Var(U) on every pair");
  if (far.size() >= 3) {
    const FitOutcome fit = try_fit(far);
    if (fit.fit) row(out, "correlation", n, std::nullopt, "far_slope", fit.fit->slope, fit.fit->slope_standard_error);
    check_slope(out, "correlation.far_slope", fit, 1.0 / 3.0, 0.15);
  }
  if (close.size() >= 3) {
    const FitOutcome fit = try_fit(close);
    if (fit.fit) row(out, "correlation", n, std::nullopt, "close_slope", fit.fit->slope, fit.fit->slope_standard_error);
    check_slope(out, "correlation.close_slope", fit, 2.0 / 3.0, 0.20);
    // close_rows ascend in r, so N - r descends.
    bool increasing = true;
    for (std::size_t i = 1; i < close_rows.size(); ++i) {
      increasing = increasing && 1.0 - close_rows[i - 1]->correlation > 1.0 - close_rows[i]->correlation;
    }
    check(out, "correlation.close_increasing", increasing, "1 - Corr strictly increasing in N - r");
  }
  return out;
}

SuiteOutcome tails_checks(const TailReport& report) {
  SuiteOutcome out;
  const int n = report.n;
  row(out, "tails", n, std::nullopt, "centering", report.centering);
  row(out, "tails", n, std::nullopt, "p_above_centering", report.p_above_centering);
  std::vector<double> upper;
  bool monotone = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const std::string t = num(r.t);
    row(out, "tails", n, std::nullopt, "p_upper_t" + t, r.p_upper);
    row(out, "tails", n, std::nullopt, "p_upper_t" + t + "_ci_lower", r.upper_ci.lower);
    row(out, "tails", n, std::nullopt, "p_upper_t" + t + "_ci_upper", r.upper_ci.upper);
    row(out, "tails", n, std::nullopt, "p_lower_t" + t, r.p_lower);
    row(out, "tails", n, std::nullopt, "p_lower_t" + t + "_ci_lower", r.lower_ci.lower);
    row(out, "tails", n, std::nullopt, "p_lower_t" + t + "_ci_upper", r.lower_ci.upper);
    upper.push_back(r.p_upper);
    if (i > 0) {
      const auto& prev = report.rows[i - 1];
      monotone = monotone && r.p_upper < prev.p_upper && r.p_lower < prev.p_lower;
    }
  }
  check(out, "tails.monotone", monotone, "upper and lower tail frequencies strictly decrease in t");
  check(out, "tails.superlinear", superlinear_decay(upper), "-log P(upper) has increasing steps in t");
  check(out, "tails.centering", report.p_above_centering < 0.5,
        "P(log Z >= 2N f_d) = " + num(report.p_above_centering));
  return out;
}

SuiteOutcome nonrandom_checks(const NonrandomReport& report) {
  SuiteOutcome out;
  bool positive = true;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& r : report.rows) {
    row(out, "nonrandom", r.n, std::nullopt, "scaled_gap", r.value, r.se);
    positive = positive && r.value - 3 * r.se > 0;
    lo = std::min(lo, r.value);
    hi = std::max(hi, r.value);
  }
  check(out, "nonrandom.positive", positive, "estimate - 3 SE > 0 at every N");
  check(out, "nonrandom.stable", lo > 0 && hi <= 2 * lo, "values within [" + num(lo) + ", " + num(hi) + "]");
  return out;
}

SuiteOutcome transversal_checks(const TransversalReport& report) {
  SuiteOutcome out;
  for (const auto& r : report.rows) {
    row(out, "transversal", r.n, r.r, "displacement_sd", r.sd);
    row(out, "transversal", r.n, r.r, "displacement_mean", r.mean);
  }
  if (report.fit.fit) {
    row(out, "transversal", std::nullopt, std::nullopt, "slope", report.fit.fit->slope,
        report.fit.fit->slope_standard_error);
  }
  check_slope(out, "transversal.slope", report.fit, 2.0 / 3.0, 0.10);
  check(out, "transversal.growth", report.rows.back().sd > report.rows.front().sd,
        "sd grows from N=" + std::to_string(report.rows.front().n) + " to N=" +
            std::to_string(report.rows.back().n));
  return out;
}

}  // namespace

SuiteOutcome variance_suite(const SuiteConfig& config) {
  return variance_checks(estimate_variance_scaling(variance_plan(config)));
}

SuiteOutcome correlation_suite(const SuiteConfig& config) {
  return correlation_checks(estimate_time_correlation(correlation_plan(config)));
}

SuiteOutcome tails_suite(const SuiteConfig& config) {
  return tails_checks(estimate_tail_curve(tails_plan(config)));
}

SuiteOutcome nonrandom_suite(const SuiteConfig& config) {
  return nonrandom_checks(estimate_nonrandom_fluctuation(nonrandom_plan(config)));
}

SuiteOutcome transversal_suite(const SuiteConfig& config) {
  return transversal_checks(estimate_transversal_exponent(transversal_plan(config)));
}

SuiteOutcome acceptance_suite(const SuiteConfig& config) {
  SuiteConfig base;
  base.mu = config.mu;
  base.seed = config.seed;
  base.threads = config.threads;

  SuiteOutcome out = shape_suite(base);
  out.append(dp_suite(base));
  out.append(burke_suite(base));
  out.append(exit_suite(base));
  out.append(sandwich_suite(base));
  out.append(sampler_suite(base));

  const ExperimentPlan var = variance_plan(base);
  const ExperimentPlan cor = correlation_plan(base);
  const ExperimentPlan tail = tails_plan(base);
  const ExperimentPlan nr = nonrandom_plan(base);
  var.validate();
  cor.validate(true);
  tail.validate();
  nr.validate();

  std::map<int, std::size_t> need;
  auto request = [&](int a, std::size_t count) { need[a] = std::max(need[a], count); };
  for (int n : var.n_values) request(n, var.replicas);
  for (int n : nr.n_values) request(n, nr.replicas);
  for (int r : cor.levels_for(cor.n_values.front())) request(r, cor.replicas);
  request(cor.n_values.front(), cor.replicas);
  request(tail.n_values.front(), tail.replicas);
  std::vector<int> points;
  std::vector<std::size_t> counts;
  for (const auto& [a, count] : need) {
    points.push_back(a);
    counts.push_back(count);
  }
  const DiagonalSamples samples =
      sample_diagonal_free_energies(base.mu, base.seed, base.threads, FieldModel::kInverseGamma, points, counts);

  out.append(variance_checks(summarize_variance(var, samples)));
  out.append(correlation_checks(summarize_correlation(cor, samples)));
  out.append(tails_checks(summarize_tails(tail, samples)));
  out.append(nonrandom_checks(summarize_nonrandom(nr, samples)));
  out.append(transversal_checks(estimate_transversal_exponent(transversal_plan(base))));
  return out;
}

}  // namespace polymer
