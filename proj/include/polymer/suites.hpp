#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polymer/estimators.hpp"

namespace polymer {

/// Knobs shared by every suite. Unset optionals take the suite default.
struct SuiteConfig {
  double mu = 2.0;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::optional<std::size_t> replicas;
  std::vector<int> n_values;
  std::vector<int> r_values;
  std::vector<double> r_ratios;
  std::vector<double> t_grid;
  std::optional<double> rho;
  double s = 2.0;
  double q0 = 1.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// One long-format output row; n and r are blank when absent.
struct ResultRow {
  std::string experiment;
  std::optional<int> n;
  std::optional<int> r;
  std::string statistic;
  double value = 0;
  std::optional<double> stderr_value;
};

struct SuiteOutcome {
  std::vector<CheckResult> checks;
  std::vector<ResultRow> rows;

  bool passed() const;
  void append(SuiteOutcome other);
};

SuiteOutcome shape_suite(const SuiteConfig& config);
SuiteOutcome dp_suite(const SuiteConfig& config);
SuiteOutcome burke_suite(const SuiteConfig& config);
SuiteOutcome exit_suite(const SuiteConfig& config);
SuiteOutcome sandwich_suite(const SuiteConfig& config);
SuiteOutcome sampler_suite(const SuiteConfig& config);

SuiteOutcome variance_suite(const SuiteConfig& config);
SuiteOutcome correlation_suite(const SuiteConfig& config);
SuiteOutcome tails_suite(const SuiteConfig& config);
SuiteOutcome nonrandom_suite(const SuiteConfig& config);
SuiteOutcome transversal_suite(const SuiteConfig& config);

/// Every suite at its default size. The diagonal sweeps behind variance,
/// correlation, tails and nonrandom are computed once and shared.
SuiteOutcome acceptance_suite(const SuiteConfig& config);

}  // namespace polymer
