#include "polymer/special_functions.hpp"

#include <array>
#include <cmath>
#include <string>

namespace polymer {

namespace {

// B_2, B_4, ..., B_30.
constexpr std::array<double, 15> kBernoulli = {
    1.0 / 6.0,           -1.0 / 30.0,         1.0 / 42.0,
    -1.0 / 30.0,         5.0 / 66.0,          -691.0 / 2730.0,
    7.0 / 6.0,           -3617.0 / 510.0,     43867.0 / 798.0,
    -174611.0 / 330.0,   854513.0 / 138.0,    -236364091.0 / 2730.0,
    8553103.0 / 6.0,     -23749461029.0 / 870.0, 8615841276005.0 / 14322.0};

constexpr double kShiftThreshold = 12.0;
constexpr double kSeriesCutoff = 1e-18;

double digamma_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double sum = std::log(x) - 0.5 / x;
  double pow_inv = inv2;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    const double term = kBernoulli[k - 1] / (2.0 * static_cast<double>(k)) * pow_inv;
    sum -= term;
    if (std::abs(term) < kSeriesCutoff) break;
    pow_inv *= inv2;
  }
  return sum;
}

double trigamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double sum = inv + 0.5 * inv2;
  double pow_inv = inv2 * inv;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    const double term = kBernoulli[k - 1] * pow_inv;
    sum += term;
    if (std::abs(term) < kSeriesCutoff) break;
    pow_inv *= inv2;
  }
  return sum;
}

double tetragamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double sum = -inv2 - inv2 * inv;
  double pow_inv = inv2 * inv2;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    const double term = (2.0 * static_cast<double>(k) + 1.0) * kBernoulli[k - 1] * pow_inv;
    sum -= term;
    if (std::abs(term) < kSeriesCutoff) break;
    pow_inv *= inv2;
  }
  return sum;
}

void require_interior(double mu, double rho, const char* what) {
  if (!(mu > 0) || !(rho > 0) || !(rho < mu)) {
    throw DomainError(std::string(what) + ": need 0 < rho < mu, got mu=" + std::to_string(mu) +
                      " rho=" + std::to_string(rho));
  }
}

}  // namespace

ModelShape::ModelShape(double mu_, std::optional<double> rho_) : mu(mu_), rho(rho_) {
  if (!(mu > 0) || !std::isfinite(mu)) throw DomainError("shape parameter mu must be positive");
  if (rho && !(*rho > 0 && *rho < mu)) throw DomainError("rho must lie in (0, mu)");
}

double polygamma(int order, double x) {
  if (order < 0 || order > 2) {
    throw DomainError("polygamma order " + std::to_string(order) + " not supported");
  }
  if (!(x > 0) || !std::isfinite(x)) {
    throw DomainError("polygamma argument must be positive and finite");
  }
  // Accumulate the recurrence corrections separately from the series so the
  // small terms are not absorbed by a large intermediate.
  double correction = 0.0;
  while (x < kShiftThreshold) {
    switch (order) {
      case 0: correction -= 1.0 / x; break;
      case 1: correction += 1.0 / (x * x); break;
      default: correction -= 2.0 / (x * x * x); break;
    }
    x += 1.0;
  }
  switch (order) {
    case 0: return digamma_asymptotic(x) + correction;
    case 1: return trigamma_asymptotic(x) + correction;
    default: return tetragamma_asymptotic(x) + correction;
  }
}

Direction2 characteristic_direction(double mu, double rho) {
  require_interior(mu, rho, "characteristic_direction");
  const double a = trigamma(rho);
  const double b = trigamma(mu - rho);
  return {a / (a + b), b / (a + b)};
}

double shape_f(double mu, double rho) {
  require_interior(mu, rho, "shape_f");
  const double a = trigamma(rho);
  const double b = trigamma(mu - rho);
  return -(a * digamma(mu - rho) + b * digamma(rho)) / (a + b);
}

double shape_f_diagonal(double mu) {
  if (!(mu > 0)) throw DomainError("shape_f_diagonal: mu must be positive");
  return -digamma(mu / 2);
}

ShapeEvaluation evaluate_shape(double mu, double rho) {
  return {rho, shape_f(mu, rho), shape_f_diagonal(mu)};
}

double slope_map(double mu, double rho, double z) {
  require_interior(mu, rho + z, "slope_map");
  return trigamma(mu - rho - z) / trigamma(rho + z);
}

double slope_map_derivative(double mu, double rho, double z) {
  require_interior(mu, rho + z, "slope_map_derivative");
  const double den = trigamma(rho + z);
  const double num = trigamma(mu - rho - z);
  return (-polygamma(2, mu - rho - z) * den - num * polygamma(2, rho + z)) / (den * den);
}

double inverse_slope(double mu, double m) {
  if (!(mu > 0)) throw DomainError("inverse_slope: mu must be positive");
  if (!(m >= 1e-8 && m <= 1e8)) {
    throw DomainError("inverse_slope: slope " + std::to_string(m) +
                      " outside the invertibility window [1e-8, 1e8]");
  }
  const double rho = mu / 2;
  if (m == 1.0) return 0.0;

  // m_{mu/2} is strictly increasing on (-mu/2, mu/2).
  double lo = -rho;
  double hi = rho;
  const double gain = 1.0 / slope_map_derivative(mu, rho, 0.0);
  double z = gain * (m - 1.0);
  if (!(z > lo && z < hi)) z = 0.5 * (lo + hi);

  for (int iter = 0; iter < 400; ++iter) {
    const double resid = slope_map(mu, rho, z) - m;
    if (resid == 0.0) return z;
    if (resid < 0) {
      lo = z;
    } else {
      hi = z;
    }
    if (std::abs(resid) <= 1e-13 * std::max(1.0, m) || hi - lo <= 4e-16 * std::max(1.0, std::abs(z))) {
      return z;
    }
    const double step = resid / slope_map_derivative(mu, rho, z);
    double next = z - step;
    // Fall back to bisection when Newton leaves the bracket or stalls.
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    z = next;
  }
  throw ConvergenceError("inverse_slope: no convergence for m=" + std::to_string(m));
}

double shape_at(double mu, double px, double py) {
  if (!(px > 0) || !(py > 0)) {
    throw DomainError("shape_at: point must lie in the open quadrant");
  }
  const double z = inverse_slope(mu, py / px);
  return (px + py) * shape_f(mu, mu / 2 + z);
}

double shape_at(double mu, Point p) {
  return shape_at(mu, static_cast<double>(p.x), static_cast<double>(p.y));
}

}  // namespace polymer
