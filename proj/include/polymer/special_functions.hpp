#pragma once

#include <optional>

#include "polymer/lattice.hpp"

namespace polymer {

/// Shape parameter of the inverse-gamma weights, with an optional
/// boundary parameter rho in (0, mu).
struct ModelShape {
  double mu = 2.0;
  std::optional<double> rho;

  ModelShape() = default;
  explicit ModelShape(double mu_, std::optional<double> rho_ = std::nullopt);

  double rho_or_diagonal() const { return rho.value_or(mu / 2); }
};

/// Unit l1 direction in the closed quadrant.
struct Direction2 {
  double e1 = 0.5;
  double e2 = 0.5;
};

struct ShapeEvaluation {
  double rho = 0;
  double f_of_rho = 0;
  double f_d = 0;
};

/// Psi_k(x) = d^{k+1}/dx^{k+1} log Gamma(x) for k in {0, 1, 2} and x > 0.
///
/// Shifts the argument up to x >= 12 with the recurrence
/// Psi_k(x) = Psi_k(x + 1) - (-1)^k k! / x^{k+1}, then sums the asymptotic
/// Bernoulli series until the next term drops below 1e-18.
double polygamma(int order, double x);

inline double digamma(double x) { return polygamma(0, x); }
inline double trigamma(double x) { return polygamma(1, x); }

/// (Psi_1(rho), Psi_1(mu - rho)) / (Psi_1(rho) + Psi_1(mu - rho)).
Direction2 characteristic_direction(double mu, double rho);

/// Limit free energy per unit l1 length in the direction of
/// characteristic_direction(mu, rho).
double shape_f(double mu, double rho);

/// Diagonal value f(mu / 2) = -Psi_0(mu / 2).
double shape_f_diagonal(double mu);

ShapeEvaluation evaluate_shape(double mu, double rho);

/// Slope e2/e1 of the characteristic direction at rho + z:
/// Psi_1(mu - rho - z) / Psi_1(rho + z).
double slope_map(double mu, double rho, double z);

/// Derivative of slope_map with respect to z.
double slope_map_derivative(double mu, double rho, double z);

/// z with slope_map(mu, mu/2, z) == m. Bisection bracketed on (-mu/2, mu/2),
/// seeded by the linearization around m = 1 and accelerated by safeguarded
/// Newton steps. Accepts m in [1e-8, 1e8].
double inverse_slope(double mu, double m);

/// Lambda(p) for p in the open quadrant: |p|_1 * f(mu/2 + z_p) where
/// z_p solves slope(p) = slope_map(mu, mu/2, z_p). Degree-1 homogeneous.
double shape_at(double mu, Point p);
double shape_at(double mu, double px, double py);

}  // namespace polymer
