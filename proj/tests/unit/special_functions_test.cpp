#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "polymer/errors.hpp"
#include "polymer/special_functions.hpp"

namespace polymer {
namespace {

constexpr double kGamma = 0.57721566490153286061;

struct Frozen {
  int order;
  double x;
  double value;
};

// 50-digit mpmath values from tools/oracles/shape_oracle.py.
const Frozen kPolygamma[] = {
    {0, 0.001, -1000.575571931810300471473},
    {0, 0.1, -10.42375494041107679516822},
    {0, 0.5, -1.963510026021423479440976},
    {0, 1.0, -0.5772156649015328606065121},
    {0, 2.5, 0.7031566406452431872256903},
    {0, 7.3, 1.917820335637986098367634},
    {0, 11.9, 2.43393353688253745476113},
    {0, 12.0, 2.442661679975812016738365},
    {0, 50.0, 3.90198967342789219695396},
    {0, 1000.0, 6.907255195648812052050006},
    {0, 1e6, 13.81551005796419077077462},
    {1, 0.001, 1000001.642533195868978033},
    {1, 0.1, 101.4332991507927588172155},
    {1, 0.5, 4.934802200544679309417245},
    {1, 1.0, 1.644934066848226436472415},
    {1, 2.5, 0.4903577561002348649728011},
    {1, 7.3, 0.1467957681314270981643728},
    {1, 11.9, 0.08766320119000418630251504},
    {1, 12.0, 0.08690187287176839075030018},
    {1, 50.0, 0.02020133322669712580597065},
    {1, 1000.0, 0.001000500166666633333357143},
    {1, 1e6, 1.000000500000166666666667e-6},
    {2, 0.001, -2000000002.397632289733331},
    {2, 0.1, -2001.86145737834400631401},
    {2, 0.5, -16.82879664423431999559633},
    {2, 1.0, -2.404113806319188570799476},
    {2, 2.5, -0.2362040516417274030037417},
    {2, 7.3, -0.02151081444162025091922297},
    {2, 11.9, -0.007679939159328307372376312},
    {2, 12.0, -0.007547205368998911939939962},
    {2, 50.0, -0.0004080799893375969314079537},
    {2, 1000.0, -1.0010004999998333335e-6},
    {2, 1e6, -1.0000010000005e-12},
};

TEST(Polygamma, MatchesHighPrecisionOracle) {
  for (const auto& f : kPolygamma) {
    const double got = polygamma(f.order, f.x);
    EXPECT_NEAR(got, f.value, 1e-12 * std::max(1.0, std::abs(f.value)))
        << "order " << f.order << " x " << f.x;
  }
}

TEST(Polygamma, RelativeAccuracyOnSmallValues) {
  for (const auto& f : kPolygamma) {
    EXPECT_NEAR(polygamma(f.order, f.x), f.value, 1e-13 * std::abs(f.value))
        << "order " << f.order << " x " << f.x;
  }
}

TEST(Polygamma, KnownIdentities) {
  EXPECT_NEAR(digamma(1.0), -kGamma, 1e-15);
  EXPECT_NEAR(trigamma(1.0), std::numbers::pi * std::numbers::pi / 6, 1e-15);
  EXPECT_NEAR(digamma(3.5) - digamma(2.5), 0.4, 1e-14);
  EXPECT_NEAR(trigamma(0.5), std::numbers::pi * std::numbers::pi / 2, 1e-14);
}

TEST(Polygamma, RecurrenceAcrossShiftThreshold) {
  for (double x : {0.37, 3.1, 10.5, 11.5, 11.99, 12.0, 12.01, 40.0}) {
    EXPECT_NEAR(polygamma(0, x + 1) - polygamma(0, x), 1 / x, 1e-14 * std::max(1.0, 1 / x));
    EXPECT_NEAR(polygamma(1, x) - polygamma(1, x + 1), 1 / (x * x), 1e-14 * std::max(1.0, 1 / (x * x)));
    EXPECT_NEAR(polygamma(2, x + 1) - polygamma(2, x), 2 / (x * x * x),
                1e-14 * std::max(1.0, 2 / (x * x * x)));
  }
}

TEST(Polygamma, DomainErrors) {
  EXPECT_THROW(polygamma(0, 0.0), DomainError);
  EXPECT_THROW(polygamma(1, -1.5), DomainError);
  EXPECT_THROW(polygamma(3, 1.0), DomainError);
  EXPECT_THROW(polygamma(-1, 1.0), DomainError);
  EXPECT_THROW(polygamma(0, std::nan("")), DomainError);
}

TEST(ModelShapeTest, ValidatesParameters) {
  EXPECT_NO_THROW(ModelShape(2.0, 0.5));
  EXPECT_THROW(ModelShape(0.0), DomainError);
  EXPECT_THROW(ModelShape(2.0, 2.0), DomainError);
  EXPECT_THROW(ModelShape(2.0, 0.0), DomainError);
  EXPECT_DOUBLE_EQ(ModelShape(3.0).rho_or_diagonal(), 1.5);
}

TEST(Direction, SymmetricPointIsDiagonal) {
  const auto xi = characteristic_direction(2.0, 1.0);
  EXPECT_DOUBLE_EQ(xi.e1, 0.5);
  EXPECT_DOUBLE_EQ(xi.e2, 0.5);
}

TEST(Direction, ComponentsSumToOne) {
  const auto xi = characteristic_direction(2.0, 0.3);
  EXPECT_NEAR(xi.e1 + xi.e2, 1.0, 1e-15);
}

TEST(Direction, MatchesPolygammaFormula) {
  // Psi_1(0.5) = pi^2/2 and Psi_1(1.5) = pi^2/2 - 4.
  const double a = std::numbers::pi * std::numbers::pi / 2;
  const double b = a - 4;
  const auto xi = characteristic_direction(2.0, 0.5);
  EXPECT_NEAR(xi.e1, a / (a + b), 1e-14);
  EXPECT_NEAR(xi.e1, 0.84073846605894148765, 1e-14);
  EXPECT_NEAR(xi.e2, 0.15926153394105851235, 1e-14);
}

TEST(Direction, MonotoneInRho) {
  double prev = 2.0;
  for (int i = 1; i <= 100; ++i) {
    const double rho = 2.0 * i / 101.0;
    const auto xi = characteristic_direction(2.0, rho);
    EXPECT_LT(xi.e1, prev);
    EXPECT_GT(xi.e1, 0.0);
    EXPECT_LT(xi.e1, 1.0);
    prev = xi.e1;
  }
}

TEST(Direction, DomainErrors) {
  EXPECT_THROW(characteristic_direction(2.0, 0.0), DomainError);
  EXPECT_THROW(characteristic_direction(2.0, 2.5), DomainError);
}

TEST(Shape, DiagonalValue) {
  EXPECT_NEAR(shape_f(2.0, 1.0), kGamma, 1e-15);
  EXPECT_NEAR(shape_f_diagonal(2.0), kGamma, 1e-15);
  for (double mu : {0.5, 1.0, 3.7, 10.0}) {
    EXPECT_NEAR(shape_f(mu, mu / 2), -digamma(mu / 2), 1e-12);
  }
}

TEST(Shape, FrozenValues) {
  EXPECT_NEAR(shape_f(2.0, 0.5), 0.28203309390354050415, 1e-13);
  EXPECT_NEAR(shape_f(5.0, 1.3), -0.88028802563801194343, 1e-13);
}

TEST(Shape, SymmetryOnHundredPoints) {
  for (int i = 1; i <= 100; ++i) {
    const double rho = 2.0 * i / 101.0;
    EXPECT_NEAR(shape_f(2.0, rho), shape_f(2.0, 2.0 - rho), 1e-12) << rho;
  }
  EXPECT_NEAR(shape_f(2.0, 0.7), shape_f(2.0, 1.3), 1e-14);
}

TEST(Shape, DiagonalIsMaximal) {
  const double fd = shape_f_diagonal(2.0);
  for (int i = 1; i <= 100; ++i) EXPECT_LE(shape_f(2.0, 2.0 * i / 101.0), fd + 1e-15);
}

TEST(Shape, CurvatureRatioConverges) {
  const double target = 0.5 * polygamma(2, 1.0);
  EXPECT_NEAR(target, -1.2020569031595942854, 1e-14);
  const double fd = shape_f_diagonal(2.0);
  const std::pair<double, double> frozen[] = {{0.1, -1.2015159182630911815},
                                              {0.05, -1.2019238991982035445},
                                              {0.025, -1.2020237918365714035},
                                              {0.0125, -1.2020486340506362486}};
  double prev_err = 1.0;
  for (auto [z, ratio] : frozen) {
    const double got = (shape_f(2.0, 1.0 + z) - fd) / (z * z);
    EXPECT_NEAR(got, ratio, 1e-6);
    const double err = std::abs(got - target);
    EXPECT_LT(err, prev_err);
    EXPECT_LE(err, 0.1 * z * z);
    prev_err = err;
  }
  const double got = (shape_f(2.0, 1.0125) - fd) / (0.0125 * 0.0125);
  EXPECT_LE(std::abs(got / target - 1), 1e-3);
}

TEST(Shape, EvaluateBundlesValues) {
  const auto e = evaluate_shape(2.0, 0.5);
  EXPECT_DOUBLE_EQ(e.rho, 0.5);
  EXPECT_DOUBLE_EQ(e.f_of_rho, shape_f(2.0, 0.5));
  EXPECT_DOUBLE_EQ(e.f_d, shape_f_diagonal(2.0));
}

TEST(Slope, SymmetricPointAndLinearization) {
  EXPECT_DOUBLE_EQ(slope_map(2.0, 1.0, 0.0), 1.0);
  const double d0 = slope_map_derivative(2.0, 1.0, 0.0);
  EXPECT_GT(d0, 0.0);
  double worst = 0;
  for (int i = -10; i <= 10; ++i) {
    const double z = 0.01 * i;
    const double rem = std::abs(slope_map(2.0, 1.0, z) - 1.0 - d0 * z);
    if (z != 0) worst = std::max(worst, rem / (z * z));
  }
  EXPECT_LT(worst, 20.0);
}

TEST(Slope, DerivativeMatchesFiniteDifference) {
  for (double z : {-0.5, -0.1, 0.0, 0.3}) {
    const double h = 1e-6;
    const double fd = (slope_map(2.0, 1.0, z + h) - slope_map(2.0, 1.0, z - h)) / (2 * h);
    EXPECT_NEAR(slope_map_derivative(2.0, 1.0, z), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(InverseSlope, FrozenRoots) {
  EXPECT_EQ(inverse_slope(2.0, 1.0), 0.0);
  EXPECT_NEAR(inverse_slope(2.0, 1.25), 0.076133996964163971014, 1e-13);
  EXPECT_NEAR(inverse_slope(2.0, 1e-3), -0.96106022823121972306, 1e-12);
  EXPECT_NEAR(inverse_slope(2.0, 1e3), 0.96106022823121972306, 1e-12);
}

TEST(InverseSlope, RoundTrip) {
  EXPECT_NEAR(slope_map(2.0, 1.0, inverse_slope(2.0, 1.25)), 1.25, 1e-12);
  for (double m = 1e-3; m <= 1e3; m *= 1.7) {
    for (double mu : {0.5, 2.0, 6.0}) {
      const double z = inverse_slope(mu, m);
      EXPECT_NEAR(slope_map(mu, mu / 2, z), m, 1e-10 * std::max(1.0, m)) << mu << " " << m;
    }
  }
}

TEST(InverseSlope, WindowErrors) {
  EXPECT_THROW(inverse_slope(2.0, 0.0), DomainError);
  EXPECT_THROW(inverse_slope(2.0, -1.0), DomainError);
  EXPECT_THROW(inverse_slope(2.0, 1e9), DomainError);
}

TEST(ShapeAt, DiagonalAndHomogeneity) {
  const double fd = shape_f_diagonal(2.0);
  EXPECT_NEAR(shape_at(2.0, Point{50, 50}), 100 * fd, 1e-12);
  EXPECT_NEAR(shape_at(2.0, Point{60, 80}), 2 * shape_at(2.0, Point{30, 40}), 1e-11);
  EXPECT_NEAR(shape_at(2.0, Point{30, 40}), 39.597658491612844362, 1e-11);
  EXPECT_NEAR(shape_at(2.0, Point{40, 60}), 55.451104323714938415, 1e-11);
  EXPECT_NEAR(shape_at(2.0, Point{40, 60}), shape_at(2.0, Point{60, 40}), 1e-11);
}

TEST(ShapeAt, RejectsAxisAndBeyondWindow) {
  EXPECT_THROW(shape_at(2.0, Point{0, 5}), DomainError);
  EXPECT_THROW(shape_at(2.0, Point{5, -1}), DomainError);
  EXPECT_THROW(shape_at(2.0, 1.0, 1e9), DomainError);
}

TEST(ShapeAt, RegularityAtDeskScale) {
  const int n = 4096;
  const double fd = shape_f_diagonal(2.0);
  const double n13 = std::cbrt(static_cast<double>(n));
  double c_fit = 0;
  for (int h : {1, 2, 4}) {
    const int k = static_cast<int>(std::floor(h * std::pow(n, 2.0 / 3.0)));
    for (int j = -k; j <= k; j += 7) {
      const double dev = std::abs(shape_at(2.0, Point{n + j, n - j}) - 2 * n * fd);
      c_fit = std::max(c_fit, dev / (h * h * n13));
    }
  }
  EXPECT_LE(c_fit, 5.0);
}

}  // namespace
}  // namespace polymer
