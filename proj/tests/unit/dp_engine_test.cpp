#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "enumeration.hpp"
#include "polymer/dp_engine.hpp"
#include "polymer/errors.hpp"

namespace polymer {
namespace {

bool close_rel(double a, double b, double tol = 1e-12) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

TEST(Table, ForcedOnesCountsPaths) {
  const auto ones = forced_field(RegionSpec::square(12), 1.0);
  const auto t = log_partition_table(ones, Point{0, 0});
  EXPECT_NEAR(t.log_z({2, 2}), std::log(6.0), 1e-15);
  for (int n = 1; n <= 12; ++n) {
    const double expected = std::log(static_cast<double>(binomial(2 * n, n)));
    EXPECT_NEAR(t.log_z(diag(n)), expected, 4e-16 * expected) << n;
  }
}

TEST(Table, SingleStep) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(3), 7, 0);
  const auto t = log_partition_table(f, Point{0, 0});
  EXPECT_EQ(t.log_z({1, 0}), f.log_weight({1, 0}));
  EXPECT_EQ(t.log_z({0, 1}), f.log_weight({0, 1}));
}

TEST(Table, ZeroLengthPathCarriesNoMass) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(3), 7, 0);
  const auto t = log_partition_table(f, Point{1, 1});
  EXPECT_EQ(t.log_z({1, 1}), kNegInf);
  EXPECT_EQ(t.entry({1, 1}), 0.0);
  EXPECT_EQ(t.log_z({0, 3}), kNegInf);  // unreachable
  EXPECT_EQ(t.log_z({9, 9}), kNegInf);  // outside
  const auto inc = log_partition_table(f, Point{1, 1}, PathConstraint::none(), StartConvention::kIncludeStart);
  EXPECT_EQ(inc.log_z({1, 1}), f.log_weight({1, 1}));
  EXPECT_EQ(inc.entry({1, 1}), f.log_weight({1, 1}));
}

TEST(Table, MatchesEnumerationSeed7) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(3), 7, 0);
  const auto t = log_partition_table(f, Point{0, 0});
  EXPECT_EQ(oracle::enumerate_paths({0, 0}, {3, 3}).size(), 20u);
  EXPECT_TRUE(close_rel(t.log_z({3, 3}), oracle::enumerated_log_z(f, {0, 0}, {3, 3})));
}

TEST(Table, MatchesEnumerationOnFiftyFields) {
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    std::mt19937_64 gen(rep);
    const int w = 1 + static_cast<int>(gen() % 5), h = 1 + static_cast<int>(gen() % 5);
    const double mu = 0.5 + 0.25 * static_cast<double>(gen() % 12);
    const auto f = sample_weight_field(mu, RegionSpec({0, 0}, {w - 1, h - 1}), 1000 + rep, rep);
    const auto t = log_partition_table(f, Point{0, 0});
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) {
        EXPECT_TRUE(close_rel(t.log_z({x, y}), oracle::enumerated_log_z(f, {0, 0}, {x, y})))
            << rep << " " << x << "," << y;
      }
    }
    const auto inc = log_partition_table(f, Point{0, 0}, PathConstraint::none(), StartConvention::kIncludeStart);
    EXPECT_TRUE(close_rel(inc.log_z({w - 1, h - 1}),
                          oracle::enumerated_log_z(f, {0, 0}, {w - 1, h - 1}, true)));
  }
}

TEST(Table, PointToSetSources) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(5), 21, 0);
  const std::vector<SourceMass> src{{{0, 2}, 0.3}, {{1, 1}, -0.2}, {{2, 0}, 0.0}};
  const auto t = log_partition_table(f, src);
  const Point target{5, 4};
  double expected = kNegInf;
  for (const auto& s : src) {
    expected = logaddexp(expected, s.log_mass + oracle::enumerated_log_z(f, s.point, target));
  }
  EXPECT_TRUE(close_rel(t.log_z(target), expected));
  EXPECT_THROW(log_partition_table(f, std::vector<SourceMass>{{{0, 0}, 0}, {{0, 0}, 1}}), GeometryError);
  EXPECT_THROW(log_partition_table(f, Point{9, 0}), GeometryError);
}

TEST(Reverse, ForcedOnesAndConvention) {
  const auto ones = forced_field(RegionSpec::square(2), 1.0);
  EXPECT_NEAR(reverse_table(ones, Point{2, 2}).log_z({0, 0}), std::log(6.0), 1e-15);
  const auto f = sample_weight_field(2.0, RegionSpec::square(4), 3, 1);
  const auto inc = log_partition_table(f, Point{0, 0}, PathConstraint::none(), StartConvention::kIncludeStart);
  const auto exc = log_partition_table(f, Point{0, 0});
  for (int x = 0; x <= 4; ++x) {
    for (int y = 0; y <= 4; ++y) {
      if (x == 0 && y == 0) continue;
      EXPECT_TRUE(close_rel(inc.log_z({x, y}) - f.log_weight({0, 0}), exc.log_z({x, y})));
    }
  }
}

TEST(Reverse, AgreesWithForwardAndEnumeration) {
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const auto f = sample_weight_field(1.3, RegionSpec::square(4), 77, rep);
    const auto fwd = log_partition_table(f, Point{0, 0});
    const auto rev = reverse_table(f, Point{4, 4});
    EXPECT_TRUE(close_rel(fwd.log_z({4, 4}), rev.log_z({0, 0})));
    for (int x = 0; x <= 4; ++x) {
      for (int y = 0; y <= 4; ++y) {
        if (x == 4 && y == 4) continue;
        EXPECT_TRUE(close_rel(rev.log_z({x, y}), oracle::enumerated_log_z(f, {x, y}, {4, 4})));
      }
    }
    const auto rev_inc = reverse_table(f, Point{4, 4}, PathConstraint::none(), StartConvention::kIncludeStart);
    EXPECT_TRUE(close_rel(rev_inc.log_z({1, 0}), oracle::enumerated_log_z(f, {1, 0}, {4, 4}, true)));
  }
}

TEST(Segment, SumAndMax) {
  const auto ones = forced_field(RegionSpec::square(4), 1.0);
  const auto t = log_partition_table(ones, Point{0, 0});
  EXPECT_NEAR(segment_logsum(t, {{2, 2}, 2}), std::log(16.0), 1e-15);
  const auto m = segment_logmax(t, {{2, 2}, 2});
  EXPECT_EQ(m.argmax, (Point{2, 2}));
  EXPECT_NEAR(m.value, std::log(6.0), 1e-15);

  const auto f = sample_weight_field(2.0, RegionSpec::square(8), 5, 0);
  const auto tf = log_partition_table(f, Point{0, 0});
  EXPECT_EQ(segment_logsum(tf, {{3, 4}, 0}), tf.log_z({3, 4}));
  for (int k = 0; k <= 3; ++k) {
    const AntidiagonalSegment seg{{4, 4}, k};
    const double sum = segment_logsum(tf, seg);
    const double max = segment_logmax(tf, seg).value;
    EXPECT_GE(sum, max);
    EXPECT_GE(max, sum - std::log(2.0 * k + 1) - 1e-12);
  }
  EXPECT_THROW(segment_logsum(tf, {{8, 8}, 1}), GeometryError);
}

TEST(Segment, AllUnreachableAndTies) {
  const auto ones = forced_field(RegionSpec::square(6), 1.0);
  const auto t = log_partition_table(ones, Point{3, 3});
  const auto m = segment_logmax(t, {{2, 2}, 2});
  EXPECT_EQ(m.value, kNegInf);
  EXPECT_FALSE(m.argmax.has_value());
  EXPECT_EQ(segment_logsum(t, {{2, 2}, 2}), kNegInf);
  // C(9,4) = C(9,5): (4,5) and (5,4) tie, the smaller e1 coordinate wins.
  const auto t0 = log_partition_table(ones, Point{0, 0});
  EXPECT_EQ(segment_logmax(t0, {{5, 4}, 1}).argmax, (Point{4, 5}));
}

TEST(Profile, TelescopesAndMatchesDefinition) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(10), 8, 0);
  const auto t = log_partition_table(f, Point{0, 0});
  const auto theta = DownRightPath::from_steps({2, 9}, "ESSEESESSE");
  const auto inc = profile_increments(t, theta);
  ASSERT_EQ(inc.size(), 10u);
  double sum = 0;
  for (double v : inc) sum += v;
  EXPECT_NEAR(sum, t.log_z(theta.vertices().back()) - t.log_z(theta.vertices().front()), 1e-12);

  const Point z0{4, 5}, z1{5, 5};
  const auto step = profile_increments(t, DownRightPath({z0, z1}));
  const double direct = f.log_weight(z1) + logaddexp(t.log_z({4, 5}), t.log_z({5, 4})) - t.log_z(z0);
  EXPECT_NEAR(step[0], direct, 1e-14);
  EXPECT_THROW(profile_increments(t, DownRightPath({{0, 1}, {0, 0}})), DomainError);
}

TEST(Constraint, Membership) {
  const PathConstraint c({0, 0}, {6, 6}, 2, ConstraintMode::kInside);
  EXPECT_TRUE(c.in_parallelogram({0, 0}));
  EXPECT_TRUE(c.in_parallelogram({6, 6}));
  EXPECT_TRUE(c.in_parallelogram({2, 4}));  // w = 1
  EXPECT_TRUE(c.in_parallelogram({1, 5}));  // w = 2, on the side
  EXPECT_FALSE(c.in_parallelogram({0, 6}));  // w = 3
  EXPECT_TRUE(c.in_parallelogram({-2, 2}));  // corner a + (-2, 2)
  EXPECT_FALSE(c.in_parallelogram({-1, 0}));  // below level of a
  EXPECT_FALSE(c.in_parallelogram({7, 6}));
  EXPECT_THROW(PathConstraint({3, 3}, {3, 3}, 1, ConstraintMode::kInside), GeometryError);
  EXPECT_THROW(PathConstraint({0, 0}, {3, 3}, -1, ConstraintMode::kInside), GeometryError);
}

TEST(Constraint, InsideAndExitedMatchEnumerationAndPartition) {
  std::mt19937_64 gen(2024);
  for (int rep = 0; rep < 50; ++rep) {
    const auto f = sample_weight_field(2.0, RegionSpec::square(6), 500, static_cast<std::uint64_t>(rep));
    const Point a{static_cast<int>(gen() % 2), static_cast<int>(gen() % 2)};
    const Point b{4 + static_cast<int>(gen() % 3), 4 + static_cast<int>(gen() % 3)};
    const double k = static_cast<double>(gen() % 3) + (gen() % 2 ? 0.5 : 0.0);
    const PathConstraint in(a, b, k, ConstraintMode::kInside);
    const auto t_all = log_partition_table(f, a);
    const auto t_in = log_partition_table(f, a, in);
    const auto t_out = log_partition_table(f, a, in.with_mode(ConstraintMode::kExited));
    const auto paths = oracle::enumerate_paths(a, b);
    auto all_inside = [&](const oracle::Path& p) {
      for (Point q : p) {
        if (!in.in_parallelogram(q)) return false;
      }
      return true;
    };
    const double e_in = oracle::log_sum_paths(f, paths, false, all_inside);
    const double e_out = oracle::log_sum_paths(f, paths, false, [&](const oracle::Path& p) { return !all_inside(p); });
    EXPECT_TRUE(close_rel(t_in.log_z(b), e_in)) << rep;
    EXPECT_TRUE(close_rel(t_out.log_z(b), e_out)) << rep;
    EXPECT_TRUE(close_rel(logaddexp(t_in.log_z(b), t_out.log_z(b)), t_all.log_z(b))) << rep;
  }
}

TEST(Constraint, InsideMasksOutsideCells) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(8), 1, 0);
  const PathConstraint c({0, 0}, {8, 8}, 1, ConstraintMode::kInside);
  const auto t = log_partition_table(f, Point{0, 0}, c);
  EXPECT_EQ(t.log_z({0, 5}), kNegInf);
  EXPECT_TRUE(std::isfinite(t.log_z({4, 5})));
}

TEST(Invariants, Superadditivity) {
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const int n = 20;
    const auto f = sample_weight_field(2.0, RegionSpec::square(n), 31, rep);
    const auto from0 = log_partition_table(f, Point{0, 0});
    for (int r = 1; r < n; ++r) {
      const auto from_r = log_partition_table(f, diag(r));
      EXPECT_GE(from0.log_z(diag(n)), from0.log_z(diag(r)) + from_r.log_z(diag(n)) - 1e-12);
    }
  }
}

TEST(Invariants, MonotoneCoupling) {
  auto f = sample_weight_field(2.0, RegionSpec::square(6), 12, 0);
  const auto before = log_partition_table(f, Point{0, 0});
  const Point c{2, 3};
  f.set_log_weight(c, f.log_weight(c) + 0.5);
  const auto after = log_partition_table(f, Point{0, 0});
  for (int x = 0; x <= 6; ++x) {
    for (int y = 0; y <= 6; ++y) {
      if (x == 0 && y == 0) continue;
      if (x >= c.x && y >= c.y) {
        EXPECT_GT(after.log_z({x, y}), before.log_z({x, y}));
      } else {
        EXPECT_EQ(after.log_z({x, y}), before.log_z({x, y}));
      }
    }
  }
}

TEST(Invariants, RatioMonotonicity) {
  const Point x{0, 1}, y{1, 0}, z{4, 4};
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto f = sample_weight_field(2.0, RegionSpec::square(4), 99, rep);
    const auto tx = log_partition_table(f, x, PathConstraint::none(), StartConvention::kExcludeStart, RegionSpec({0, 0}, z));
    const auto ty = log_partition_table(f, y, PathConstraint::none(), StartConvention::kExcludeStart, RegionSpec({0, 0}, z));
    const double rx1 = tx.log_z(z) - tx.log_z(z - kE1);
    const double ry1 = ty.log_z(z) - ty.log_z(z - kE1);
    const double rx2 = tx.log_z(z) - tx.log_z(z - kE2);
    const double ry2 = ty.log_z(z) - ty.log_z(z - kE2);
    EXPECT_LE(rx1, ry1 + 1e-12) << rep;
    EXPECT_GE(rx2, ry2 - 1e-12) << rep;
  }
}

TEST(Robustness, LargeSweepSmallMu) {
  const InverseGammaField f(0.5, RegionSpec::square(2048), 42, 0);
  const std::vector<int> pts{2048};
  const auto v = diagonal_free_energies(f, pts);
  EXPECT_TRUE(std::isfinite(v[0]));
  EXPECT_GT(v[0], 0.0);
}

TEST(Rolling, BitIdenticalToFullTables) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(127), 42, 3);
  const auto full = log_partition_table(f, Point{0, 0});
  RollingForwardSweep fwd(f, f.region(), {0, 0});
  std::size_t checked = 0;
  do {
    for (int x = fwd.x_begin(); x <= fwd.x_end(); ++x) {
      const Point p{x, fwd.level() - x};
      ASSERT_EQ(fwd.at(p), full.entry(p)) << to_string(p);
      ++checked;
    }
  } while (fwd.advance());
  EXPECT_EQ(checked, 128u * 128u);

  const auto full_rev = reverse_table(f, Point{127, 127});
  RollingReverseSweep rev(f, f.region(), {127, 127});
  checked = 0;
  do {
    for (int x = rev.x_begin(); x <= rev.x_end(); ++x) {
      const Point p{x, rev.level() - x};
      ASSERT_EQ(rev.at(p), full_rev.entry(p)) << to_string(p);
      ++checked;
    }
  } while (rev.advance());
  EXPECT_EQ(checked, 128u * 128u);

  const std::vector<int> pts{10, 64, 127};
  const auto d = diagonal_free_energies(f, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(d[i], full.log_z(diag(pts[i])));
}

TEST(Rolling, SnapshotRestore) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(20), 4, 0);
  RollingForwardSweep s(f, f.region(), {0, 0});
  for (int i = 0; i < 9; ++i) s.advance();
  const auto snap = s.snapshot();
  for (int i = 0; i < 11; ++i) s.advance();
  const double at20 = s.at({10, 10});
  s.restore(snap);
  EXPECT_EQ(s.level(), 9);
  for (int i = 0; i < 11; ++i) s.advance();
  EXPECT_EQ(s.at({10, 10}), at20);
}

TEST(Crossing, ForcedOnesSymmetric) {
  const auto ones = forced_field(RegionSpec::square(4), 1.0);
  const auto c = crossing_argmax(ones, 4, 2);
  EXPECT_EQ(c.point, (Point{2, 2}));
  EXPECT_EQ(c.displacement(), 0);
  EXPECT_EQ(c.candidates, 5u);
  EXPECT_NEAR(c.best, 2 * std::log(6.0), 1e-14);
  EXPECT_NEAR(c.gap, 2 * std::log(6.0) - 2 * std::log(4.0), 1e-14);
  EXPECT_NEAR(c.log_total, std::log(70.0), 1e-14);
}

TEST(Crossing, MatchesBruteForceAndBound) {
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const int n = 12, r = 5;
    const auto f = sample_weight_field(2.0, RegionSpec::square(n), 64, rep);
    const auto c = crossing_argmax(f, n, r);
    const auto fwd = log_partition_table(f, Point{0, 0});
    const auto rev = reverse_table(f, diag(n));
    double best = kNegInf;
    Point arg{};
    for (int x = 0; x <= 2 * r; ++x) {
      const Point p{x, 2 * r - x};
      const double v = fwd.log_z(p) + rev.log_z(p);
      if (v > best) {
        best = v;
        arg = p;
      }
    }
    EXPECT_EQ(c.point, arg);
    EXPECT_NEAR(c.best, best, 1e-12);
    EXPECT_NEAR(c.log_total, fwd.log_z(diag(n)), 1e-12);
    EXPECT_LE(fwd.log_z(diag(n)), c.best + std::log(static_cast<double>(c.candidates)) + 1e-12);
  }
  const auto f = forced_field(RegionSpec::square(4), 1.0);
  EXPECT_THROW(crossing_argmax(f, 4, 0), GeometryError);
  EXPECT_THROW(crossing_argmax(f, 4, 4), GeometryError);
}

TEST(SetMax, MatchesDoubleLoop) {
  const auto f = sample_weight_field(2.0, RegionSpec::square(6), 10, 0);
  const std::vector<Point> a{{0, 0}, {1, 0}, {0, 2}};
  const std::vector<Point> b{{5, 5}, {6, 3}, {4, 6}, {6, 6}};
  double best = kNegInf;
  for (Point p : a) {
    for (Point q : b) best = std::max(best, oracle::enumerated_log_z(f, p, q));
  }
  EXPECT_TRUE(close_rel(log_partition_max(f, a, b), best));
  EXPECT_TRUE(close_rel(log_partition_max(f, b.size() < a.size() ? b : a, b), best));
}

TEST(Numeric, NanWeightsReported) {
  class NanSource final : public WeightSource {
   public:
    RegionSpec region() const override { return RegionSpec::square(2); }
    double log_weight(Point p) const override { return p == Point{1, 1} ? std::nan("") : 0.0; }
  };
  EXPECT_THROW(log_partition_table(NanSource{}, Point{0, 0}), NumericError);
}

}  // namespace
}  // namespace polymer
