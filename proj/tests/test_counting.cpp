#include "crosspoly/counting.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace crosspoly;

namespace {

Real R(double v) { return make_real(v, 128); }

}  // namespace

TEST(ExactCount, SmallSets) {
  EXPECT_EQ(count_roots_exact(all_roots(2, 64), R(0), R(1)), 1);
  EXPECT_EQ(count_roots_exact(all_roots(1, 64), R(0), R(0)), 1);
  auto rs = all_roots(100, 64);
  EXPECT_EQ(count_roots_exact(rs, R(0), R(92)), 50);
  EXPECT_EQ(count_roots_exact(rs, R(-100), R(100)), 100);
}

TEST(ExactCount, RootsUpTo) {
  auto part = roots_up_to(60, R(20));
  auto full = all_roots(60, 64);
  EXPECT_EQ(static_cast<long>(part.size()), count_roots_exact(full, R(0), R(20)));
}

TEST(AsymptoticCount, EmptyRange) {
  EXPECT_EQ(count_roots_asymptotic(50, R(3), R(3), 0.5), 0);
}

TEST(AsymptoticCount, HalfTheRoots) {
  const double b = 50 - std::cbrt(50.0) * 1.8;
  Real n = count_roots_asymptotic(50, R(0), R(b), 0.5);
  EXPECT_NEAR(n.convert_to<double>(), 25.0, 2.0);
}

TEST(AsymptoticCount, TotalCount) {
  for (unsigned d : {10u, 20u, 50u}) {
    Real n = count_roots_asymptotic(d, R(0), tau_upper_limit(d), 0.25);
    const double total = 2 * n.convert_to<double>() + d % 2;
    EXPECT_GE(total, d - 2.0) << d;
    EXPECT_LE(total, d + 2.0) << d;
  }
}

TEST(AsymptoticCount, NearZeroDensity) {
  Real n = count_roots_asymptotic(1000, R(0), R(1), 0.1);
  EXPECT_NEAR(n.convert_to<double>(), std::log(1000.0) / M_PI, 1.0);
}

TEST(AsymptoticCount, InterlacingBetweenRoots) {
  // in the saddle regime the phase moves by about pi between consecutive roots
  auto rs = all_roots(50, 64);
  const Real lo = regime_threshold(50) + 1;
  int checked = 0;
  for (std::size_t k = 0; k + 1 < rs.ordinates.size(); ++k) {
    const Real& a = rs.ordinates[k];
    const Real& b = rs.ordinates[k + 1];
    if (a < lo || b > tau_upper_limit(50)) continue;
    Real n = count_roots_asymptotic(50, a, b, 0.25);
    EXPECT_NEAR(n.convert_to<double>(), 1.0, 0.25) << to_decimal(a, 8);
    ++checked;
  }
  EXPECT_GT(checked, 15);
}

TEST(AsymptoticCount, OverlapWithStirlingPhase) {
  // on [0, sqrt(log d)] the count equals the phase change of (2d+1)^(-x) Gamma(x)
  const unsigned d = 10000;
  const double b = std::sqrt(std::log(double(d)));
  Real n = count_roots_asymptotic(d, R(0), R(b), 0.05);
  auto x = ComplexHP(make_real(Rational(1, 2), 128), R(b), 128);
  auto lg = log_gamma(x);  // continuous in tau
  Real phase = lg.im - R(b) * boost::multiprecision::log(make_real(2 * d + 1, 128));
  Real direct = -phase / pi(128);
  EXPECT_NEAR(n.convert_to<double>(), direct.convert_to<double>(), 1.5);
}

TEST(AsymptoticCount, RangeChecks) {
  EXPECT_THROW(count_roots_asymptotic(50, R(2), R(1), 0.5), RangeError);
  EXPECT_THROW(count_roots_asymptotic(50, R(0), R(49.5), 0.5), RangeError);
}

TEST(CountingCurve, TinyDimension) {
  // d = 2 admits tau <= 2 - 2^(1/6) only
  auto c = build_counting_curve(2, 0.75, 0.25);
  ASSERT_EQ(c.rows.size(), 4u);
  std::vector<long> exact;
  for (const auto& r : c.rows) exact.push_back(r.exact);
  EXPECT_EQ(exact, (std::vector<long>{0, 0, 1, 1}));
  EXPECT_THROW(build_counting_curve(2, 1.0, 0.25), RangeError);
}

TEST(CountingCurve, FiftyDimensions) {
  auto c = build_counting_curve(50, 45, 0.5);
  ASSERT_EQ(c.rows.size(), 91u);
  EXPECT_LE(c.max_abs_error(), 2);
  for (std::size_t k = 1; k < c.rows.size(); ++k) {
    EXPECT_GE(c.rows[k].exact, c.rows[k - 1].exact);
    EXPECT_GE(c.rows[k].asym, c.rows[k - 1].asym);
  }
  std::ostringstream os;
  write_counting_csv(os, c, 10);
  EXPECT_EQ(os.str().substr(0, 19), "tau,exact,asym,err\n");
}

TEST(LargestRoot, PredictorNearExact) {
  for (const auto& o : oracle::kLargestRoots) {
    if (o.d > 200) continue;
    auto e = largest_root_estimate(o.d);
    EXPECT_NEAR(e.tau_hat.convert_to<double>(), std::stod(o.tau), 0.5) << o.d;
    EXPECT_GT(e.scaled, 1.70);
    EXPECT_LT(e.scaled, 1.85);
    EXPECT_GT(e.f_of_d, 0);
  }
}

TEST(LargestRoot, OddDimension) {
  auto e = largest_root_estimate(101);
  auto ex = largest_root(101, 64);
  EXPECT_NEAR(e.tau_hat.convert_to<double>(), ex.tau.convert_to<double>(), 0.5);
}

TEST(LargestRoot, TooSmall) { EXPECT_THROW(largest_root_estimate(5), RangeError); }
