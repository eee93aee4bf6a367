#include "crosspoly/critline.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace crosspoly;

TEST(CritLine, SmallPolynomials) {
  // L_1(-1/2 + i t) = 2 i t
  auto r1 = critical_line_polynomial(1);
  EXPECT_EQ(r1.parity, 1u);
  EXPECT_EQ(r1.rcoeffs[0], 0);
  EXPECT_EQ(r1.rcoeffs[1], 2);
  // L_2(-1/2 + i t) = 1/2 - 2 t^2
  auto r2 = critical_line_polynomial(2);
  EXPECT_EQ(r2.rcoeffs[0], Rational(1, 2));
  EXPECT_EQ(r2.rcoeffs[1], 0);
  EXPECT_EQ(r2.rcoeffs[2], -2);
}

TEST(CritLine, MatchesDirectSubstitution) {
  // compare R(t) against L_d(-1/2 + i t) expanded with exact complex rationals
  for (unsigned d : {5u, 8u, 23u}) {
    auto p = build_ehrhart(d);
    auto r = critical_line_polynomial(d);
    for (int n : {1, 3, 7, 20}) {
      Rational t(n, 3);
      Rational ar = 0, ai = 0;
      for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
        Rational nr = ar * Rational(-1, 2) - ai * t + *it;
        Rational ni = ar * t + ai * Rational(-1, 2);
        ar = nr;
        ai = ni;
      }
      Rational v = eval_critical(r, t);
      if (d % 2 == 0) {
        EXPECT_EQ(ai, 0);
        EXPECT_EQ(ar, v);
      } else {
        EXPECT_EQ(ar, 0);
        EXPECT_EQ(ai, v);
      }
    }
  }
}

TEST(CritLine, SturmCountsEveryRoot) {
  for (unsigned d = 1; d <= 40; ++d) {
    auto r = critical_line_polynomial(d);
    auto chain = sturm_sequence(r.scaled);
    EXPECT_TRUE(chain.squarefree()) << d;
    EXPECT_EQ(chain.real_root_count(), static_cast<int>(d)) << d;
  }
}

TEST(CritLine, SturmOnKnownPolynomial) {
  // (x-1)(x-2)(x+3) = x^3 - 7x + 6
  detail::IntPoly p{6, -7, 0, 1};
  auto s = sturm_sequence(p);
  EXPECT_EQ(s.real_root_count(), 3);
  EXPECT_EQ(s.roots_between(Rational(0), Rational(5, 2)), 2);
  EXPECT_EQ(s.roots_above(Rational(3, 2)), 1);
  // x^2 + 1 has none; (x-1)^2 is not squarefree
  EXPECT_EQ(sturm_sequence({1, 0, 1}).real_root_count(), 0);
  EXPECT_FALSE(sturm_sequence({1, -2, 1}).squarefree());
}

TEST(CritLine, IsolationIntervalsAreDisjointAndSymmetric) {
  for (unsigned d : {1u, 2u, 9u, 30u}) {
    auto r = critical_line_polynomial(d);
    auto iv = isolate_roots(r);
    ASSERT_EQ(iv.size(), d);
    for (std::size_t k = 0; k + 1 < iv.size(); ++k) EXPECT_LT(iv[k].hi, iv[k + 1].lo);
    for (std::size_t k = 0; k < iv.size(); ++k) EXPECT_EQ(iv[k].lo, -iv[d - 1 - k].hi);
  }
}

TEST(CritLine, RefinedRootsAreRoots) {
  const unsigned bits = 160;
  auto rs = all_roots(25, bits);
  ASSERT_EQ(rs.size(), 25u);
  auto p = build_ehrhart(25);
  for (std::size_t k = 0; k < rs.ordinates.size(); ++k) {
    const Real& t = rs.ordinates[k];
    EXPECT_LE(rs.radii[k], boost::multiprecision::ldexp(make_real(1, 64) + t, -150));
    // |L(x)| at the computed root is tiny next to |L'(x)| * radius scale
    auto v = eval_exact(p, ComplexHP(make_real(Rational(-1, 2), bits), t, bits));
    auto w = eval_exact(p, ComplexHP(make_real(Rational(-1, 2), bits), t + 1, bits));
    EXPECT_LT(Real(abs(v) / abs(w)), Real("1e-40"));
  }
}

TEST(CritLine, LargestRootKnownValues) {
  for (const auto& o : oracle::kLargestRoots) {
    if (o.d > 200) continue;
    auto r = largest_root(o.d, 128);
    Real want = make_real(o.tau, 128);
    EXPECT_LT(Real(boost::multiprecision::abs(r.tau - want)), Real("1e-18")) << o.d;
    EXPECT_LT(r.radius, Real("1e-30"));
  }
}

TEST(CritLine, CsvShape) {
  auto rs = all_roots(3, 64);
  std::ostringstream os;
  write_roots_csv(os, rs, 12);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, 15), "tau,err_radius\n");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
  EXPECT_NE(s.find("\n0,0\n"), std::string::npos);
}
