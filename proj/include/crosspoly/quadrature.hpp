#pragma once

// Adaptive Gauss-Legendre quadrature for smooth complex-valued integrands at
// runtime precision. A panel is accepted when the n-point rule and the same
// rule on its two halves agree; otherwise it is split.

#include "crosspoly/hp.hpp"

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace crosspoly {

struct GaussRule {
  std::vector<Real> nodes;    // on [-1, 1], ascending
  std::vector<Real> weights;
};

namespace detail {

// Legendre P_n and P_n' at x by the three-term recurrence.
inline std::pair<Real, Real> legendre(unsigned n, const Real& x, unsigned bits) {
  Real p0 = make_real(1, bits), p1 = make_real(x, bits);
  for (unsigned k = 2; k <= n; ++k) {
    Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  Real dp = n * (x * p1 - p0) / (x * x - 1);
  return {p1, dp};
}

}  // namespace detail

/// n-point Gauss-Legendre rule with `bits` of precision, cached.
inline const GaussRule& gauss_legendre(unsigned n, unsigned bits) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, bits);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const unsigned work = bits + 32;
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Real p = pi(work);
  const Real eps = boost::multiprecision::ldexp(make_real(1, work), -static_cast<int>(bits + 8));
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's estimate of the i-th largest root, then Newton
    Real x = make_real(boost::multiprecision::cos(p * (4 * i + 3) / (4 * n + 2)), work);
    Real dp;
    for (int it = 0; it < 100; ++it) {
      auto [pn, d] = detail::legendre(n, x, work);
      Real step = pn / d;
      x -= step;
      dp = d;
      if (boost::multiprecision::abs(step) < eps) break;
    }
    dp = detail::legendre(n, x, work).second;
    Real w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = make_real(x, bits);
    rule.nodes[i] = make_real(-x, bits);
    rule.weights[n - 1 - i] = make_real(w, bits);
    rule.weights[i] = make_real(w, bits);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = make_real(0, bits);
  return cache.emplace(key, std::move(rule)).first->second;
}

struct QuadratureOptions {
  unsigned order = 24;
  /// Accept a panel when the two-level estimates agree to this absolute
  /// tolerance scaled by the panel's share of the interval.
  Real abs_tol;
  std::size_t max_panels = 20000;
};

struct QuadratureResult {
  ComplexHP value;
  Real error_estimate;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

/// Integrates f over [a, b] starting from the given breakpoints (which must
/// include a and b, ascending). f maps a Real to a ComplexHP.
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::vector<Real> breaks, const QuadratureOptions& opt,
                                    unsigned bits) {
  const GaussRule& rule = gauss_legendre(opt.order, bits);
  QuadratureResult res;
  res.value = ComplexHP(0, 0, bits);
  res.error_estimate = make_real(0, bits);

  auto apply = [&](const Real& lo, const Real& hi) {
    const Real half = (hi - lo) / 2, mid = (hi + lo) / 2;
    ComplexHP acc(0, 0, bits);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      acc += f(make_real(mid + half * rule.nodes[k], bits)) * rule.weights[k];
    res.evaluations += rule.nodes.size();
    return acc * make_real(half, bits);
  };

  const Real total_len = breaks.back() - breaks.front();
  struct Panel {
    Real lo, hi;
    ComplexHP coarse;
  };
  std::vector<Panel> stack;
  for (std::size_t k = breaks.size() - 1; k-- > 0;)
    stack.push_back({breaks[k], breaks[k + 1], apply(breaks[k], breaks[k + 1])});

  // Panels are processed left to right; accepted contributions are summed in
  // that fixed order so results are reproducible.
  while (!stack.empty()) {
    Panel p = std::move(stack.back());
    stack.pop_back();
    const Real mid = (p.lo + p.hi) / 2;
    ComplexHP left = apply(p.lo, mid);
    ComplexHP right = apply(mid, p.hi);
    ComplexHP fine = left + right;
    const Real diff = abs(fine - p.coarse);
    const Real share = opt.abs_tol * (p.hi - p.lo) / total_len;
    if (diff <= share || res.panels + stack.size() >= opt.max_panels) {
      if (diff > share) throw ConvergenceError("integrate_adaptive: panel budget exhausted");
      res.value += fine;
      res.error_estimate += diff;
      ++res.panels;
      continue;
    }
    stack.push_back({mid, p.hi, std::move(right)});
    stack.push_back({p.lo, mid, std::move(left)});
  }
  return res;
}

}  // namespace crosspoly
