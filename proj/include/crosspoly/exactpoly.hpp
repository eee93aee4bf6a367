#pragma once

// Exact construction of the cross-polytope Ehrhart polynomial
//
//     L_d(x) = sum_{j=0}^{d} C(d, j) * C(d - j + x, d)
//
// in rational arithmetic, its evaluation, and two independent brute-force
// oracles (lattice-point enumeration and generating-series coefficients).

#include "crosspoly/hp.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace crosspoly {

/// Polynomial with exact rational coefficients, `coeffs[k]` multiplying x^k.
/// `dim` is the dimension d of the cross-polytope it counts.
struct ExactPolynomial {
  unsigned dim = 0;
  std::vector<Rational> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

namespace detail {

// Dense integer polynomial helpers; index = degree.
using IntPoly = std::vector<Integer>;

inline IntPoly mul_linear(const IntPoly& p, const Integer& c) {
  // p(x) * (x + c)
  IntPoly out(p.size() + 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k + 1] += p[k];
    out[k] += c * p[k];
  }
  return out;
}

inline IntPoly div_linear_exact(const IntPoly& p, const Integer& c) {
  // p(x) / (x + c), which must divide exactly.
  const std::size_t n = p.size() - 1;
  IntPoly q(n);
  q[n - 1] = p[n];
  for (std::size_t k = n - 1; k >= 1; --k) q[k - 1] = p[k] - c * q[k];
  if (p[0] - c * q[0] != 0) throw ConsistencyError("inexact linear division");
  return q;
}

inline Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer b = 1;
  for (unsigned i = 1; i <= k; ++i) {
    b *= n - k + i;
    b /= i;
  }
  return b;
}

}  // namespace detail

/// d! * L_d(x) as an integer polynomial. Each C(d-j+x, d) is the product of
/// (x+m) for m = 1-j .. d-j over d!; consecutive products differ by one
/// linear factor, so the sum costs O(d^2) big-integer operations.
inline detail::IntPoly ehrhart_numerator(unsigned d) {
  using detail::IntPoly;
  IntPoly prod{Integer(1)};
  for (unsigned m = 1; m <= d; ++m) prod = detail::mul_linear(prod, Integer(m));
  IntPoly sum(d + 1);
  Integer binom = 1;  // C(d, j)
  for (unsigned j = 0; j <= d; ++j) {
    for (std::size_t k = 0; k < prod.size(); ++k) sum[k] += binom * prod[k];
    if (j == d) break;
    // advance from m in [1-j, d-j] to [-j, d-j-1]
    prod = detail::div_linear_exact(prod, Integer(d - j));
    prod = detail::mul_linear(prod, -Integer(j));
    binom = binom * (d - j) / (j + 1);
  }
  return sum;
}

inline ExactPolynomial build_ehrhart(unsigned d) {
  const auto num = ehrhart_numerator(d);
  const Integer den = detail::factorial(d);
  ExactPolynomial p;
  p.dim = d;
  p.coeffs.reserve(num.size());
  for (const auto& c : num) p.coeffs.emplace_back(c, den);
  return p;
}

/// Exact value at a rational point.
inline Rational eval_rational(const ExactPolynomial& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Horner evaluation at a complex point. The result carries z.precision bits
/// and relative error below 2^(8 - z.precision) whenever the value is not
/// exactly zero: coefficients are rounded once per working precision, and the
/// working precision is raised until the Horner error bound sum |c_k||z|^k *
/// (2d+4) * 2^-w sits below the target relative to the computed value.
inline ComplexHP eval_exact(const ExactPolynomial& p, const ComplexHP& z) {
  const unsigned target = z.precision;
  const unsigned n = static_cast<unsigned>(p.degree());
  const unsigned log_terms = static_cast<unsigned>(std::ceil(std::log2(2.0 * n + 4.0)));
  unsigned work = target + 16 + log_terms;
  const unsigned cap = target + 64 + 48 * (n + 1);

  for (int attempt = 0; attempt < 8; ++attempt) {
    const ComplexHP zw = z.with_precision(work);
    ComplexHP acc(0, 0, work);
    Real bound = make_real(0, 64);
    const Real zabs = make_real(abs(z), 64);
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
      const Real c = make_real(*it, work);
      acc = acc * zw + ComplexHP(c, make_real(0, work), work);
      bound = bound * zabs + make_real(boost::multiprecision::abs(c), 64);
    }
    const Real value_abs = make_real(abs(acc), 64);
    if (value_abs == 0 || bound == 0) return acc.with_precision(target);
    // bits of cancellation = log2(bound / |value|)
    const double lost = boost::multiprecision::log2(bound / value_abs).convert_to<double>();
    const unsigned needed =
        target + log_terms + static_cast<unsigned>(std::max(0.0, std::ceil(lost))) + 8;
    if (needed <= work) return acc.with_precision(target);
    if (work >= cap) return acc.with_precision(target);
    work = std::min(cap, needed + 16);
  }
  throw ConvergenceError("eval_exact: precision escalation did not settle");
}

/// Brute-force count of integer points z in Z^d with sum |z_i| <= m.
inline std::uint64_t lattice_count_oracle(unsigned d, unsigned m) {
  constexpr unsigned kCap = 8;
  if (d > kCap || m > kCap)
    throw SizeError("lattice_count_oracle: d and m must be <= 8 (got d=" + std::to_string(d) +
                    ", m=" + std::to_string(m) + ")");
  // Enumerates every admissible vector coordinate by coordinate.
  auto count = [](auto&& self, unsigned dims, int budget) -> std::uint64_t {
    if (dims == 0) return 1;
    std::uint64_t total = 0;
    for (int z = -budget; z <= budget; ++z) total += self(self, dims - 1, budget - std::abs(z));
    return total;
  };
  return count(count, d, static_cast<int>(m));
}

/// First M+1 Taylor coefficients of (1+t)^d / (1-t)^(d+1) at t = 0, by
/// convolving the binomial row of (1+t)^d with sum_m C(m+d, d) t^m.
inline std::vector<Integer> gen_series_coeffs(unsigned d, unsigned M) {
  std::vector<Integer> numer(d + 1);
  for (unsigned k = 0; k <= d; ++k) numer[k] = detail::binomial(d, k);
  std::vector<Integer> denom_inv(M + 1);
  denom_inv[0] = 1;
  for (unsigned m = 1; m <= M; ++m) denom_inv[m] = denom_inv[m - 1] * (m + d) / m;
  std::vector<Integer> out(M + 1);
  for (unsigned m = 0; m <= M; ++m)
    for (unsigned k = 0; k <= std::min(m, d); ++k) out[m] += numer[k] * denom_inv[m - k];
  return out;
}

// ---------------------------------------------------------------------------
// JSON: {"dim": d, "coeffs": ["num/den", ...]} with ascending degree.
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const ExactPolynomial& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(c.str());
  return {{"dim", p.dim}, {"coeffs", coeffs}};
}

inline ExactPolynomial exact_polynomial_from_json(const nlohmann::json& j) {
  ExactPolynomial p;
  if (!j.contains("dim") || !j.contains("coeffs") || !j.at("coeffs").is_array())
    throw DomainError("ExactPolynomial JSON needs \"dim\" and \"coeffs\"");
  p.dim = j.at("dim").get<unsigned>();
  for (const auto& c : j.at("coeffs")) {
    const auto s = c.get<std::string>();
    if (s.find_first_of(".eE") != std::string::npos)
      throw DomainError("coefficient is not a rational literal: " + s);
    p.coeffs.emplace_back(s);
  }
  if (p.coeffs.size() != p.dim + 1) throw DomainError("coefficient count must be dim + 1");
  return p;
}

}  // namespace crosspoly
