#pragma once

// Complex special functions at runtime precision: Gamma via a shifted
// Stirling series, principal powers, sin(pi x) with exact argument reduction,
// and a phase unwrapper for argument-variation counting.

#include "crosspoly/hp.hpp"

#include <cmath>
#include <mutex>
#include <optional>
#include <vector>

namespace crosspoly {

namespace detail {

/// B_0, B_2, B_4, ... as exact rationals; grown on demand and shared.
inline const std::vector<Rational>& even_bernoulli(std::size_t count) {
  static std::mutex mu;
  static std::vector<Rational> all{Rational(1)};  // B_0, B_1, B_2, ... (B_1 = -1/2)
  static std::vector<Rational> even{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (even.size() < count) {
    // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
    const std::size_t m = all.size();
    Rational acc = 0;
    Integer binom = 1;  // C(m+1, 0)
    for (std::size_t k = 0; k < m; ++k) {
      acc += Rational(binom) * all[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    all.push_back(-acc / Rational(m + 1));
    if (m % 2 == 0) even.push_back(all.back());
  }
  return even;
}

// Extra bits needed so that exp(log Gamma) keeps full relative accuracy when
// log Gamma itself is large.
inline unsigned magnitude_guard(const ComplexHP& z) {
  const double r = std::max(1.0, abs(z).convert_to<double>());
  return 32 + static_cast<unsigned>(std::ceil(std::log2(r * std::log(r + 2.0) + 2.0)));
}

inline bool is_nonpositive_integer(const ComplexHP& z) {
  return z.im == 0 && z.re <= 0 && mpfr_integer_p(z.re.backend().data());
}

}  // namespace detail

/// Analytic log Gamma on Re z > 0 (continuous in z, not reduced mod 2 pi i);
/// for Re z <= 0 away from poles it is one branch of log Gamma.
inline ComplexHP log_gamma(const ComplexHP& z) {
  if (!is_finite(z)) throw DomainError("log_gamma of non-finite argument");
  if (detail::is_nonpositive_integer(z)) throw PoleError("Gamma has a pole at a nonpositive integer");
  const unsigned target = z.precision;
  const unsigned work = target + detail::magnitude_guard(z);
  ComplexHP w = z.with_precision(work);

  // Stirling's remainder after its smallest term is about exp(-2 pi |w|), so
  // |w| >= (work ln 2 + 20) / (2 pi) leaves it below 2^-work.
  const double r = (work * 0.6931471805599453 + 20.0) / (2.0 * 3.141592653589793);
  const Real rr = make_real(r, 64);
  ComplexHP shift_log(0, 0, work);
  while (w.re < 1 || abs(w) < rr) {
    shift_log += log(w);
    w += ComplexHP(1, 0, work);
  }

  const Real half = make_real(Rational(1, 2), work);
  ComplexHP lw = log(w);
  ComplexHP sum = (w - ComplexHP(half, make_real(0, work), work)) * lw - w;
  sum.re += boost::multiprecision::log(2 * pi(work)) / 2;

  const Real eps = boost::multiprecision::ldexp(make_real(1, work), -static_cast<int>(work));
  const ComplexHP inv = ComplexHP(1, 0, work) / w;
  const ComplexHP inv2 = inv * inv;
  ComplexHP power = inv;  // w^-(2n-1)
  std::size_t n = 1;
  const std::size_t cap = static_cast<std::size_t>(4 * r) + 8;
  for (;; ++n) {
    const auto& bern = detail::even_bernoulli(n + 1);
    const Real coef = make_real(bern[n] / Rational((2 * n) * (2 * n - 1)), work);
    const ComplexHP term = power * coef;
    sum += term;
    if (abs(term) < eps * abs(sum) || n >= cap) break;
    power = power * inv2;
  }
  if (n >= cap) throw ConvergenceError("log_gamma: Stirling series did not settle");
  return (sum - shift_log).with_precision(target);
}

/// Gamma(z) with relative error below 2^(16 - z.precision).
inline ComplexHP gamma(const ComplexHP& z) {
  if (detail::is_nonpositive_integer(z)) throw PoleError("Gamma has a pole at a nonpositive integer");
  const unsigned work = z.precision + detail::magnitude_guard(z);
  return exp(log_gamma(z.with_precision(work))).with_precision(z.precision);
}

/// exp(expo * Log base) with the principal logarithm.
inline ComplexHP pow_principal(const ComplexHP& base, const ComplexHP& expo) {
  if (base.re == 0 && base.im == 0) throw DomainError("pow_principal: zero base");
  const unsigned bits = std::max(base.precision, expo.precision);
  if (expo.re == 0 && expo.im == 0) return ComplexHP(1, 0, bits);
  const unsigned work = bits + 16;
  return exp(expo.with_precision(work) * log(base.with_precision(work))).with_precision(bits);
}

/// sin(pi x). The real part of x is reduced exactly to [-1/2, 1/2] before
/// multiplying by pi, so integers give exact zeros and half-integers give
/// exactly real results.
inline ComplexHP sin_pi(const ComplexHP& x) {
  const unsigned bits = x.precision;
  const unsigned work = bits + 16;
  Real r = make_real(0, work);
  mpfr_remainder(r.backend().data(), x.re.backend().data(), make_real(2, work).backend().data(),
                 MPFR_RNDN);  // exact, r in [-1, 1]
  int cos_sign = 1;
  if (r > make_real(Rational(1, 2), work)) {
    r = make_real(1, work) - r;
    cos_sign = -1;
  } else if (r < make_real(Rational(-1, 2), work)) {
    r = make_real(-1, work) - r;
    cos_sign = -1;
  }
  Real s, c;
  if (boost::multiprecision::abs(r) == make_real(Rational(1, 2), work)) {
    s = make_real(r > 0 ? 1 : -1, work);
    c = make_real(0, work);
  } else {
    const Real a = pi(work) * r;
    s = boost::multiprecision::sin(a);
    c = boost::multiprecision::cos(a) * cos_sign;
  }
  if (x.im == 0) return ComplexHP(s, make_real(0, work), bits);
  const Real b = pi(work) * make_real(x.im, work);
  return ComplexHP(s * boost::multiprecision::cosh(b), c * boost::multiprecision::sinh(b), bits);
}

// ---------------------------------------------------------------------------
// Phase unwrapping
// ---------------------------------------------------------------------------

/// Continuous argument along a sequence of nonzero complex values. Each update
/// adds the principal argument of new/old, which must stay below `max_jump`
/// in modulus (pi by default); otherwise GridTooCoarseError is thrown and the
/// tracker is left unchanged so the caller can retry with a finer step.
class ArgTracker {
 public:
  explicit ArgTracker(unsigned bits = kDefaultPrecisionBits)
      : bits_(bits), accumulated_(make_real(0, bits)), max_jump_(pi(bits)) {}

  ArgTracker(unsigned bits, const Real& max_jump, bool seed_principal = false)
      : bits_(bits),
        accumulated_(make_real(0, bits)),
        max_jump_(make_real(max_jump, bits)),
        seed_principal_(seed_principal) {}

  /// Starts the accumulated value at the principal argument of the first
  /// update instead of zero.
  static ArgTracker seeded(unsigned bits = kDefaultPrecisionBits) { return {bits, pi(bits), true}; }

  const Real& update(const ComplexHP& v) { return update(v, max_jump_); }

  /// Same, with a one-off limit on this step (never above pi).
  const Real& update(const ComplexHP& v, const Real& limit) {
    if (v.re == 0 && v.im == 0) throw DomainError("ArgTracker: zero value");
    if (!last_) {
      if (seed_principal_) accumulated_ = make_real(arg(v), bits_);
      last_ = v;
      return accumulated_;
    }
    const Real jump = step_to(v);
    if (boost::multiprecision::abs(jump) >= std::min(limit, pi(bits_)))
      throw GridTooCoarseError("ArgTracker: phase jump reached the limit; refine the grid");
    accumulated_ = make_real(accumulated_ + jump, bits_);
    last_ = v;
    return accumulated_;
  }

  /// Principal argument of v / last, without updating.
  Real step_to(const ComplexHP& v) const {
    if (!last_) return make_real(0, bits_);
    return arg(v * conj(*last_));
  }

  const Real& value() const { return accumulated_; }
  bool started() const { return last_.has_value(); }
  const std::optional<ComplexHP>& last() const { return last_; }

 private:
  unsigned bits_;
  Real accumulated_;
  Real max_jump_;
  bool seed_principal_ = false;
  std::optional<ComplexHP> last_;
};

}  // namespace crosspoly
