#pragma once

// Arbitrary-precision plumbing: exact integer/rational aliases, MPFR-backed
// reals with explicit bit precision, and a complex pair built on top of them.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace crosspoly {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kMinPrecisionBits = 64;
inline constexpr unsigned kDefaultPrecisionBits = 128;

// ---------------------------------------------------------------------------
// Error taxonomy. Everything the library throws derives from Error.
// ---------------------------------------------------------------------------
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct SizeError : Error {
  using Error::Error;
};
struct PoleError : Error {
  using Error::Error;
};
struct ConsistencyError : Error {
  using Error::Error;
};
struct ConvergenceError : Error {
  using Error::Error;
};
struct GridTooCoarseError : Error {
  using Error::Error;
};

// Boost sizes mpfr_float in decimal digits; everything here talks in bits.
inline unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

inline unsigned bits_of(const Real& x) {
  return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

/// A real with exactly `bits` of mantissa, initialised from any value Boost
/// can convert (integers, rationals, strings, other reals).
template <class V>
Real make_real(const V& value, unsigned bits) {
  // Expression templates must be evaluated first; Boost's generic mpq -> mpfr
  // conversion of an unevaluated expression is orders of magnitude slower.
  if constexpr (boost::multiprecision::is_number_expression<V>::value)
    return make_real(typename V::result_type(value), bits);
  Real r(0, digits10_for_bits(bits));
  mpfr_set_prec(r.backend().data(), bits);
  r = Real(value, digits10_for_bits(bits));
  mpfr_prec_round(r.backend().data(), bits, MPFR_RNDN);
  return r;
}

inline Real make_real(const Rational& q, unsigned bits) {
  Real r(0, digits10_for_bits(bits));
  mpfr_set_prec(r.backend().data(), bits);
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

inline Real make_real(const Integer& z, unsigned bits) {
  Real r(0, digits10_for_bits(bits));
  mpfr_set_prec(r.backend().data(), bits);
  mpfr_set_z(r.backend().data(), z.backend().data(), MPFR_RNDN);
  return r;
}

inline Real pi(unsigned bits) {
  Real r = make_real(0, bits);
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

inline Real ln2(unsigned bits) {
  Real r = make_real(0, bits);
  mpfr_const_log2(r.backend().data(), MPFR_RNDN);
  return r;
}

/// Exact conversion of a finite MPFR value to the dyadic rational it encodes.
inline Rational to_rational(const Real& x) {
  mpq_t q;
  mpq_init(q);
  mpfr_exp_t e = 0;
  Integer m;
  e = mpfr_get_z_2exp(m.backend().data(), x.backend().data());
  mpq_set_z(q, m.backend().data());
  if (e >= 0)
    mpq_mul_2exp(q, q, static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(q, q, static_cast<mp_bitcnt_t>(-e));
  Rational out(q);
  mpq_clear(q);
  return out;
}

/// Installs a thread default precision for temporaries Boost creates
/// implicitly (literals, constants); restores the previous one on exit.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits) : saved_(Real::default_precision()) {
    Real::default_precision(digits10_for_bits(bits));
  }
  ~ScopedPrecision() { Real::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

// ---------------------------------------------------------------------------
// ComplexHP
// ---------------------------------------------------------------------------

/// Complex number carried as two MPFR reals. Arithmetic on two values runs at
/// the larger of the two precisions.
struct ComplexHP {
  Real re;
  Real im;
  unsigned precision = kDefaultPrecisionBits;

  ComplexHP() : ComplexHP(0, 0, kDefaultPrecisionBits) {}

  ComplexHP(const Real& r, const Real& i)
      : precision(std::max({bits_of(r), bits_of(i), kMinPrecisionBits})) {
    re = make_real(r, precision);
    im = make_real(i, precision);
  }

  ComplexHP(const Real& r, const Real& i, unsigned bits)
      : precision(std::max(bits, kMinPrecisionBits)) {
    re = make_real(r, precision);
    im = make_real(i, precision);
  }

  template <class A, class B>
    requires(!std::is_same_v<std::decay_t<A>, Real> ||
             !std::is_same_v<std::decay_t<B>, Real>)
  ComplexHP(const A& r, const B& i, unsigned bits)
      : precision(std::max(bits, kMinPrecisionBits)) {
    re = make_real(r, precision);
    im = make_real(i, precision);
  }

  static ComplexHP real(const Real& r) { return {r, make_real(0, bits_of(r))}; }

  ComplexHP with_precision(unsigned bits) const { return {re, im, bits}; }

  ComplexHP& operator+=(const ComplexHP& o) { return *this = *this + o; }
  ComplexHP& operator-=(const ComplexHP& o) { return *this = *this - o; }
  ComplexHP& operator*=(const ComplexHP& o) { return *this = *this * o; }
  ComplexHP& operator/=(const ComplexHP& o) { return *this = *this / o; }

  friend ComplexHP operator+(const ComplexHP& a, const ComplexHP& b) {
    return {a.re + b.re, a.im + b.im, std::max(a.precision, b.precision)};
  }
  friend ComplexHP operator-(const ComplexHP& a, const ComplexHP& b) {
    return {a.re - b.re, a.im - b.im, std::max(a.precision, b.precision)};
  }
  friend ComplexHP operator-(const ComplexHP& a) { return {-a.re, -a.im, a.precision}; }
  friend ComplexHP operator*(const ComplexHP& a, const ComplexHP& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re,
            std::max(a.precision, b.precision)};
  }
  friend ComplexHP operator/(const ComplexHP& a, const ComplexHP& b) {
    const unsigned bits = std::max(a.precision, b.precision);
    // Smith's algorithm keeps the intermediate magnitudes in range.
    if (abs(b.re) >= abs(b.im)) {
      Real r = b.im / b.re;
      Real den = b.re + b.im * r;
      return {(a.re + a.im * r) / den, (a.im - a.re * r) / den, bits};
    }
    Real r = b.re / b.im;
    Real den = b.re * r + b.im;
    return {(a.re * r + a.im) / den, (a.im * r - a.re) / den, bits};
  }
  friend ComplexHP operator*(const ComplexHP& a, const Real& s) {
    return {a.re * s, a.im * s, std::max(a.precision, bits_of(s))};
  }
  friend ComplexHP operator*(const Real& s, const ComplexHP& a) { return a * s; }
  friend ComplexHP operator/(const ComplexHP& a, const Real& s) {
    return {a.re / s, a.im / s, std::max(a.precision, bits_of(s))};
  }
};

inline ComplexHP conj(const ComplexHP& z) { return {z.re, -z.im, z.precision}; }

inline Real abs(const ComplexHP& z) { return boost::multiprecision::hypot(z.re, z.im); }

/// Principal argument in (-pi, pi].
inline Real arg(const ComplexHP& z) {
  Real out = make_real(0, z.precision);
  mpfr_atan2(out.backend().data(), z.im.backend().data(), z.re.backend().data(), MPFR_RNDN);
  return out;
}

inline ComplexHP exp(const ComplexHP& z) {
  Real m = boost::multiprecision::exp(z.re);
  return {m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im), z.precision};
}

/// Principal logarithm; imaginary part in (-pi, pi].
inline ComplexHP log(const ComplexHP& z) {
  if (z.re == 0 && z.im == 0) throw DomainError("log of zero");
  return {boost::multiprecision::log(abs(z)), arg(z), z.precision};
}

inline ComplexHP sqrt(const ComplexHP& z) {
  if (z.re == 0 && z.im == 0) return z;
  ComplexHP l = log(z);
  return exp(ComplexHP(l.re / 2, l.im / 2, z.precision));
}

inline bool is_finite(const ComplexHP& z) {
  return mpfr_number_p(z.re.backend().data()) && mpfr_number_p(z.im.backend().data());
}

// ---------------------------------------------------------------------------
// Decimal formatting
// ---------------------------------------------------------------------------

/// Significant decimal digits printed for a given working precision:
/// floor(bits * log10(2)) - 4, never fewer than 6.
inline int print_digits_for_bits(unsigned bits) {
  int d = static_cast<int>(std::floor(bits * 0.30102999566398120)) - 4;
  return std::max(d, 6);
}

inline std::string trim_decimal(std::string s) {
  auto e = s.find_first_of("eE");
  std::string exponent;
  if (e != std::string::npos) {
    exponent = s.substr(e);
    s = s.substr(0, e);
  }
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s + exponent;
}

/// Round-half-even decimal text with `digits` significant digits, trailing
/// zeros removed. Locale independent (MPFR always prints '.').
inline std::string to_decimal(const Real& x, int digits) {
  if (x == 0) return "0";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits),
                           x.backend().data(), MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  bool neg = false;
  if (!mant.empty() && mant[0] == '-') {
    neg = true;
    mant.erase(0, 1);
  }
  // value = 0.mant * 10^exp10
  std::string out;
  const long e = static_cast<long>(exp10);
  if (e > static_cast<long>(mant.size()) || e < -5) {
    out = mant.substr(0, 1) + "." + mant.substr(1) + "e" + std::to_string(e - 1);
  } else if (e <= 0) {
    out = "0." + std::string(static_cast<size_t>(-e), '0') + mant;
  } else {
    out = mant.substr(0, static_cast<size_t>(e)) + "." + mant.substr(static_cast<size_t>(e));
  }
  out = trim_decimal(out);
  return (neg && out != "0") ? "-" + out : out;
}

/// Fixed-point text with exactly `places` decimals, round-half-even.
inline std::string to_fixed(const Real& x, int places) {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*RNf", places, x.backend().data());
  std::string s(raw);
  mpfr_free_str(raw);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

}  // namespace crosspoly
