#pragma once

// Steepest-descent asymptotics of L_d(-x) for x = sigma + i tau.
//
// Away from tau = 0 the Mellin piece F(d, x) is governed by the saddle
// alpha = -i s, s = tau / (d + sqrt(d^2 - tau^2)), of the phase of
// (1+t)^d / (1-t)^(d+1) * t^(-x-1). Along the cubic descent path the integral
// reduces to
//
//     I = int_{-1/3}^{inf} exp(-lambda F(T)) U'(T) dT,
//
// and F(d, x) = (3 / (4 pi)) (K2 / K3) E(alpha) alpha^x I. Near tau = 0 the
// Watson form (sin(pi x) / pi) (2d+1)^(-x) Gamma(x) is used instead. Then
// L_d(-x) ~ F(d, x) + (-1)^d conj F(d, 1 - conj x).

#include "crosspoly/quadrature.hpp"
#include "crosspoly/specfun.hpp"

#include <cmath>
#include <string>

namespace crosspoly {

struct SaddleData {
  unsigned d = 0;
  Real tau;
  /// alpha = -i s, the saddle inside the unit disk.
  ComplexHP alpha;
  Real s;
  Real K2, K3, K4;
  /// Scale of the quadrature kernel, (9/8) tau K2^3 / K3^2.
  Real lambda;
  unsigned precision = kDefaultPrecisionBits;
};

enum class Regime { NearZero, Saddle };

inline const char* regime_name(Regime r) { return r == Regime::NearZero ? "NEAR_ZERO" : "SADDLE"; }

struct AsymptoticValue {
  ComplexHP value;
  Regime regime = Regime::Saddle;
  /// Heuristic relative-error scale: tau^(-1/28) or 1 / (2d + 1).
  Real error_indicator;
  /// Populated in the saddle regime.
  std::optional<SaddleData> saddle;
  std::optional<ComplexHP> integral;
};

struct AsymptoticOptions {
  unsigned precision = kDefaultPrecisionBits;
  double epsilon = 0.05;
  unsigned quadrature_order = 24;
  /// Multiplies the tail cutoff lambda F > bits ln 2 + 64.
  double cutoff_scale = 1.0;
  double rel_tol = 1e-25;
};

// ---------------------------------------------------------------------------
// Saddle data
// ---------------------------------------------------------------------------

inline Real tau_upper_limit(unsigned d) { return make_real(d - std::cbrt(std::sqrt(double(d))), 64); }

namespace detail {

/// C_m: m-th Taylor coefficient of the phase derivative structure at alpha.
inline ComplexHP c_coefficient(unsigned d, const Real& tau, const ComplexHP& alpha, unsigned m,
                               unsigned bits) {
  const ComplexHP one(1, 0, bits);
  ComplexHP p_plus = one, p_minus = one, p_alpha = one;
  for (unsigned k = 0; k < m; ++k) {
    p_plus *= one + alpha;
    p_minus *= one - alpha;
    p_alpha *= alpha;
  }
  const Real dd = make_real(d, bits);
  const int sgn = (m % 2 == 1) ? 1 : -1;  // (-1)^(m+1)
  ComplexHP out = ComplexHP(dd * sgn, make_real(0, bits), bits) / p_plus +
                  ComplexHP(dd, make_real(0, bits), bits) / p_minus +
                  ComplexHP(make_real(0, bits), tau * sgn, bits) / p_alpha;
  return out;
}

/// K_m = -C_m |alpha|^m / (tau (-i)^(m-1)); real by construction.
inline Real k_coefficient(unsigned d, const Real& tau, const ComplexHP& alpha, const Real& s,
                          unsigned m, unsigned bits) {
  ComplexHP c = c_coefficient(d, tau, alpha, m, bits);
  ComplexHP unit(1, 0, bits);  // (-i)^(m-1)
  for (unsigned k = 1; k < m; ++k) unit *= ComplexHP(0, -1, bits);
  Real sm = make_real(1, bits);
  for (unsigned k = 0; k < m; ++k) sm *= s;
  ComplexHP k = -(c * sm) / (unit * tau);
  return k.re;
}

}  // namespace detail

/// Saddle data for 0 < tau <= d - d^(1/6). `allow_boundary` admits tau up to
/// d (the coalescence point) for probing.
inline SaddleData saddle_point(unsigned d, const Real& tau, unsigned bits = kDefaultPrecisionBits,
                               bool allow_boundary = false) {
  if (d < 1) throw RangeError("saddle_point needs d >= 1");
  const Real limit = allow_boundary ? make_real(d, 64) : tau_upper_limit(d);
  if (!(tau > 0) || tau > limit)
    throw RangeError("saddle_point: tau=" + to_decimal(tau, 12) + " outside (0, " +
                     to_decimal(limit, 12) + "]");
  const unsigned work = bits + 32;
  SaddleData sd;
  sd.d = d;
  sd.precision = bits;
  sd.tau = make_real(tau, work);
  const Real dd = make_real(d, work);
  Real root = boost::multiprecision::sqrt(make_real(dd * dd - sd.tau * sd.tau, work));
  sd.s = make_real(sd.tau / (dd + root), work);
  sd.alpha = ComplexHP(make_real(0, work), -sd.s, work);
  sd.K2 = detail::k_coefficient(d, sd.tau, sd.alpha, sd.s, 2, work);
  sd.K3 = detail::k_coefficient(d, sd.tau, sd.alpha, sd.s, 3, work);
  sd.K4 = detail::k_coefficient(d, sd.tau, sd.alpha, sd.s, 4, work);
  sd.lambda = make_real(Real(9) / 8 * sd.tau * sd.K2 * sd.K2 * sd.K2 / (sd.K3 * sd.K3), work);
  return sd;
}

/// |2 d alpha + i tau (1 - alpha^2)|, zero at an exact saddle.
inline Real saddle_residual(const SaddleData& sd) {
  const unsigned bits = sd.alpha.precision;
  ComplexHP one(1, 0, bits);
  ComplexHP v = sd.alpha * make_real(2 * sd.d, bits) +
                ComplexHP(make_real(0, bits), sd.tau, bits) * (one - sd.alpha * sd.alpha);
  return abs(v);
}

// ---------------------------------------------------------------------------
// Profile functions
// ---------------------------------------------------------------------------

/// F(T) = 2 T^2 (2T+1)^2 sqrt(T+1) / (3T+1)^(3/2) on T > -1/3.
inline Real F_of_T(const Real& T) {
  const unsigned bits = bits_of(T);
  const Real third = make_real(Rational(-1, 3), bits);
  if (T <= third) throw DomainError("F_of_T needs T > -1/3");
  const Real a = 3 * T + 1;
  const Real b = 2 * T + 1;
  return make_real(2 * T * T * b * b * boost::multiprecision::sqrt(T + 1) /
                       (a * boost::multiprecision::sqrt(a)),
                   bits);
}

/// U(T) = T (sqrt((T+1)/(3T+1)) + i) and U'(T).
inline std::pair<ComplexHP, ComplexHP> U_and_derivative(const Real& T) {
  const unsigned bits = std::max(bits_of(T), kMinPrecisionBits);
  if (T <= make_real(Rational(-1, 3), bits)) throw DomainError("U_and_derivative needs T > -1/3");
  const Real a = 3 * T + 1;
  const Real r = boost::multiprecision::sqrt((T + 1) / a);
  ComplexHP u(make_real(T * r, bits), make_real(T, bits), bits);
  const Real re = r * (1 + T * (1 / (2 * (T + 1)) - 3 / (2 * a)));
  ComplexHP du(make_real(re, bits), make_real(1, bits), bits);
  return {u, du};
}

// ---------------------------------------------------------------------------
// The integral I
// ---------------------------------------------------------------------------

namespace detail {

// Smallest point of a monotone increasing g on [lo, inf) with g > level;
// doubling then bisection in double precision is plenty for a cutoff.
template <class G>
double find_cutoff(G&& g, double lo, double step, double level) {
  double hi = lo + step;
  int guard = 0;
  while (g(hi) <= level) {
    lo = hi;
    hi = lo + 2 * (hi - lo + step);
    if (++guard > 200) throw ConvergenceError("integral_I: tail cutoff not found");
  }
  for (int k = 0; k < 60; ++k) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > level ? hi : lo) = mid;
  }
  return hi;
}

inline double F_double(double T) {
  const double a = 3 * T + 1, b = 2 * T + 1;
  return 2 * T * T * b * b * std::sqrt(T + 1) / (a * std::sqrt(a));
}

// Breakpoints clustered around 0 at the Gaussian width, then geometric.
inline std::vector<Real> seed_breaks(double width, double end, unsigned bits) {
  std::vector<Real> out{make_real(0, bits)};
  double x = width;
  while (x < end) {
    out.push_back(make_real(x, bits));
    x *= 2;
  }
  out.push_back(make_real(end, bits));
  return out;
}

}  // namespace detail

struct IntegralOptions {
  unsigned quadrature_order = 24;
  double cutoff_scale = 1.0;
  double rel_tol = 1e-25;
};

/// I = int exp(-lambda F(T)) U'(T) dT over (-1/3, inf), truncated on each
/// side where lambda F(T) exceeds (bits ln 2 + 64) * cutoff_scale. The left
/// piece uses w = (3T+1)^(-1/2), T = (w^-2 - 1)/3, dT = -(2/3) w^-3 dw, which
/// turns the endpoint at T = -1/3 into an infinite but rapidly decaying tail.
inline ComplexHP integral_I(const SaddleData& sd, const IntegralOptions& opt = {}) {
  const unsigned bits = sd.precision + 16;
  if (!(sd.lambda > 0)) throw DomainError("integral_I needs lambda > 0");
  const double lam = sd.lambda.convert_to<double>();
  const double level = (sd.precision * 0.6931471805599453 + 64.0) * opt.cutoff_scale;
  const double width = 1.0 / std::sqrt(4.0 * lam);

  const double t_hi = detail::find_cutoff([&](double T) { return lam * detail::F_double(T); }, 0.0,
                                          width, level);
  const double w_hi = detail::find_cutoff(
      [&](double w) { return lam * detail::F_double((1.0 / (w * w) - 1.0) / 3.0); }, 1.0, 1.5 * width,
      level);

  const Real lambda = make_real(sd.lambda, bits);
  auto right = [&](const Real& T) {
    auto [u, du] = U_and_derivative(T);
    return du * boost::multiprecision::exp(-lambda * F_of_T(T));
  };
  const Real two_thirds = make_real(Rational(2, 3), bits);
  auto left = [&](const Real& v) {
    // v = w - 1 >= 0
    const Real w = v + 1;
    const Real T = make_real((1 / (w * w) - 1) / 3, bits);
    auto [u, du] = U_and_derivative(T);
    return du * make_real(boost::multiprecision::exp(-lambda * F_of_T(T)) * two_thirds / (w * w * w), bits);
  };

  // The integral is about (1 + i) sqrt(pi / (2 lambda)); tolerances are set
  // relative to that scale.
  const Real scale = boost::multiprecision::sqrt(pi(bits) / (2 * lambda));
  QuadratureOptions q;
  q.order = opt.quadrature_order;
  q.abs_tol = make_real(scale * make_real(opt.rel_tol, bits), bits);

  auto r = integrate_adaptive(right, detail::seed_breaks(width, t_hi, bits), q, bits);
  auto l = integrate_adaptive(left, detail::seed_breaks(1.5 * width, w_hi - 1.0, bits), q, bits);
  return (r.value + l.value).with_precision(sd.precision);
}

// ---------------------------------------------------------------------------
// Asymptotic evaluation
// ---------------------------------------------------------------------------

inline Real regime_threshold(unsigned d) {
  return make_real(std::sqrt(std::log(static_cast<double>(d))), 64);
}

namespace detail {

inline AsymptoticValue near_zero_F(unsigned d, const ComplexHP& x, unsigned bits) {
  const unsigned work = bits + 32;
  ComplexHP xw = x.with_precision(work);
  ComplexHP base(make_real(2 * static_cast<unsigned long>(d) + 1, work), make_real(0, work), work);
  ComplexHP v = sin_pi(xw) / pi(work) * pow_principal(base, -xw) * gamma(xw);
  AsymptoticValue out;
  out.value = v.with_precision(bits);
  out.regime = Regime::NearZero;
  out.error_indicator = make_real(1, bits) / (2 * d + 1);
  return out;
}

inline AsymptoticValue saddle_F(unsigned d, const ComplexHP& x, const AsymptoticOptions& opt) {
  const unsigned bits = opt.precision;
  const unsigned work = bits + 32 + static_cast<unsigned>(std::ceil(std::log2(d + 1.0)));
  SaddleData sd = saddle_point(d, x.im, work);
  IntegralOptions io;
  io.quadrature_order = opt.quadrature_order;
  io.cutoff_scale = opt.cutoff_scale;
  io.rel_tol = opt.rel_tol;
  SaddleData sq = sd;
  sq.precision = bits + 16;
  ComplexHP I = integral_I(sq, io).with_precision(work);

  const ComplexHP one(1, 0, work);
  const ComplexHP logE = log(one + sd.alpha) * make_real(d, work) - log(one - sd.alpha) * make_real(d + 1, work);
  const ComplexHP ax = pow_principal(sd.alpha, x.with_precision(work));
  const Real pref = 3 * sd.K2 / (4 * pi(work) * sd.K3);
  ComplexHP v = exp(logE) * ax * I * pref;

  AsymptoticValue out;
  out.value = v.with_precision(bits);
  out.regime = Regime::Saddle;
  out.error_indicator = make_real(boost::multiprecision::pow(make_real(x.im, bits), make_real(-1, bits) / 28), bits);
  out.saddle = sd;
  out.integral = I.with_precision(bits);
  return out;
}

}  // namespace detail

/// F(d, x) with the regime picked by |Im x| against sqrt(log d). Negative
/// Im x goes through F(conj x) = conj F(x).
inline AsymptoticValue asymptotic_F(unsigned d, const ComplexHP& x, const AsymptoticOptions& opt = {}) {
  if (d < 2) throw RangeError("asymptotic_F needs d >= 2");
  const Real eps = make_real(opt.epsilon, 64);
  if (x.re < eps || x.re > 1 - eps)
    throw RangeError("asymptotic_F: Re x=" + to_decimal(x.re, 8) + " outside [eps, 1-eps]");
  if (x.im < 0) {
    AsymptoticValue v = asymptotic_F(d, conj(x), opt);
    v.value = conj(v.value);
    if (v.integral) v.integral = conj(*v.integral);
    return v;
  }
  if (x.im > tau_upper_limit(d))
    throw RangeError("asymptotic_F: |Im x| beyond d - d^(1/6)");
  if (x.im <= regime_threshold(d)) return detail::near_zero_F(d, x, opt.precision);
  return detail::saddle_F(d, x, opt);
}

/// Forces one regime regardless of the threshold (for overlap checks).
inline AsymptoticValue asymptotic_F_in(Regime regime, unsigned d, const ComplexHP& x,
                                       const AsymptoticOptions& opt = {}) {
  if (x.im < 0) {
    AsymptoticValue v = asymptotic_F_in(regime, d, conj(x), opt);
    v.value = conj(v.value);
    return v;
  }
  if (regime == Regime::NearZero) return detail::near_zero_F(d, x, opt.precision);
  return detail::saddle_F(d, x, opt);
}

/// Approximation of L_d(-x): F(d, x) + (-1)^d conj F(d, 1 - conj x).
inline ComplexHP evaluate_L(unsigned d, const ComplexHP& x, const AsymptoticOptions& opt = {}) {
  const ComplexHP a = asymptotic_F(d, x, opt).value;
  const ComplexHP mirror = ComplexHP(1, 0, x.precision) - conj(x);
  // on Re x = 1/2 the mirror point is x itself
  const ComplexHP b = (mirror.re == x.re && mirror.im == x.im)
                          ? conj(a)
                          : conj(asymptotic_F(d, mirror, opt).value);
  return d % 2 == 0 ? a + b : a - b;
}

/// The same quantity in the contour normalisation, 2 pi i L_d(-x).
inline ComplexHP evaluate_contour(unsigned d, const ComplexHP& x, const AsymptoticOptions& opt = {}) {
  const unsigned bits = opt.precision;
  return evaluate_L(d, x, opt) * ComplexHP(make_real(0, bits), 2 * pi(bits), bits);
}

/// Continuous phase of the saddle-regime F(d, 1/2 + i tau):
/// -(2d+1) arctan s + tau log s - pi/4 + arg I.
inline Real saddle_phase(const SaddleData& sd, const ComplexHP& I) {
  const unsigned bits = sd.precision;
  const Real s = make_real(sd.s, bits);
  return make_real(-(2 * Real(sd.d) + 1) * boost::multiprecision::atan(s) +
                       make_real(sd.tau, bits) * boost::multiprecision::log(s) - pi(bits) / 4 +
                       arg(I),
                   bits);
}

}  // namespace crosspoly
