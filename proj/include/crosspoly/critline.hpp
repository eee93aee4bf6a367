#pragma once

// Reduction of L_d to the line Re x = -1/2 and certified isolation and
// refinement of its roots there.
//
// Writing x = -1/2 + i*tau, L_d(x) = i^(d mod 2) * R(tau) with R real and of
// the parity of d, so R(tau) = tau^(d mod 2) * S(tau^2). Signs of R on the
// positive axis are signs of S, which is where all exact work happens.

#include "crosspoly/exactpoly.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace crosspoly {

using detail::IntPoly;

/// R(tau) with L_d(-1/2 + i tau) = i^(d mod 2) * R(tau).
struct CriticalLinePoly {
  unsigned dim = 0;
  /// Exact coefficients of R in tau, ascending degree.
  std::vector<Rational> rcoeffs;
  /// d mod 2; the unit i^parity has been divided out.
  unsigned parity = 0;
  /// Positive integer multiple of R (same signs, same roots).
  IntPoly scaled;
  /// S(u) with scaled(tau) = tau^parity * S(tau^2).
  IntPoly half;
};

/// A closed interval with dyadic endpoints; lo == hi marks an exact root.
struct RootInterval {
  Rational lo;
  Rational hi;
};

struct RefinedRoot {
  Real tau;
  Real radius;
};

/// Roots of L_d on the critical line, by ordinate. Only tau >= 0 is stored;
/// the negative half is the mirror image. tau = 0 is present iff d is odd.
struct RootSet {
  unsigned dim = 0;
  unsigned precision = kDefaultPrecisionBits;
  std::vector<Real> ordinates;  // ascending, >= 0
  std::vector<Real> radii;

  std::size_t size() const {
    const std::size_t n = ordinates.size();
    if (n == 0) return 0;
    return ordinates.front() == 0 ? 2 * n - 1 : 2 * n;
  }

  /// All d roots over the full line, ascending.
  std::vector<RefinedRoot> full_line() const {
    std::vector<RefinedRoot> out;
    out.reserve(size());
    for (std::size_t k = ordinates.size(); k-- > 0;)
      if (ordinates[k] != 0) out.push_back({-ordinates[k], radii[k]});
    for (std::size_t k = 0; k < ordinates.size(); ++k) out.push_back({ordinates[k], radii[k]});
    return out;
  }

  const Real& max_ordinate() const { return ordinates.back(); }
};

namespace detail {

inline int sign(const Integer& z) { return z.sign(); }

inline void trim(IntPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline std::size_t deg(const IntPoly& p) { return p.size() - 1; }

inline bool is_zero(const IntPoly& p) { return p.size() == 1 && p[0] == 0; }

inline IntPoly derivative(const IntPoly& p) {
  if (p.size() <= 1) return {Integer(0)};
  IntPoly out(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) out[k - 1] = p[k] * static_cast<unsigned>(k);
  return out;
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b.
inline IntPoly prem(IntPoly a, const IntPoly& b) {
  const std::size_t db = deg(b);
  const Integer& lb = b.back();
  if (deg(a) < db) return a;
  long steps = static_cast<long>(deg(a) - db) + 1;
  while (!is_zero(a) && deg(a) >= db) {
    const std::size_t shift = deg(a) - db;
    const Integer la = a.back();
    for (auto& c : a) c *= lb;
    for (std::size_t k = 0; k <= db; ++k) a[k + shift] -= la * b[k];
    if (a.size() == 1) {
      a[0] = 0;
      break;
    }
    a.pop_back();
    trim(a);
    --steps;
  }
  if (steps > 0) {
    Integer f = boost::multiprecision::pow(lb, static_cast<unsigned>(steps));
    for (auto& c : a) c *= f;
  }
  return a;
}

inline Integer ipow(const Integer& b, std::size_t e) {
  return boost::multiprecision::pow(b, static_cast<unsigned>(e));
}

/// Sign of p at +infinity / -infinity.
inline int sign_at_pos_inf(const IntPoly& p) { return sign(p.back()); }
inline int sign_at_neg_inf(const IntPoly& p) {
  return (deg(p) % 2 == 0) ? sign(p.back()) : -sign(p.back());
}

inline int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

/// sign(p(m / 2^k)) computed exactly with a homogenised Horner scheme.
inline int sign_at_dyadic(const IntPoly& p, const Integer& m, unsigned k) {
  const std::size_t n = deg(p);
  Integer acc = p[n];
  for (std::size_t i = n; i-- > 0;) {
    acc *= m;
    if (p[i] != 0) {
      Integer t = p[i];
      mpz_mul_2exp(t.backend().data(), t.backend().data(), k * (n - i));
      acc += t;
    }
  }
  return sign(acc);
}

/// Exact value of p at a rational point, returned as a rational.
inline Rational eval_at(const IntPoly& p, const Rational& x) {
  // Horner over a common denominator: p(a/b) * b^n = sum p_i a^i b^(n-i)
  const Integer a = numerator(x);
  const Integer b = denominator(x);
  const std::size_t n = deg(p);
  Integer acc = p[n];
  Integer bp = 1;
  for (std::size_t i = n; i-- > 0;) {
    bp *= b;
    acc = acc * a + p[i] * bp;
  }
  return Rational(acc, bp);
}

inline int sign_at(const IntPoly& p, const Rational& x) {
  const Integer a = numerator(x);
  const Integer b = denominator(x);  // > 0
  const std::size_t n = deg(p);
  Integer acc = p[n];
  Integer bp = 1;
  for (std::size_t i = n; i-- > 0;) {
    bp *= b;
    acc = acc * a + p[i] * bp;
  }
  return sign(acc);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sturm sequences
// ---------------------------------------------------------------------------

/// Sturm sequence of p (p, p', -rem, ...), each element a positive multiple
/// of the classical one. Built from the subresultant PRS so coefficient
/// growth stays polynomial; the sign of every element is corrected so that
/// the chain is a genuine Sturm chain.
struct SturmSequence {
  std::vector<IntPoly> chain;

  /// Last element has degree > 0 iff gcd(p, p') is nontrivial.
  bool squarefree() const { return detail::deg(chain.back()) == 0; }

  /// Number of distinct real roots of p on (-inf, inf).
  int real_root_count() const {
    std::vector<int> lo, hi;
    for (const auto& q : chain) {
      lo.push_back(detail::sign_at_neg_inf(q));
      hi.push_back(detail::sign_at_pos_inf(q));
    }
    return detail::variations(lo) - detail::variations(hi);
  }

  /// Number of distinct roots in (a, +inf); a must not be a root.
  int roots_above(const Rational& a) const {
    std::vector<int> lo, hi;
    for (const auto& q : chain) {
      lo.push_back(detail::sign_at(q, a));
      hi.push_back(detail::sign_at_pos_inf(q));
    }
    return detail::variations(lo) - detail::variations(hi);
  }

  /// Number of distinct roots in (a, b]; a and b must not be roots.
  int roots_between(const Rational& a, const Rational& b) const {
    std::vector<int> lo, hi;
    for (const auto& q : chain) {
      lo.push_back(detail::sign_at(q, a));
      hi.push_back(detail::sign_at(q, b));
    }
    return detail::variations(lo) - detail::variations(hi);
  }
};

inline SturmSequence sturm_sequence(IntPoly p) {
  using namespace detail;
  trim(p);
  SturmSequence s;
  s.chain.push_back(p);
  if (deg(p) == 0) return s;
  IntPoly dp = derivative(p);
  s.chain.push_back(dp);

  // Subresultant PRS r_0 = p, r_1 = p' with signs sigma_i tracked so that
  // sigma_i * r_i is the Sturm chain.
  IntPoly r_prev = p, r_cur = dp;
  int sigma_prev = 1, sigma_cur = 1;
  std::size_t d_i = deg(r_prev) - deg(r_cur);
  Integer beta = (d_i % 2 == 1) ? Integer(1) : Integer(-1);  // (-1)^(d_1 + 1)
  Integer psi = -1;
  while (true) {
    IntPoly r_next = prem(r_prev, r_cur);
    if (is_zero(r_next)) break;
    for (auto& c : r_next) c /= beta;  // exact
    const Integer gamma = r_cur.back();
    const int sgn_gamma_pow = (sign(gamma) < 0 && (d_i + 1) % 2 == 1) ? -1 : 1;
    const int sigma_next = -sigma_prev * sign(beta) * sgn_gamma_pow;

    IntPoly stored = r_next;
    if (sigma_next < 0)
      for (auto& c : stored) c = -c;
    s.chain.push_back(std::move(stored));

    const std::size_t d_next = deg(r_cur) - deg(r_next);
    // psi_{i+1} = (-gamma_i)^{d_i} / psi_i^{d_i - 1}
    Integer psi_next = ipow(-gamma, d_i);
    if (d_i > 1) psi_next /= ipow(psi, d_i - 1);
    beta = -gamma * ipow(psi_next, d_next);
    psi = psi_next;

    r_prev = std::move(r_cur);
    r_cur = std::move(r_next);
    sigma_prev = sigma_cur;
    sigma_cur = sigma_next;
    d_i = d_next;
    if (deg(r_cur) == 0) break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Critical-line polynomial
// ---------------------------------------------------------------------------

/// Substitutes x = -1/2 + i*tau into L_d, collects powers of tau exactly and
/// divides by i^(d mod 2). Throws ConsistencyError if a coefficient keeps a
/// nonzero imaginary part.
inline CriticalLinePoly critical_line_polynomial(unsigned d) {
  if (d < 1) throw DomainError("critical_line_polynomial needs d >= 1");
  const IntPoly num = ehrhart_numerator(d);  // d! * L_d(x)

  // G(y) = 2^d d! L_d((y - 1)/2) = sum_k num_k 2^(d-k) (y - 1)^k, y = 2 i tau.
  IntPoly g{num[d]};
  for (unsigned k = d; k-- > 0;) {
    // g <- g * (y - 1) + num_k * 2^(d - k)
    IntPoly next(g.size() + 1);
    for (std::size_t j = 0; j < g.size(); ++j) {
      next[j + 1] += g[j];
      next[j] -= g[j];
    }
    Integer a = num[k];
    mpz_mul_2exp(a.backend().data(), a.backend().data(), d - k);
    next[0] += a;
    g = std::move(next);
  }

  CriticalLinePoly c;
  c.dim = d;
  c.parity = d % 2;
  c.scaled.assign(d + 1, Integer(0));
  Integer den = detail::factorial(d);
  mpz_mul_2exp(den.backend().data(), den.backend().data(), d);
  for (unsigned j = 0; j <= d; ++j) {
    // coefficient of tau^j is g_j (2i)^j; divided by i^parity it is
    // g_j 2^j i^(j - parity): real iff j - parity is even.
    const bool real_slot = ((j + c.parity) % 2 == 0);
    if (!real_slot) {
      if (g[j] != 0)
        throw ConsistencyError("critical_line_polynomial: imaginary coefficient at tau^" +
                               std::to_string(j));
      continue;
    }
    Integer v = g[j];
    mpz_mul_2exp(v.backend().data(), v.backend().data(), j);
    if (((j - c.parity) / 2) % 2 == 1) v = -v;
    c.scaled[j] = v;
  }
  detail::trim(c.scaled);
  if (detail::deg(c.scaled) != d)
    throw ConsistencyError("critical_line_polynomial: degree dropped");
  for (unsigned j = 0; j <= d; ++j) c.rcoeffs.emplace_back(c.scaled[j], den);
  for (unsigned j = c.parity; j <= d; j += 2) c.half.push_back(c.scaled[j]);
  return c;
}

/// Exact R(tau) at a rational point.
inline Rational eval_critical(const CriticalLinePoly& r, const Rational& tau) {
  Rational acc = 0;
  for (auto it = r.rcoeffs.rbegin(); it != r.rcoeffs.rend(); ++it) acc = acc * tau + *it;
  return acc;
}

// ---------------------------------------------------------------------------
// Isolation
// ---------------------------------------------------------------------------

struct IsolationOptions {
  /// Upper end of the scanned tau-range; roots of L_d satisfy |tau| < d.
  std::optional<Rational> upper;
  /// Initial grid step is 2^-initial_step_log2.
  unsigned initial_step_log2 = 3;
  unsigned max_step_log2 = 16;
  /// Run the exact Sturm squarefree check on S when deg S is at most this.
  unsigned sturm_check_max_half_degree = 30;
};

/// Disjoint rational intervals, one per root of R, ascending over the full
/// line. A degree-d polynomial with d sign changes on disjoint intervals has
/// exactly one simple root in each, so collecting floor(d/2) sign changes of
/// S on tau > 0 certifies the whole root set. The grid is halved until they
/// are all found.
inline std::vector<RootInterval> isolate_roots(const CriticalLinePoly& r,
                                               const IsolationOptions& opt = {}) {
  const unsigned d = r.dim;
  const std::size_t want = d / 2;
  const IntPoly& s = r.half;

  if (s[0] == 0) throw ConsistencyError("isolate_roots: repeated root at tau = 0");
  if (detail::deg(s) >= 1 && detail::deg(s) <= opt.sturm_check_max_half_degree) {
    const auto chain = sturm_sequence(s);
    if (!chain.squarefree())
      throw ConsistencyError("isolate_roots: gcd(R, R') is nontrivial; roots are not distinct");
  }

  const Rational upper = opt.upper.value_or(Rational(d));
  std::vector<RootInterval> positive;
  for (unsigned k = opt.initial_step_log2; k <= opt.max_step_log2 && positive.size() < want;
       ++k) {
    positive.clear();
    // tau = m / 2^k, u = tau^2 = m^2 / 2^(2k)
    Integer mmax = numerator(upper);
    mpz_mul_2exp(mmax.backend().data(), mmax.backend().data(), k);
    mmax = mmax / denominator(upper) + 1;
    int prev = detail::sign(s[0]);
    Integer prev_m = 0;
    for (Integer m = 1; m <= mmax && positive.size() < want; ++m) {
      const int sg = detail::sign_at_dyadic(s, m * m, 2 * k);
      const Rational scale(Integer(1) << k);
      if (sg == 0) {
        positive.push_back({Rational(m) / scale, Rational(m) / scale});
        prev = 0;
        prev_m = m;
        continue;
      }
      if (prev != 0 && sg != prev) positive.push_back({Rational(prev_m) / scale, Rational(m) / scale});
      prev = sg;
      prev_m = m;
    }
  }
  if (positive.size() != want)
    throw ConvergenceError("isolate_roots: found " + std::to_string(positive.size()) + " of " +
                           std::to_string(want) + " positive roots");

  std::vector<RootInterval> out;
  out.reserve(d);
  for (std::size_t i = positive.size(); i-- > 0;)
    out.push_back({-positive[i].hi, -positive[i].lo});
  if (r.parity == 1) out.push_back({Rational(0), Rational(0)});
  for (const auto& iv : positive) out.push_back(iv);
  return out;
}

// ---------------------------------------------------------------------------
// Refinement
// ---------------------------------------------------------------------------

struct RefineOptions {
  unsigned guard_bits = 32;
  unsigned max_newton = 80;
  unsigned max_escalations = 3;
};

namespace detail {

// Exact S(u), S'(u) at the dyadic value of an MPFR number, rounded back.
inline std::pair<Real, Real> eval_half_and_derivative(const IntPoly& s, const IntPoly& ds,
                                                      const Real& u, unsigned bits) {
  const Rational q = to_rational(u);
  return {make_real(eval_at(s, q), bits), make_real(eval_at(ds, q), bits)};
}

inline Rational square(const Rational& x) { return x * x; }

}  // namespace detail

/// Refines the root of R inside `iv` to a value with certified error radius
/// 2^-target_bits * |tau|: exact bisection on S(tau^2) until the bracket is
/// narrow, Newton in u = tau^2 with exactly evaluated S and S', then an exact
/// sign check at tau +- radius. A failed certificate triggers bisection and a
/// retry at higher working precision.
inline RefinedRoot refine_root(const CriticalLinePoly& r, const RootInterval& iv,
                               unsigned target_bits, const RefineOptions& opt = {}) {
  if (target_bits < kMinPrecisionBits) target_bits = kMinPrecisionBits;
  if (iv.lo == iv.hi) {
    return {make_real(iv.lo, target_bits + opt.guard_bits), make_real(0, target_bits)};
  }
  const bool negative = iv.hi <= 0;
  Rational lo = negative ? -iv.hi : iv.lo;
  Rational hi = negative ? -iv.lo : iv.hi;
  const IntPoly& s = r.half;
  const IntPoly ds = detail::derivative(s);

  // bracket in u
  Rational ulo = detail::square(lo), uhi = detail::square(hi);
  int slo = detail::sign_at(s, ulo);
  const int shi = detail::sign_at(s, uhi);
  if (slo == 0) return {make_real(negative ? -lo : lo, target_bits), make_real(0, target_bits)};
  if (shi == 0) return {make_real(negative ? -hi : hi, target_bits), make_real(0, target_bits)};
  if (slo == shi) throw ConsistencyError("refine_root: interval does not bracket a sign change");

  auto bisect_to = [&](const Rational& rel_width) {
    while ((uhi - ulo) > rel_width * uhi) {
      Rational mid = (ulo + uhi) / 2;
      const int sm = detail::sign_at(s, mid);
      if (sm == 0) {
        ulo = uhi = mid;
        return;
      }
      if (sm == slo)
        ulo = mid;
      else
        uhi = mid;
    }
  };
  bisect_to(Rational(1, Integer(1) << 24));

  unsigned work = target_bits + opt.guard_bits;
  for (unsigned attempt = 0; attempt <= opt.max_escalations; ++attempt) {
    Real u = make_real((ulo + uhi) / 2, work);
    const Real tol = boost::multiprecision::ldexp(make_real(1, work), -static_cast<int>(target_bits + 8));
    bool converged = (ulo == uhi);
    for (unsigned it = 0; it < opt.max_newton && !converged; ++it) {
      auto [f, df] = detail::eval_half_and_derivative(s, ds, u, work);
      if (f == 0) {
        converged = true;
        break;
      }
      Real step = (df == 0) ? make_real(0, work) : Real(f / df);
      // below one ulp the iterate would land on a bracket end; stop here
      if (df != 0 && boost::multiprecision::abs(step) <= tol * boost::multiprecision::abs(u)) {
        converged = true;
        break;
      }
      Real next = u - step;
      const Rational nq = to_rational(next);
      if (df == 0 || nq <= ulo || nq >= uhi) {
        // Newton left the bracket: fall back to one exact bisection step
        Rational mid = (ulo + uhi) / 2;
        const int sm = detail::sign_at(s, mid);
        if (sm == 0) {
          ulo = uhi = mid;
          u = make_real(mid, work);
          converged = true;
          break;
        }
        (sm == slo ? ulo : uhi) = mid;
        next = make_real(mid, work);
        step = u - next;
      } else {
        const int sn = detail::sign_at(s, nq);
        if (sn == 0) {
          u = next;
          converged = true;
          break;
        }
        (sn == slo ? ulo : uhi) = nq;
      }
      u = next;
      if (boost::multiprecision::abs(step) <= tol * boost::multiprecision::abs(u)) converged = true;
    }

    Real tau = boost::multiprecision::sqrt(make_real(u, work));
    Real radius = boost::multiprecision::ldexp(make_real(tau, target_bits), -static_cast<int>(target_bits));
    // certificate: S changes sign across [tau - radius, tau + radius]
    const Rational tq = to_rational(tau);
    const Rational rq = to_rational(radius);
    const Rational a = tq - rq, b = tq + rq;
    const int sa = detail::sign_at(s, detail::square(a));
    const int sb = detail::sign_at(s, detail::square(b));
    if (sa == 0 || sb == 0 || sa != sb) {
      if (negative) tau = -tau;
      return {tau, radius};
    }
    // certificate failed: tighten the exact bracket and escalate
    bisect_to(Rational(1, Integer(1) << std::min<unsigned>(work, 4096)));
    work += work / 2;
  }
  throw ConvergenceError("refine_root: precision escalation failed");
}

/// All roots of L_d on the critical line with certified radii.
inline RootSet all_roots(unsigned d, unsigned target_bits = kDefaultPrecisionBits,
                         const IsolationOptions& iso = {}) {
  if (d < 1) throw DomainError("all_roots needs d >= 1");
  const auto r = critical_line_polynomial(d);
  const auto intervals = isolate_roots(r, iso);
  RootSet rs;
  rs.dim = d;
  rs.precision = target_bits;
  for (const auto& iv : intervals) {
    if (iv.hi < 0) continue;
    auto root = refine_root(r, iv, target_bits);
    rs.ordinates.push_back(std::move(root.tau));
    rs.radii.push_back(std::move(root.radius));
  }
  return rs;
}

/// Largest ordinate only; the full isolation still runs so that the
/// returned root is certified to be the top one.
inline RefinedRoot largest_root(unsigned d, unsigned target_bits = kDefaultPrecisionBits,
                                const IsolationOptions& iso = {}) {
  if (d < 1) throw DomainError("largest_root needs d >= 1");
  const auto r = critical_line_polynomial(d);
  const auto intervals = isolate_roots(r, iso);
  return refine_root(r, intervals.back(), target_bits);
}

/// CSV `tau,err_radius`, ascending over the full line.
inline void write_roots_csv(std::ostream& os, const RootSet& rs, int digits) {
  os << "tau,err_radius\n";
  for (const auto& root : rs.full_line())
    os << to_decimal(root.tau, digits) << ',' << to_decimal(root.radius, 6) << '\n';
}

}  // namespace crosspoly
