#pragma once

// Root counting from the asymptotics, and its comparison with exact roots.
//
// theta(tau) is the continuous argument of F(d, 1/2 + i tau), seeded with the
// principal value at tau = 0. Roots of L_d(-1/2 - i tau) sit where theta
// crosses pi/2 mod pi (d even) or 0 mod pi (d odd), so the number of roots
// with ordinate in [a, b] is about (theta(a) - theta(b)) / pi.

#include "crosspoly/critline.hpp"
#include "crosspoly/saddle.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

namespace crosspoly {

struct CountingRow {
  Real tau;
  long exact = 0;
  Real asym;  // includes the fitted offset
  Real unwrapped_arg;
};

struct CountingCurve {
  unsigned dim = 0;
  double grid_step = 0;
  long offset = 0;
  std::vector<CountingRow> rows;

  Real max_abs_error() const {
    Real m = make_real(0, 64);
    for (const auto& r : rows) m = std::max(m, Real(boost::multiprecision::abs(r.exact - r.asym)));
    return m;
  }
};

struct LargestRootEstimate {
  unsigned dim = 0;
  Real tau_hat;
  Real f_of_d;
  Real scaled;
  /// Closed form cbrt(d) (9/8)^(1/3) (pi - arg I)^(2/3) over cbrt(d).
  Real seed_scaled;
  Real arg_I;
  /// The equation's right side is -(2d - 3) pi / 4 - arg I.
  long phase_offset_quarter_pi = 0;
};

struct CountingOptions {
  AsymptoticOptions asym;
  /// Steps whose phase change exceeds this are halved.
  double max_jump = 1.5707963267948966;
  unsigned max_halvings = 30;
};

// ---------------------------------------------------------------------------
// Exact counts
// ---------------------------------------------------------------------------

/// Number of root ordinates (over the full line) in [a, b].
inline long count_roots_exact(const RootSet& rs, const Real& a, const Real& b) {
  long n = 0;
  for (const auto& r : rs.full_line())
    if (r.tau >= a && r.tau <= b) ++n;
  return n;
}

/// Certified positive-ordinate roots up to tau_max, refined only where
/// needed. Intervals that straddle tau_max are refined to decide.
inline std::vector<RefinedRoot> roots_up_to(unsigned d, const Real& tau_max,
                                            unsigned bits = kMinPrecisionBits) {
  const auto r = critical_line_polynomial(d);
  IsolationOptions iso;
  iso.sturm_check_max_half_degree = 0;
  const auto intervals = isolate_roots(r, iso);
  const Rational cap = to_rational(tau_max);
  std::vector<RefinedRoot> out;
  for (const auto& iv : intervals) {
    if (iv.hi < 0 || iv.lo > cap) continue;
    auto root = refine_root(r, iv, bits);
    if (root.tau <= tau_max) out.push_back(std::move(root));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Phase walking
// ---------------------------------------------------------------------------

namespace detail {

inline ComplexHP half_line_point(const Real& tau, unsigned bits) {
  return ComplexHP(make_real(Rational(1, 2), bits), make_real(tau, bits), bits);
}

/// Unwraps arg F(d, 1/2 + i tau) along increasing tau. The regime switch at
/// sqrt(log d) is crossed explicitly: both forms are evaluated there and the
/// tracker absorbs their (bounded) phase difference as one step.
class PhaseWalker {
 public:
  PhaseWalker(unsigned d, const CountingOptions& opt)
      : d_(d),
        opt_(opt),
        bits_(opt.asym.precision),
        tracker_(bits_, make_real(opt.max_jump, bits_), true),
        threshold_(regime_threshold(d)) {}

  /// Starts at tau0 >= 0, seeded with the principal argument there.
  void start(const Real& tau0) {
    tau_ = make_real(tau0, bits_);
    saddle_side_ = tau_ > threshold_;
    tracker_.update(value_at(tau_));
  }

  /// Advances to `target` with steps of at most `max_step`, halving the step
  /// whenever the phase moves too far in one go.
  void advance_to(const Real& target, double max_step) {
    step_ = max_step;
    while (tau_ < target) {
      if (!saddle_side_ && target > threshold_) {
        walk_within(threshold_);
        saddle_side_ = true;
        // the two forms differ by O(1) in phase here; only the hard pi limit applies
        tracker_.update(value_at(tau_), pi(bits_));
        continue;
      }
      walk_within(target);
    }
  }

  const Real& unwrapped() const { return tracker_.value(); }

 private:
  ComplexHP value_at(const Real& tau) const {
    const Regime r = saddle_side_ ? Regime::Saddle : Regime::NearZero;
    return asymptotic_F_in(r, d_, half_line_point(tau, bits_), opt_.asym).value;
  }

  void walk_within(const Real& target) {
    unsigned halvings = 0;
    while (tau_ < target) {
      Real next = make_real(tau_ + step_, bits_);
      if (next > target) next = make_real(target, bits_);
      try {
        tracker_.update(value_at(next));
      } catch (const GridTooCoarseError&) {
        if (++halvings > opt_.max_halvings)
          throw GridTooCoarseError("phase walk: step halving budget exhausted near tau=" +
                                   to_decimal(tau_, 10));
        step_ /= 2;
        continue;
      }
      tau_ = next;
      halvings = 0;
    }
  }

  unsigned d_;
  CountingOptions opt_;
  unsigned bits_;
  ArgTracker tracker_;
  Real threshold_;
  Real tau_;
  double step_ = 0;
  bool saddle_side_ = false;
};

}  // namespace detail

/// (1/pi) times the decrease of the unwrapped argument of F(d, 1/2 + i tau)
/// from a to b, i.e. the asymptotic number of roots with ordinate in [a, b].
inline Real count_roots_asymptotic(unsigned d, const Real& a, const Real& b, double grid_step,
                                   const CountingOptions& opt = {}) {
  if (a < 0 || b < a) throw RangeError("count_roots_asymptotic needs 0 <= a <= b");
  if (b > tau_upper_limit(d)) throw RangeError("count_roots_asymptotic: b beyond d - d^(1/6)");
  const unsigned bits = opt.asym.precision;
  if (a == b) return make_real(0, bits);
  detail::PhaseWalker w(d, opt);
  w.start(a);
  const Real start = w.unwrapped();
  w.advance_to(b, grid_step);
  return make_real((start - w.unwrapped()) / pi(bits), bits);
}

/// Grid 0, step, ..., tau_max comparing exact counts on [0, tau] with the
/// asymptotic count; one integer offset is fitted to minimise the maximum
/// error and folded into the asym column.
inline CountingCurve build_counting_curve(unsigned d, double tau_max, double grid_step,
                                          const CountingOptions& opt = {}) {
  if (!(grid_step > 0)) throw RangeError("build_counting_curve needs a positive step");
  const unsigned bits = opt.asym.precision;
  if (make_real(tau_max, 64) > tau_upper_limit(d))
    throw RangeError("build_counting_curve: tau_max beyond d - d^(1/6)");

  const auto roots = roots_up_to(d, make_real(tau_max, 64));
  const std::size_t n = static_cast<std::size_t>(std::floor(tau_max / grid_step + 1e-9)) + 1;

  CountingCurve c;
  c.dim = d;
  c.grid_step = grid_step;
  detail::PhaseWalker w(d, opt);
  w.start(make_real(0, bits));
  const Real theta0 = w.unwrapped();
  std::vector<Real> raw;
  for (std::size_t k = 0; k < n; ++k) {
    CountingRow row;
    row.tau = make_real(grid_step * static_cast<double>(k), bits);
    if (k > 0) w.advance_to(row.tau, grid_step);
    row.unwrapped_arg = w.unwrapped();
    raw.push_back(make_real((theta0 - row.unwrapped_arg) / pi(bits), bits));
    row.exact = 0;
    for (const auto& r : roots)
      if (r.tau <= row.tau) ++row.exact;
    c.rows.push_back(std::move(row));
  }

  // integer offset minimising max |exact - raw - k|
  std::vector<double> diffs;
  for (std::size_t k = 0; k < n; ++k) diffs.push_back(c.rows[k].exact - raw[k].convert_to<double>());
  const double lo = *std::min_element(diffs.begin(), diffs.end());
  const double hi = *std::max_element(diffs.begin(), diffs.end());
  c.offset = std::lround(0.5 * (lo + hi));
  for (std::size_t k = 0; k < n; ++k) c.rows[k].asym = make_real(raw[k] + c.offset, bits);
  return c;
}

inline void write_counting_csv(std::ostream& os, const CountingCurve& c, int digits) {
  os << "tau,exact,asym,err\n";
  for (const auto& r : c.rows)
    os << to_decimal(r.tau, digits) << ',' << r.exact << ',' << to_decimal(r.asym, digits) << ','
       << to_decimal(make_real(r.exact - r.asym, 64), digits) << '\n';
}

// ---------------------------------------------------------------------------
// Largest root
// ---------------------------------------------------------------------------

namespace detail {

/// -(2d+1) arctan s + tau log s + (2d-3) pi/4 + arg I(tau).
inline double largest_root_residual(unsigned d, double tau, unsigned bits, Real* arg_out = nullptr) {
  auto sd = saddle_point(d, make_real(tau, bits), bits);
  const Real aI = arg(integral_I(sd));
  if (arg_out) *arg_out = aI;
  const Real s = make_real(sd.s, bits);
  const Real v = -(2 * make_real(d, bits) + 1) * boost::multiprecision::atan(s) +
                 make_real(tau, bits) * boost::multiprecision::log(s) +
                 (2 * make_real(d, bits) - 3) * pi(bits) / 4 + aI;
  return v.convert_to<double>();
}

}  // namespace detail

/// Solves the largest-root equation on [d - 3 cbrt d, d - d^(1/6)].
inline LargestRootEstimate largest_root_estimate(unsigned d, unsigned bits = kDefaultPrecisionBits) {
  if (d < 20) throw RangeError("largest_root_estimate needs d >= 20");
  double lo = d - 3 * std::cbrt(double(d));
  double hi = tau_upper_limit(d).convert_to<double>();
  const double glo = detail::largest_root_residual(d, lo, bits);
  const double ghi = detail::largest_root_residual(d, hi, bits);
  if ((glo > 0) == (ghi > 0))
    throw ConvergenceError("largest_root_estimate: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "], residuals " + std::to_string(glo) + ", " +
                           std::to_string(ghi));
  std::uintmax_t iters = 100;
  auto f = [&](double t) { return detail::largest_root_residual(d, t, bits); };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, glo, ghi,
                                                 boost::math::tools::eps_tolerance<double>(48), iters);
  const double tau = 0.5 * (a + b);

  LargestRootEstimate e;
  e.dim = d;
  e.tau_hat = make_real(tau, 64);
  detail::largest_root_residual(d, tau, bits, &e.arg_I);
  const Real cb = boost::multiprecision::cbrt(make_real(d, bits));
  e.f_of_d = make_real(make_real(d, bits) - e.tau_hat, bits);
  e.scaled = make_real(e.f_of_d / cb, bits);
  e.seed_scaled = make_real(boost::multiprecision::cbrt(make_real(Rational(9, 8), bits)) *
                                boost::multiprecision::pow(pi(bits) - e.arg_I, make_real(Rational(2, 3), bits)),
                            bits);
  e.phase_offset_quarter_pi = -(2 * static_cast<long>(d) - 3);
  return e;
}

}  // namespace crosspoly
