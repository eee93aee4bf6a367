// Acceptance run: one PASS/FAIL line per criterion. `--slow` adds the large
// dimensions. Exit status is nonzero if any criterion fails.

#include "crosspoly/crosspoly.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace crosspoly;

namespace {

// pinned tolerances
constexpr double kTable1Tol = 1e-9;
constexpr double kParityTol = 1e-6;
constexpr double kAsymRelTol = 0.5;
constexpr double kCountingTol = 2.0;
constexpr double kDensityTol = 1.0;
constexpr double kLargestTol = 0.5;
constexpr double kScaledLo = 1.70, kScaledHi = 1.85;
constexpr double kQuadratureTol = 1e-12;
constexpr double kGammaTol = 1e-20;
constexpr unsigned kTable1Bits = 192;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [miss: " << what << "]";
    }
  }
};

double to_d(const Real& x) { return x.convert_to<double>(); }

std::string fmt(double v, int prec = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

Real parse_decimal(const char* text, unsigned bits) {
  Real r = make_real(0, bits);
  mpfr_set_str(r.backend().data(), text, 10, MPFR_RNDN);
  return r;
}

ComplexHP on_line(double tau, unsigned bits = kDefaultPrecisionBits) {
  return ComplexHP(make_real(Rational(1, 2), bits), make_real(tau, bits), bits);
}

double rel_error_L(unsigned d, double tau) {
  const auto x = on_line(tau);
  const ComplexHP v = evaluate_L(d, x);
  const ComplexHP ex = eval_exact(build_ehrhart(d), -x);
  return to_d(abs(v - ex) / abs(ex));
}

// --- criteria --------------------------------------------------------------

void oracle_equivalence(Outcome& o, bool) {
  long checked = 0;
  for (unsigned d = 0; d <= 6; ++d) {
    const auto p = build_ehrhart(d);
    for (unsigned m = 0; m <= 5; ++m, ++checked)
      o.check(eval_rational(p, Rational(m)) == Rational(lattice_count_oracle(d, m)),
              "lattice d=" + std::to_string(d) + " m=" + std::to_string(m));
  }
  for (unsigned d = 0; d <= 20; ++d) {
    const auto p = build_ehrhart(d);
    const auto g = gen_series_coeffs(d, 30);
    for (unsigned m = 0; m <= 30; ++m, ++checked)
      o.check(eval_rational(p, Rational(m)) == Rational(g[m]),
              "series d=" + std::to_string(d) + " m=" + std::to_string(m));
  }
  o.detail << " " << checked << " exact values compared";
}

struct TableRow {
  unsigned d;
  const char* tau;
  const char* scaled;
};

constexpr TableRow kTable1[] = {
    {100, "91.9987057014", "1.7238266002"},   {200, "189.7372321215", "1.7549086218"},
    {300, "288.1562327578", "1.7692238245"},  {400, "386.8992027271", "1.7780517454"},
    {500, "485.8385218444", "1.7842344425"},  {600, "584.9118679958", "1.7888958567"},
    {700, "684.0835726177", "1.7925842603"},  {800, "783.3310874715", "1.7956041698"},
    {900, "882.6391445854", "1.7981404758"},  {1000, "981.9968699646", "1.8003130035"},
};

void table_reproduction(Outcome& o, bool slow) {
  for (const auto& row : kTable1) {
    if (row.d > 300 && !slow) continue;
    const unsigned bits = kTable1Bits;
    const RefinedRoot r = largest_root(row.d, bits);
    const Real dd = make_real(row.d, bits);
    const Real scaled = make_real((dd - r.tau) / boost::multiprecision::cbrt(dd), bits);
    const double dt = to_d(boost::multiprecision::abs(r.tau - parse_decimal(row.tau, bits)));
    const double ds = to_d(boost::multiprecision::abs(scaled - parse_decimal(row.scaled, bits)));
    o.detail << " d=" << row.d << ":" << to_fixed(r.tau, 10) << "/" << to_fixed(scaled, 10);
    o.check(dt <= kTable1Tol, "d=" + std::to_string(row.d) + " tau off by " + fmt(dt, 3));
    o.check(ds <= kTable1Tol, "d=" + std::to_string(row.d) + " scaled off by " + fmt(ds, 3));
  }
  if (!slow) o.detail << " (d>300 needs --slow)";
}

void root_census(Outcome& o, bool) {
  for (unsigned d = 1; d <= 60; ++d) {
    const RootSet rs = all_roots(d, kMinPrecisionBits);
    const auto full = rs.full_line();
    const std::string tag = "d=" + std::to_string(d);
    o.check(rs.size() == d && full.size() == d, tag + " count");
    for (std::size_t k = 1; k < full.size(); ++k)
      o.check(full[k].tau - full[k].radius > full[k - 1].tau + full[k - 1].radius, tag + " distinct");
    for (std::size_t k = 0; k < full.size(); ++k)
      o.check(full[k].tau == -full[full.size() - 1 - k].tau, tag + " symmetry");
    const bool has_zero = !rs.ordinates.empty() && rs.ordinates.front() == 0;
    o.check(has_zero == (d % 2 == 1), tag + " zero root parity");
    const auto chain = sturm_sequence(critical_line_polynomial(d).scaled);
    o.check(chain.squarefree() && chain.real_root_count() == static_cast<int>(d), tag + " Sturm");
  }
  o.detail << " d=1..60";
}

void regime_parity(Outcome& o, bool) {
  double worst = 0;
  for (unsigned d : {40u, 41u}) {
    const auto p = build_ehrhart(d);
    for (double tau : {5.0, 10.0, 20.0}) {
      const auto x = on_line(tau);
      // contour normalisation: 2i Im for even d, 2 Re for odd d
      const ComplexHP c = evaluate_contour(d, x);
      const Real off_c = d % 2 == 0 ? boost::multiprecision::abs(c.re) : boost::multiprecision::abs(c.im);
      const double rc = to_d(off_c / abs(c));
      // the L-normalised value has the parity of the exact polynomial
      const ComplexHP v = evaluate_L(d, x);
      const ComplexHP ex = eval_exact(p, -x);
      const bool exact_real = boost::multiprecision::abs(ex.im) < boost::multiprecision::abs(ex.re);
      const Real off_v = exact_real ? boost::multiprecision::abs(v.im) : boost::multiprecision::abs(v.re);
      const double rv = to_d(off_v / abs(v));
      worst = std::max({worst, rc, rv});
      const std::string tag = "d=" + std::to_string(d) + " tau=" + fmt(tau, 3);
      o.check(rc <= kParityTol, tag + " contour parity " + fmt(rc, 3));
      o.check(rv <= kParityTol, tag + " L parity " + fmt(rv, 3));
    }
  }
  o.detail << " worst off-axis ratio " << fmt(worst, 3);
}

void asymptotic_accuracy(Outcome& o, bool) {
  for (double tau : {30.0, 60.0, 100.0, 150.0}) {
    const double e = rel_error_L(200, tau);
    o.detail << " d=200,tau=" << tau << ":" << fmt(e, 3);
    o.check(e <= kAsymRelTol, "d=200 tau=" + fmt(tau, 4));
  }
  double prev = 0;
  bool first = true;
  o.detail << " | tau=d/2:";
  for (unsigned d : {50u, 100u, 200u, 400u}) {
    const double e = rel_error_L(d, d / 2.0);
    o.detail << " d=" << d << ":" << fmt(e, 3);
    if (!first) o.check(e <= prev, "not non-increasing at d=" + std::to_string(d));
    prev = e;
    first = false;
  }
}

void counting_fidelity(Outcome& o, bool) {
  for (auto [d, tau_max] : {std::pair{50u, 45.0}, std::pair{100u, 95.0}}) {
    const CountingCurve c = build_counting_curve(d, tau_max, 0.5);
    const double err = to_d(c.max_abs_error());
    o.detail << " d=" << d << ": rows=" << c.rows.size() << " max|err|=" << fmt(err, 3)
             << " offset=" << c.offset;
    o.check(err <= kCountingTol, "d=" + std::to_string(d));
  }
}

void near_zero_density(Outcome& o, bool slow) {
  std::vector<unsigned> dims{500};
  if (slow) dims.push_back(1000);
  for (unsigned d : dims) {
    const auto roots = roots_up_to(d, make_real(1, kMinPrecisionBits));
    const double predicted = std::log(double(d)) / M_PI;
    o.detail << " d=" << d << ": " << roots.size() << " vs " << fmt(predicted, 4);
    o.check(std::abs(double(roots.size()) - predicted) <= kDensityTol, "d=" + std::to_string(d));
  }
  if (!slow) o.detail << " (d=1000 needs --slow)";
}

void largest_root_predictor(Outcome& o, bool) {
  double prev = 0;
  for (unsigned d : {100u, 200u, 500u}) {
    const auto e = largest_root_estimate(d);
    const RefinedRoot ex = largest_root(d, kMinPrecisionBits);
    const double gap = std::abs(to_d(e.tau_hat) - to_d(ex.tau));
    const double scaled = to_d(e.scaled);
    o.detail << " d=" << d << ": tau_hat=" << fmt(to_d(e.tau_hat), 10) << " gap=" << fmt(gap, 3)
             << " scaled=" << fmt(scaled, 6);
    const std::string tag = "d=" + std::to_string(d);
    o.check(gap <= kLargestTol, tag + " gap");
    o.check(scaled > kScaledLo && scaled < kScaledHi, tag + " scaled range");
    o.check(scaled > prev, tag + " scaled trend");
    prev = scaled;
  }
}

void quadrature_consistency(Outcome& o, bool) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<unsigned> pick_d(20, 1000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_nodes = 0, worst_cut = 0, min_arg = 10, max_arg = -10;
  for (int k = 0; k < 20; ++k) {
    const unsigned d = pick_d(rng);
    const double hi = to_d(tau_upper_limit(d));
    const double tau = 0.5 + unit(rng) * (hi - 0.5);
    const auto sd = saddle_point(d, make_real(tau, kDefaultPrecisionBits));
    IntegralOptions base;
    IntegralOptions nodes = base;
    nodes.quadrature_order = 2 * base.quadrature_order;
    IntegralOptions cut = base;
    cut.cutoff_scale = 2 * base.cutoff_scale;
    const ComplexHP I = integral_I(sd, base);
    const double rn = to_d(abs(integral_I(sd, nodes) - I) / abs(I));
    const double rc = to_d(abs(integral_I(sd, cut) - I) / abs(I));
    const double a = to_d(arg(I));
    worst_nodes = std::max(worst_nodes, rn);
    worst_cut = std::max(worst_cut, rc);
    min_arg = std::min(min_arg, a);
    max_arg = std::max(max_arg, a);
    const std::string tag = "d=" + std::to_string(d) + " tau=" + fmt(tau, 6);
    o.check(rn < kQuadratureTol, tag + " node doubling");
    o.check(rc < kQuadratureTol, tag + " cutoff doubling");
    o.check(a > 0 && a < M_PI / 3, tag + " arg " + fmt(a, 4));
  }
  o.detail << " 20 pairs; node doubling " << fmt(worst_nodes, 3) << ", cutoff doubling "
           << fmt(worst_cut, 3) << ", arg in [" << fmt(min_arg, 4) << ", " << fmt(max_arg, 4) << "]";
}

void gamma_kernel(Outcome& o, bool) {
  const unsigned bits = 128;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-6.0, 6.0), im(-30.0, 30.0);
  double worst_rec = 0, worst_mod = 0;
  const ComplexHP one(1, 0, bits);
  for (int k = 0; k < 100; ++k) {
    const ComplexHP z(make_real(re(rng), bits), make_real(im(rng), bits), bits);
    const ComplexHP lhs = gamma(z + one);
    const ComplexHP rhs = z * gamma(z);
    worst_rec = std::max(worst_rec, to_d(abs(lhs - rhs) / abs(lhs)));

    const double tau = im(rng);
    const ComplexHP g = gamma(on_line(tau, bits));
    const Real mod2 = g.re * g.re + g.im * g.im;
    const Real want = pi(bits) / boost::multiprecision::cosh(pi(bits) * make_real(tau, bits));
    worst_mod = std::max(worst_mod, to_d(boost::multiprecision::abs(mod2 - want) / want));
  }
  o.detail << " 100 points; recurrence " << fmt(worst_rec, 3) << ", |Gamma(1/2+it)|^2 "
           << fmt(worst_mod, 3);
  o.check(worst_rec <= kGammaTol, "recurrence");
  o.check(worst_mod <= kGammaTol, "modulus identity");
}

}  // namespace

int main(int argc, char** argv) {
  bool slow = false;
  for (int k = 1; k < argc; ++k)
    if (std::string(argv[k]) == "--slow") slow = true;

  struct Criterion {
    const char* name;
    std::function<void(Outcome&, bool)> run;
  };
  const std::vector<Criterion> criteria{
      {"exact polynomial vs lattice and series oracles", oracle_equivalence},
      {"largest-root table", table_reproduction},
      {"root census", root_census},
      {"regime parity", regime_parity},
      {"asymptotic accuracy", asymptotic_accuracy},
      {"counting-curve fidelity", counting_fidelity},
      {"near-zero density", near_zero_density},
      {"largest-root predictor", largest_root_predictor},
      {"quadrature self-consistency", quadrature_consistency},
      {"special-function kernel", gamma_kernel},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].run(o, slow);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].name << ", "
              << fmt(secs, 3) << " s):" << o.detail.str() << std::endl;
  }
  std::cout << failures << " of " << criteria.size() << " criteria failed" << std::endl;
  return failures == 0 ? 0 : 1;
}
