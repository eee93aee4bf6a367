#pragma once

// Command implementations behind tools/crosspoly_cli. Each command returns the
// text it would print so that tests can drive it without a process.

#include "crosspoly/counting.hpp"
#include "crosspoly/critline.hpp"
#include "crosspoly/exactpoly.hpp"
#include "crosspoly/saddle.hpp"

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

namespace crosspoly::cli {

enum class Format { Csv, Json };

struct RunConfig {
  unsigned precision_bits = kDefaultPrecisionBits;
  double epsilon = 0.05;
  std::string out_path;  // empty: stdout
  Format format = Format::Csv;
  bool slow = false;

  /// Defaults with CROSSPOLY_PRECISION applied when set.
  static RunConfig from_env() {
    RunConfig c;
    if (const char* env = std::getenv("CROSSPOLY_PRECISION"); env && *env) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (*end != '\0' || v <= 0) throw DomainError("CROSSPOLY_PRECISION is not a positive integer");
      c.precision_bits = static_cast<unsigned>(v);
    }
    return c;
  }

  void validate() const {
    if (precision_bits < kMinPrecisionBits)
      throw DomainError("precision must be at least " + std::to_string(kMinPrecisionBits) + " bits");
    if (!(epsilon > 0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 0.5)");
  }

  int digits() const { return print_digits_for_bits(precision_bits); }

  AsymptoticOptions asym() const {
    AsymptoticOptions o;
    o.precision = precision_bits;
    o.epsilon = epsilon;
    return o;
  }
};

/// Exact roots above this dimension need --slow.
inline constexpr unsigned kSlowDimension = 300;

namespace detail {

inline void require_fast(const RunConfig& cfg, unsigned d) {
  if (d > kSlowDimension && !cfg.slow)
    throw RangeError("dimension " + std::to_string(d) + " needs exact roots; rerun with --slow");
}

// Minimal JSON writer: numbers keep all printed digits instead of passing
// through double.
class JsonObject {
 public:
  JsonObject& raw(const std::string& key, const std::string& text) {
    fields_.push_back("\"" + key + "\":" + text);
    return *this;
  }
  JsonObject& num(const std::string& key, const Real& v, int digits) {
    return raw(key, to_decimal(v, digits));
  }
  JsonObject& integer(const std::string& key, long v) { return raw(key, std::to_string(v)); }
  JsonObject& str(const std::string& key, const std::string& v) {
    return raw(key, nlohmann::json(v).dump());
  }
  JsonObject& pair(const std::string& key, const ComplexHP& z, int digits) {
    return raw(key, "[" + to_decimal(z.re, digits) + "," + to_decimal(z.im, digits) + "]");
  }
  JsonObject& null(const std::string& key) { return raw(key, "null"); }

  std::string dump() const {
    std::string s = "{";
    for (std::size_t k = 0; k < fields_.size(); ++k) s += (k ? "," : "") + fields_[k];
    return s + "}";
  }

 private:
  std::vector<std::string> fields_;
};

inline std::string json_array(const std::vector<std::string>& items) {
  std::string s = "[";
  for (std::size_t k = 0; k < items.size(); ++k) s += (k ? "," : "") + items[k];
  return s + "]";
}

}  // namespace detail

inline std::string cmd_poly(const RunConfig&, unsigned d) {
  return to_json(build_ehrhart(d)).dump() + "\n";
}

inline std::string cmd_roots(const RunConfig& cfg, unsigned d) {
  detail::require_fast(cfg, d);
  const RootSet rs = all_roots(d, cfg.precision_bits);
  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    write_roots_csv(os, rs, cfg.digits());
    return os.str();
  }
  std::vector<std::string> taus, radii;
  for (const auto& r : rs.full_line()) {
    taus.push_back(to_decimal(r.tau, cfg.digits()));
    radii.push_back(to_decimal(r.radius, 6));
  }
  detail::JsonObject o;
  o.integer("d", d).raw("tau", detail::json_array(taus)).raw("err_radius", detail::json_array(radii));
  return o.dump() + "\n";
}

/// F(d, x) at x = re + i im, with the saddle data when that regime applies.
inline std::string cmd_asym(const RunConfig& cfg, unsigned d, double re, double im) {
  const unsigned bits = cfg.precision_bits;
  const int dig = cfg.digits();
  const ComplexHP x(make_real(re, bits), make_real(im, bits), bits);
  const auto opt = cfg.asym();
  const AsymptoticValue v = asymptotic_F(d, x, opt);
  const ComplexHP L = evaluate_L(d, x, opt);

  detail::JsonObject o;
  o.integer("d", d).pair("x", x, dig).str("regime", regime_name(v.regime)).pair("value", v.value, dig);
  if (v.saddle) {
    o.pair("alpha", v.saddle->alpha, dig).num("K2", v.saddle->K2, dig).num("K3", v.saddle->K3, dig);
    o.pair("I", *v.integral, dig);
  } else {
    o.null("alpha").null("K2").null("K3").null("I");
  }
  o.pair("L", L, dig);
  if (cfg.format == Format::Json) return o.dump() + "\n";

  std::ostringstream os;
  os << "d,re,im,regime,value_re,value_im,L_re,L_im\n"
     << d << ',' << to_decimal(x.re, dig) << ',' << to_decimal(x.im, dig) << ',' << regime_name(v.regime)
     << ',' << to_decimal(v.value.re, dig) << ',' << to_decimal(v.value.im, dig) << ','
     << to_decimal(L.re, dig) << ',' << to_decimal(L.im, dig) << '\n';
  return os.str();
}

/// Asymptotic root count on [a, b]; with `exact` the certified count too.
inline std::string cmd_count(const RunConfig& cfg, unsigned d, double a, double b, double step,
                             bool exact) {
  const unsigned bits = cfg.precision_bits;
  const int dig = cfg.digits();
  CountingOptions opt;
  opt.asym = cfg.asym();
  const Real n = count_roots_asymptotic(d, make_real(a, bits), make_real(b, bits), step, opt);
  long ex = -1;
  if (exact) {
    detail::require_fast(cfg, d);
    const auto rs = all_roots(d, kMinPrecisionBits);
    ex = count_roots_exact(rs, make_real(a, bits), make_real(b, bits));
  }
  if (cfg.format == Format::Json) {
    detail::JsonObject o;
    o.integer("d", d).num("a", make_real(a, bits), dig).num("b", make_real(b, bits), dig).num("asym", n, dig);
    if (exact)
      o.integer("exact", ex);
    else
      o.null("exact");
    return o.dump() + "\n";
  }
  std::ostringstream os;
  os << "d,a,b,asym,exact\n"
     << d << ',' << to_decimal(make_real(a, bits), dig) << ',' << to_decimal(make_real(b, bits), dig)
     << ',' << to_decimal(n, dig) << ',' << (exact ? std::to_string(ex) : std::string()) << '\n';
  return os.str();
}

inline std::string cmd_compare(const RunConfig& cfg, unsigned d, double tau_max, double step) {
  detail::require_fast(cfg, d);
  CountingOptions opt;
  opt.asym = cfg.asym();
  const CountingCurve c = build_counting_curve(d, tau_max, step, opt);
  const int dig = std::min(cfg.digits(), 16);
  if (cfg.format == Format::Csv) {
    std::ostringstream os;
    write_counting_csv(os, c, dig);
    return os.str();
  }
  std::vector<std::string> rows;
  for (const auto& r : c.rows) {
    detail::JsonObject o;
    o.num("tau", r.tau, dig).integer("exact", r.exact).num("asym", r.asym, dig)
        .num("err", make_real(r.exact - r.asym, 64), dig);
    rows.push_back(o.dump());
  }
  detail::JsonObject o;
  o.integer("d", d).integer("offset", c.offset).raw("rows", detail::json_array(rows));
  return o.dump() + "\n";
}

inline std::string cmd_largest(const RunConfig& cfg, unsigned d, bool check_exact) {
  const int dig = 16;  // the estimate is solved in double
  const LargestRootEstimate e = largest_root_estimate(d, cfg.precision_bits);
  detail::JsonObject o;
  o.integer("d", d).num("tau_hat", e.tau_hat, dig);
  if (check_exact) {
    detail::require_fast(cfg, d);
    const RefinedRoot r = largest_root(d, cfg.precision_bits);
    o.num("tau_exact", r.tau, cfg.digits());
    o.num("exact_f_over_cbrt",
          make_real((make_real(d, cfg.precision_bits) - r.tau) / boost::multiprecision::cbrt(make_real(d, cfg.precision_bits)),
                    cfg.precision_bits),
          cfg.digits());
  } else {
    o.null("tau_exact").null("exact_f_over_cbrt");
  }
  o.num("f_over_cbrt", e.scaled, dig).num("f_of_d", e.f_of_d, dig).num("seed_f_over_cbrt", e.seed_scaled, dig);
  o.num("arg_I", e.arg_I, dig).integer("phase_offset_quarter_pi", e.phase_offset_quarter_pi);
  return o.dump() + "\n";
}

/// Largest exact root per dimension, printed to 10 decimals.
inline std::string cmd_table1(const RunConfig& cfg, const std::vector<unsigned>& dims) {
  for (unsigned d : dims) detail::require_fast(cfg, d);
  std::ostringstream os;
  std::vector<std::string> rows;
  if (cfg.format == Format::Csv) os << "d,tau_max,f_over_cbrt\n";
  for (unsigned d : dims) {
    const unsigned bits = cfg.precision_bits;
    const RefinedRoot r = largest_root(d, bits);
    const Real scaled = make_real((make_real(d, bits) - r.tau) / boost::multiprecision::cbrt(make_real(d, bits)), bits);
    if (cfg.format == Format::Csv) {
      os << d << ',' << to_fixed(r.tau, 10) << ',' << to_fixed(scaled, 10) << '\n';
    } else {
      detail::JsonObject o;
      o.integer("d", d).raw("tau_max", to_fixed(r.tau, 10)).raw("f_over_cbrt", to_fixed(scaled, 10));
      rows.push_back(o.dump());
    }
  }
  if (cfg.format == Format::Json) return detail::json_array(rows) + "\n";
  return os.str();
}

}  // namespace crosspoly::cli
