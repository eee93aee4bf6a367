#include "crosspoly/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace crosspoly;

namespace {

// "100,200" or "100..1000:100", mixed freely
std::vector<unsigned> parse_dims(const std::string& text) {
  std::vector<unsigned> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<unsigned>(std::stoul(item)));
      continue;
    }
    const auto colon = item.find(':', dots);
    const unsigned lo = std::stoul(item.substr(0, dots));
    const unsigned hi = std::stoul(item.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2));
    const unsigned step = colon == std::string::npos ? 1 : std::stoul(item.substr(colon + 1));
    if (step == 0) throw RangeError("dims: zero step");
    for (unsigned d = lo; d <= hi; d += step) out.push_back(d);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ehrhart polynomials of cross-polytopes: exact roots and asymptotics"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::RunConfig cfg;
  try {
    cfg = cli::RunConfig::from_env();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::string format = "csv";
  app.add_option("--precision", cfg.precision_bits, "working precision in bits")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "distance of Re x from 0 and 1")->capture_default_str();
  app.add_option("--out", cfg.out_path, "write output to this file");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--slow", cfg.slow, "allow exact roots above d = 300");

  unsigned dim = 0;
  double re = 0.5, im = 0, a = 0, b = 0, step = 0.5, tau_max = 0;
  bool exact = false, check_exact = false;
  std::string dims;

  auto* poly = app.add_subcommand("poly", "exact coefficients as JSON");
  poly->add_option("--dim", dim)->required();
  auto* roots = app.add_subcommand("roots", "certified roots on the critical line");
  roots->add_option("--dim", dim)->required();
  auto* asym = app.add_subcommand("asym", "asymptotic F(d, x) and its parts");
  asym->add_option("--dim", dim)->required();
  asym->add_option("--re", re)->capture_default_str();
  asym->add_option("--im", im)->required();
  auto* count = app.add_subcommand("count", "asymptotic root count on [a, b]");
  count->add_option("--dim", dim)->required();
  count->add_option("--a", a)->capture_default_str();
  count->add_option("--b", b)->required();
  count->add_option("--step", step)->capture_default_str();
  count->add_flag("--exact", exact, "also count certified roots");
  auto* compare = app.add_subcommand("compare", "exact vs asymptotic counting curve");
  compare->add_option("--dim", dim)->required();
  compare->add_option("--max", tau_max)->required();
  compare->add_option("--step", step)->capture_default_str();
  auto* largest = app.add_subcommand("largest", "largest-root predictor");
  largest->add_option("--dim", dim)->required();
  largest->add_flag("--check-exact", check_exact, "compare with the certified largest root");
  auto* table1 = app.add_subcommand("table1", "largest root and (d - tau)/cbrt(d) per dimension");
  table1->add_option("--dims", dims, "e.g. 100,200,300 or 100..1000:100");

  CLI11_PARSE(app, argc, argv);
  cfg.format = format == "json" ? cli::Format::Json : cli::Format::Csv;

  try {
    cfg.validate();
    std::string text;
    if (*poly)
      text = cli::cmd_poly(cfg, dim);
    else if (*roots)
      text = cli::cmd_roots(cfg, dim);
    else if (*asym)
      text = cli::cmd_asym(cfg, dim, re, im);
    else if (*count)
      text = cli::cmd_count(cfg, dim, a, b, step, exact);
    else if (*compare)
      text = cli::cmd_compare(cfg, dim, tau_max, step);
    else if (*largest)
      text = cli::cmd_largest(cfg, dim, check_exact);
    else if (*table1)
      text = cli::cmd_table1(cfg, parse_dims(dims));

    if (cfg.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + cfg.out_path);
      f << text;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
