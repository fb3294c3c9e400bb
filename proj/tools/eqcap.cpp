#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eqcap/cli.hpp"

namespace {

template <class T>
void override(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eqcap: capacities, equilibrium measures, Pell-Abel and integer polynomials on interval unions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string problem, output, action;
  std::optional<std::string> bands, method, format, measure, poly, m, m_prime, preset;
  std::optional<int> n, r, samples, degree;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<long> q;

  app.add_option("--problem", problem, "JSON problem file; flags override its fields");
  app.add_option("--output", output, "output path (default stdout)");
  app.add_option("--format", format, "json or csv");
  app.add_option("--bands", bands, "band list as JSON, e.g. \"[[-2,2]]\"");
  app.add_option("--tol", tol, "tolerance override");

  auto* cap = app.add_subcommand("cap", "logarithmic capacity");
  cap->add_option("--method", method, "closed_form | abel_integral | chebyshev | fekete");
  cap->add_option("--n", n, "degree for chebyshev or fekete");
  cap->add_option("--seed", seed, "fekete multistart seed");

  auto* eqm = app.add_subcommand("eqm", "equilibrium density samples");
  eqm->add_option("--samples", samples, "interior samples per band");

  auto* fek = app.add_subcommand("fekete", "transfinite-diameter oracle d_n");
  fek->add_option("--n", n, "number of points (2..12)");
  fek->add_option("--seed", seed, "multistart seed");

  auto* en = app.add_subcommand("energy", "logarithmic energy of a measure on the bands");
  en->add_option("--measure", measure, "uniform | equilibrium");

  auto* pell = app.add_subcommand("pell", "Pell-Abel detection and synthesis");
  pell->add_option("action", action, "detect | construct | rationalize")->required();
  pell->add_option("--r", r, "degree of P");
  pell->add_option("--n", n, "largest denominator tried by detection");
  pell->add_option("--m-prime", m_prime, "rational M' for rationalize");

  auto* rob = app.add_subcommand("robinson", "integer polynomials with all roots in E");
  rob->add_option("--preset", preset, "x2m6 | x2m5");
  rob->add_option("--poly", poly, "coefficients of P from the constant term, JSON");
  rob->add_option("--M", m, "rational M");
  rob->add_option("--degree", degree, "target degree");

  auto* weil = app.add_subcommand("weil", "circle transfer and Weil lifts");
  weil->add_option("action", action, "lift | bound")->required();
  weil->add_option("--q", q, "q (circle radius sqrt q)");
  weil->add_option("--poly", poly, "coefficients of P_I from the constant term, JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  eqcap::RunConfig cfg;
  try {
    if (!problem.empty()) cfg = eqcap::load_run_config(problem);
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!action.empty()) cfg.action = action;
    if (bands) cfg.bands = eqcap::parse_bands(*bands);
    override(cfg.method, method);
    override(cfg.format, format);
    override(cfg.measure, measure);
    override(cfg.preset, preset);
    override(cfg.n, n);
    override(cfg.r, r);
    override(cfg.samples, samples);
    override(cfg.degree, degree);
    override(cfg.seed, seed);
    override(cfg.tol, tol);
    override(cfg.q, q);
    if (poly) cfg.poly = eqcap::poly_from_json(eqcap::Json::parse(*poly)).coeffs();
    if (m) cfg.M = eqcap::parse_rational(*m);
    if (m_prime) cfg.m_prime = eqcap::parse_rational(*m_prime);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (output.empty()) return eqcap::run(cfg, std::cout, std::cerr);
  std::ostringstream buf;
  const int status = eqcap::run(cfg, buf, std::cerr);
  std::ofstream out(output);
  if (!out) {
    std::cerr << "error: cannot write '" << output << "'\n";
    return 2;
  }
  out << buf.str();
  return status;
}
