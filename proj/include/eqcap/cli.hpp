#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eqcap/abel.hpp"
#include "eqcap/capacity.hpp"
#include "eqcap/error.hpp"
#include "eqcap/fekete.hpp"
#include "eqcap/io.hpp"
#include "eqcap/pellabel.hpp"
#include "eqcap/remez.hpp"
#include "eqcap/robinson.hpp"
#include "eqcap/weil.hpp"

namespace eqcap {

/// One invocation of the command-line front end. Unset fields fall back to module defaults.
struct RunConfig {
  std::string subcommand;  // cap, eqm, fekete, energy, pell, robinson, weil
  std::string action;      // pell: detect | construct | rationalize; weil: lift | bound
  std::optional<BandList> bands;
  std::optional<std::string> method;
  std::optional<int> n;
  std::optional<int> r;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> format;
  std::optional<std::string> measure;
  std::optional<std::vector<Rational>> poly;
  std::optional<Rational> M;
  std::optional<Rational> m_prime;
  std::optional<long> q;
  std::optional<std::string> preset;
  std::optional<int> degree;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline Json to_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  if (!c.action.empty()) j["action"] = c.action;
  if (c.bands) j["bands"] = bands_to_json(*c.bands);
  if (c.method) j["method"] = *c.method;
  if (c.n) j["n"] = *c.n;
  if (c.r) j["r"] = *c.r;
  if (c.samples) j["samples"] = *c.samples;
  if (c.seed) j["seed"] = *c.seed;
  if (c.tol) j["tol"] = *c.tol;
  if (c.format) j["format"] = *c.format;
  if (c.measure) j["measure"] = *c.measure;
  if (c.poly) {
    Json a = Json::array();
    for (const auto& v : *c.poly) a.push_back(rational_to_json(v));
    j["poly"] = a;
  }
  if (c.M) j["M"] = rational_to_json(*c.M);
  if (c.m_prime) j["m_prime"] = rational_to_json(*c.m_prime);
  if (c.q) j["q"] = *c.q;
  if (c.preset) j["preset"] = *c.preset;
  if (c.degree) j["degree"] = *c.degree;
  return j;
}

inline RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("problem file must hold a JSON object");
  RunConfig c;
  try {
    c.subcommand = j.value("subcommand", std::string());
    c.action = j.value("action", std::string());
    if (j.contains("bands")) c.bands = bands_from_json(j.at("bands"));
    if (j.contains("method")) c.method = j.at("method").get<std::string>();
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("r")) c.r = j.at("r").get<int>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
    if (j.contains("measure")) c.measure = j.at("measure").get<std::string>();
    if (j.contains("poly")) c.poly = poly_from_json(j.at("poly")).coeffs();
    if (j.contains("M")) c.M = rational_from_json(j.at("M"));
    if (j.contains("m_prime")) c.m_prime = rational_from_json(j.at("m_prime"));
    if (j.contains("q")) c.q = j.at("q").get<long>();
    if (j.contains("preset")) c.preset = j.at("preset").get<std::string>();
    if (j.contains("degree")) c.degree = j.at("degree").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed problem file: ") + e.what());
  }
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open problem file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("malformed problem file: ") + e.what());
  }
  return run_config_from_json(j);
}

/// Closed form when E is a single interval or a symmetric pair, otherwise nothing.
inline std::optional<double> closed_form_for(const IntervalUnion& e) {
  if (e.size() == 1) return capacity_closed_form(shape::Interval{e[0].a, e[0].b});
  if (e.size() == 2) {
    const double scale = 1e-12 * (1.0 + e.diameter());
    if (std::fabs(e[0].a + e[1].b) <= scale && std::fabs(e[0].b + e[1].a) <= scale && e[1].a > 0.0) {
      return capacity_closed_form(shape::SymmetricPair{e[1].a, e[1].b});
    }
  }
  return std::nullopt;
}

/// Capacity of E by the requested route, with its diagnostics table.
inline CapacityReport compute_capacity(const IntervalUnion& e, CapacityMethod method, int n = 0, std::uint64_t seed = 0,
                                       double tol = 1e-13) {
  CapacityReport rep;
  rep.method = method;
  switch (method) {
    case CapacityMethod::closed_form: {
      const auto v = closed_form_for(e);
      if (!v) throw InvalidArgument("no closed form for this band list (interval or symmetric pair only)");
      rep.value = *v;
      break;
    }
    case CapacityMethod::abel_integral: {
      const AbelDatum d = solve_R(e, tol);
      rep.value = d.capacity();
      rep.diagnostics["omega"] = d.omega;
      rep.diagnostics["gap_roots"] = d.roots;
      rep.diagnostics["residual"] = {d.residual};
      rep.diagnostics["condition"] = {d.condition};
      break;
    }
    case CapacityMethod::chebyshev: {
      const int deg = n > 0 ? n : 64;
      const ChebyshevResult c = chebyshev_constant(e, deg, tol);
      rep.value = c.estimate;
      rep.diagnostics["n"] = {static_cast<double>(deg)};
      rep.diagnostics["t_n"] = {c.norm};
      rep.diagnostics["iterations"] = {static_cast<double>(c.iterations)};
      break;
    }
    case CapacityMethod::fekete: {
      const int deg = n > 0 ? n : 8;
      std::vector<double> seq;
      for (int k = 2; k <= deg; ++k) seq.push_back(fekete_diameter(e, k, seed).diameter);
      rep.value = seq.back();
      rep.diagnostics["d_n"] = seq;
      break;
    }
  }
  return rep;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline IntervalUnion config_bands(const RunConfig& c) {
  if (!c.bands) throw InvalidArgument(c.subcommand + " needs --bands");
  return IntervalUnion::make(*c.bands);
}

inline std::string config_format(const RunConfig& c, const std::string& fallback) {
  const std::string f = c.format.value_or(fallback);
  if (f != "json" && f != "csv") throw InvalidArgument("format must be json or csv");
  return f;
}

inline void require_json(const RunConfig& c, const std::string& fmt_name) {
  if (fmt_name != "json") throw InvalidArgument(c.subcommand + " output is JSON only");
}

inline double config_tol(const RunConfig& c, double fallback) {
  const double t = c.tol.value_or(fallback);
  if (!(t > 0.0)) throw InvalidArgument("tolerance must be positive");
  return t;
}

inline int run_cap(const RunConfig& c, std::ostream& out) {
  const IntervalUnion e = config_bands(c);
  const auto method = parse_capacity_method(c.method.value_or("abel_integral"));
  const std::string f = config_format(c, "json");
  double tol = 0.0;
  if (method == CapacityMethod::abel_integral) tol = config_tol(c, 1e-13);
  if (method == CapacityMethod::chebyshev) tol = config_tol(c, 1e-12);
  const CapacityReport rep = compute_capacity(e, method, c.n.value_or(0), c.seed.value_or(0), tol > 0 ? tol : 1e-13);
  if (f == "csv") {
    out << "method,value,tolerance\n" << to_string(rep.method) << "," << fmt(rep.value) << "," << fmt(tol) << "\n";
  } else {
    out << to_json(rep, tol).dump(2) << "\n";
  }
  return 0;
}

inline int run_eqm(const RunConfig& c, std::ostream& out) {
  const IntervalUnion e = config_bands(c);
  const double tol = config_tol(c, 1e-13);
  const int samples = c.samples.value_or(5);
  if (samples < 1) throw InvalidArgument("samples must be positive");
  const BandDensity mu(solve_R(e, tol));
  std::vector<std::pair<double, double>> pts;
  for (const auto& b : e.bands()) {
    for (int i = 1; i <= samples; ++i) {
      const double x = b.a + b.length() * i / (samples + 1);
      pts.emplace_back(x, mu(x));
    }
  }
  if (config_format(c, "csv") == "csv") {
    out << "x,density\n";
    for (const auto& [x, v] : pts) out << fmt(x) << "," << fmt(v) << "\n";
    return 0;
  }
  Json j;
  j["method"] = "abel_integral";
  j["tolerance"] = tol;
  Json masses = Json::array();
  for (std::size_t k = 0; k < e.size(); ++k) masses.push_back(mu.band_mass(k));
  j["band_mass"] = masses;
  Json p = Json::array();
  for (const auto& [x, v] : pts) p.push_back(Json::array({x, v}));
  j["density"] = p;
  out << j.dump(2) << "\n";
  return 0;
}

inline int run_fekete(const RunConfig& c, std::ostream& out) {
  const IntervalUnion e = config_bands(c);
  const int n = c.n.value_or(8);
  const std::uint64_t seed = c.seed.value_or(0);
  const FeketeResult res = fekete_diameter(e, n, seed);
  if (config_format(c, "json") == "csv") {
    out << "index,point\n";
    for (std::size_t i = 0; i < res.points.size(); ++i) out << i << "," << fmt(res.points[i]) << "\n";
    return 0;
  }
  Json j;
  j["method"] = "fekete";
  j["n"] = n;
  j["seed"] = seed;
  j["value"] = res.diameter;
  j["log_product"] = res.log_product;
  j["points"] = res.points;
  out << j.dump(2) << "\n";
  return 0;
}

inline int run_energy(const RunConfig& c, std::ostream& out) {
  const IntervalUnion e = config_bands(c);
  require_json(c, config_format(c, "json"));
  const double tol = config_tol(c, 1e-9);
  const std::string measure = c.measure.value_or("uniform");
  Json j;
  j["measure"] = measure;
  j["method"] = "quadrature";
  j["tolerance"] = tol;
  if (measure == "uniform") {
    std::vector<DensityPiece> pieces;
    const double h = 1.0 / e.total_length();
    for (const auto& b : e.bands()) pieces.push_back({b.a, b.b, [h](double, double, double) { return h; }});
    j["value"] = energy(Density(std::move(pieces)), tol);
    if (e.size() == 1) j["reference"] = std::log(e[0].length()) - 1.5;
  } else if (measure == "equilibrium") {
    const BandDensity mu(solve_R(e));
    j["value"] = energy(mu.as_density(), tol);
    j["reference"] = mu.datum().vE;
  } else {
    throw InvalidArgument("measure must be uniform or equilibrium");
  }
  out << j.dump(2) << "\n";
  return 0;
}

inline Json pa_to_json(const PellAbelDatum& pa) {
  Json j;
  j["exact"] = pa.exact();
  if (pa.exact()) {
    j["P"] = poly_to_json(*pa.P_exact);
    j["Q"] = poly_to_json(*pa.Q_exact);
    j["D"] = poly_to_json(*pa.D_exact);
    j["M"] = rational_to_json(*pa.M_exact);
  } else {
    j["P"] = poly_to_json(pa.P);
    j["Q"] = poly_to_json(pa.Q);
    j["D"] = poly_to_json(pa.D);
    j["M"] = pa.M;
  }
  j["r"] = pa.r;
  j["r_j"] = pa.r_j;
  j["bands"] = bands_to_json(pa.E);
  return j;
}

inline Json structure_to_json(const StructureReport& rep) {
  Json a = Json::array();
  for (const auto& cl : rep.clauses) {
    Json x;
    x["clause"] = cl.name;
    x["passed"] = cl.passed;
    x["detail"] = cl.detail;
    a.push_back(x);
  }
  return a;
}

inline int run_pell(const RunConfig& c, std::ostream& out) {
  const IntervalUnion e = config_bands(c);
  require_json(c, config_format(c, "json"));
  const double tol = config_tol(c, 1e-9);
  const AbelDatum datum = solve_R(e);
  const auto det = detect_pell_abel(datum, c.n.value_or(64), tol);
  Json j;
  j["method"] = "abel_integral";
  j["tolerance"] = tol;
  if (c.action == "detect" || c.action.empty()) {
    j["omega"] = datum.omega;
    j["detected"] = det.has_value();
    if (det) {
      j["r"] = det->r;
      j["r_j"] = det->r_j;
    }
    out << j.dump(2) << "\n";
    return 0;
  }
  int r = c.r.value_or(0);
  if (r == 0) {
    if (!det) throw CertificationFailure("rotation numbers are not rational with small denominator; pass --r");
    r = det->r;
  }
  const PellAbelDatum pa = construct_pa_polynomial(datum, r, tol);
  if (c.action == "construct") {
    const StructureReport rep = certify_structure(pa);
    j["datum"] = pa_to_json(pa);
    j["capacity"] = std::pow(pa.lambda(), 1.0 / pa.r);
    j["clauses"] = structure_to_json(rep);
    j["passed"] = rep.all_passed();
    out << j.dump(2) << "\n";
    return rep.all_passed() ? 0 : 3;
  }
  if (c.action == "rationalize") {
    if (!c.m_prime) throw InvalidArgument("rationalize needs --m-prime");
    const RationalizeResult res = rationalize(pa, *c.m_prime);
    j["datum"] = pa_to_json(res.pa_prime);
    j["bits"] = res.bits;
    j["capacity"] = std::pow(res.pa_prime.lambda(), 1.0 / res.pa_prime.r);
    out << j.dump(2) << "\n";
    return 0;
  }
  throw InvalidArgument("pell action must be detect, construct or rationalize");
}

inline int run_robinson(const RunConfig& c, std::ostream& out) {
  RobinsonInstance inst;
  if (c.preset) {
    inst = robinson_preset(*c.preset);
  } else if (c.poly && c.M) {
    inst = make_robinson_instance(ExactPoly(*c.poly), *c.M);
  } else {
    throw InvalidArgument("robinson needs --preset or --poly with --M");
  }
  const int target = c.degree.value_or(2 * inst.r);
  const RobinsonResult res = generate(inst, target);
  const BandDensity mu(solve_R(inst.E()));
  std::vector<Atom> atoms;
  for (double x : res.certificate.roots) atoms.push_back({x, 1.0});
  const double ks = kolmogorov_distance(DiscreteMeasure(atoms), mu);
  if (config_format(c, "json") == "csv") {
    out << "index,root,bracket_lo,bracket_hi\n";
    for (std::size_t i = 0; i < res.certificate.roots.size(); ++i) {
      out << i << "," << fmt(res.certificate.roots[i]) << "," << to_string(res.certificate.brackets[i].lo) << ","
          << to_string(res.certificate.brackets[i].hi) << "\n";
    }
    return 0;
  }
  Json j;
  j["method"] = "exact";
  j["n"] = res.n;
  j["degree"] = res.P_prime.degree();
  j["lambda"] = rational_to_json(inst.lambda);
  j["ell"] = inst.ell;
  j["coefficients"] = poly_to_json(res.P_prime);
  Json corr;
  corr["zero"] = res.correction.is_zero();
  corr["max_abs_c"] = rational_to_json(res.correction.max_abs_c);
  corr["sup_C"] = res.correction.sup_C;
  corr["analytic_bound"] = res.correction.analytic_bound;
  corr["two_lambda_n"] = res.correction.two_lambda_n;
  j["correction"] = corr;
  Json cert;
  cert["valid"] = res.certificate.valid;
  cert["per_band"] = res.certificate.per_band;
  Json br = Json::array();
  for (const auto& b : res.certificate.brackets) br.push_back(Json::array({to_string(b.lo), to_string(b.hi)}));
  cert["brackets"] = br;
  cert["roots"] = res.certificate.roots;
  j["certificate"] = cert;
  j["kolmogorov"] = ks;
  out << j.dump(2) << "\n";
  return 0;
}

inline int run_weil(const RunConfig& c, std::ostream& out) {
  require_json(c, config_format(c, "json"));
  const long q = c.q.value_or(0);
  if (q < 2) throw InvalidArgument("weil needs --q >= 2");
  Json j;
  j["q"] = q;
  if (c.action == "lift") {
    if (!c.poly) throw InvalidArgument("weil lift needs --poly");
    const ExactPoly pi(*c.poly);
    const ExactPoly pc = weil_lift(pi, q);
    const double defect = modulus_defect(pc, q);
    const bool push = pushforward_check(pc, pi, q);
    j["method"] = "exact";
    j["tolerance"] = 1e-10;
    j["input"] = poly_to_json(pi);
    j["lift"] = poly_to_json(pc);
    j["lift_text"] = to_string(pc);
    j["modulus_defect"] = defect;
    j["pushforward"] = push;
    out << j.dump(2) << "\n";
    return (push && defect <= 1e-10) ? 0 : 3;
  }
  if (c.action == "bound") {
    const CircleSet cs = c.bands ? CircleSet::make(q, IntervalUnion::make(*c.bands)) : CircleSet::full(q);
    const SupportBound sb = support_capacity_bound(cs);
    j["method"] = "abel_integral";
    j["tolerance"] = 1e-13;
    j["bands"] = bands_to_json(cs.x_bands);
    j["cap"] = sb.cap;
    j["bound"] = sb.bound;
    j["satisfied"] = sb.satisfied;
    out << j.dump(2) << "\n";
    return 0;
  }
  throw InvalidArgument("weil action must be lift or bound");
}

}  // namespace detail

/// Executes one run, writing the artifact to `out` only on completion; errors go to
/// `err`. Exit status: 0 ok, 2 bad input, 3 certification failure, 4 non-convergence.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::ostringstream buf;
  int status = 0;
  try {
    if (c.subcommand == "cap") status = detail::run_cap(c, buf);
    else if (c.subcommand == "eqm") status = detail::run_eqm(c, buf);
    else if (c.subcommand == "fekete") status = detail::run_fekete(c, buf);
    else if (c.subcommand == "energy") status = detail::run_energy(c, buf);
    else if (c.subcommand == "pell") status = detail::run_pell(c, buf);
    else if (c.subcommand == "robinson") status = detail::run_robinson(c, buf);
    else if (c.subcommand == "weil") status = detail::run_weil(c, buf);
    else throw InvalidArgument("unknown subcommand '" + c.subcommand + "'");
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CertificationFailure& e) {
    err << "certification failure: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceFailure& e) {
    err << "convergence failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  out << buf.str();
  return status;
}

}  // namespace eqcap
