#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eqcap/capacity.hpp"
#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/rational.hpp"

namespace eqcap {

using Json = nlohmann::ordered_json;

/// "p" or "p/q".
inline Json rational_to_json(const Rational& q) { return to_string(q); }

/// Accepts a JSON number or a string holding an integer, "p/q" or a decimal.
inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  if (j.is_number()) return parse_rational(j.dump());
  throw InvalidArgument("expected a number or a rational string, got " + j.dump());
}

/// Nearest double: JSON numbers are taken as parsed, decimal strings through strtod.
inline double real_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const Rational q = rational_from_json(j);
  const std::string s = j.get<std::string>();
  if (s.find('/') != std::string::npos) return q.get_d();
  return std::strtod(s.c_str(), nullptr);
}

/// Coefficients from the constant term up.
inline Json poly_to_json(const ExactPoly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(rational_to_json(c));
  return a;
}

inline Json poly_to_json(const RealPoly& p) {
  Json a = Json::array();
  for (double c : p.coeffs()) a.push_back(c);
  return a;
}

inline ExactPoly poly_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("polynomial must be a nonempty coefficient array");
  std::vector<Rational> c;
  for (const auto& v : j) c.push_back(rational_from_json(v));
  return ExactPoly(std::move(c));
}

using BandList = std::vector<std::pair<double, double>>;

inline BandList bands_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("bands must be a nonempty array of [a, b] pairs");
  BandList out;
  for (const auto& b : j) {
    if (!b.is_array() || b.size() != 2) throw InvalidArgument("each band must be a pair [a, b]");
    out.emplace_back(real_from_json(b[0]), real_from_json(b[1]));
  }
  return out;
}

inline Json bands_to_json(const BandList& bands) {
  Json a = Json::array();
  for (const auto& [lo, hi] : bands) a.push_back(Json::array({lo, hi}));
  return a;
}

inline Json bands_to_json(const IntervalUnion& e) {
  BandList b;
  for (const auto& band : e.bands()) b.emplace_back(band.a, band.b);
  return bands_to_json(b);
}

inline BandList parse_bands(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("malformed band list: ") + e.what());
  }
  return bands_from_json(j);
}

inline Json to_json(const CapacityReport& r, double tolerance) {
  Json j;
  j["value"] = r.value;
  j["method"] = to_string(r.method);
  j["tolerance"] = tolerance;
  Json d = Json::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = v;
  j["diagnostics"] = d;
  return j;
}

inline CapacityReport capacity_report_from_json(const Json& j) {
  CapacityReport r;
  r.value = j.at("value").get<double>();
  r.method = parse_capacity_method(j.at("method").get<std::string>());
  if (j.contains("diagnostics")) {
    for (const auto& [k, v] : j.at("diagnostics").items()) r.diagnostics[k] = v.get<std::vector<double>>();
  }
  return r;
}

}  // namespace eqcap
