#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "eqcap/cli.hpp"

using namespace eqcap;
using Catch::Approx;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_config(const RunConfig& c) {
  std::ostringstream out, err;
  const int status = run(c, out, err);
  return {status, out.str(), err.str()};
}

RunConfig config(const std::string& sub, BandList bands = {}) {
  RunConfig c;
  c.subcommand = sub;
  if (!bands.empty()) c.bands = std::move(bands);
  return c;
}

}  // namespace

TEST_CASE("cap reports value, method and tolerance") {
  auto c = config("cap", {{-2.0, 2.0}});
  c.method = "abel";
  const auto o = run_config(c);
  REQUIRE(o.status == 0);
  const auto j = Json::parse(o.out);
  CHECK(j["value"].get<double>() == Approx(1.0).epsilon(1e-12));
  CHECK(j["method"] == "abel_integral");
  CHECK(j.contains("tolerance"));
  c.method = "closed_form";
  CHECK(Json::parse(run_config(c).out)["value"].get<double>() == 1.0);
  c.format = "csv";
  CHECK(run_config(c).out.rfind("method,value,tolerance\nclosed_form,1,", 0) == 0);
}

TEST_CASE("eqm emits the arcsine density as CSV") {
  auto c = config("eqm", {{-2.0, 2.0}});
  c.samples = 5;
  const auto o = run_config(c);
  REQUIRE(o.status == 0);
  CHECK(o.out.find("x,density\n") == 0);
  CHECK(o.out.find("\n0,0.1591549430918") != std::string::npos);
}

TEST_CASE("robinson preset emits integer coefficients and a certificate") {
  auto c = config("robinson");
  c.preset = "x2m6";
  c.degree = 16;
  const auto o = run_config(c);
  REQUIRE(o.status == 0);
  const auto j = Json::parse(o.out);
  CHECK(j["degree"] == 16);
  CHECK(j["coefficients"].size() == 17);
  for (const auto& v : j["coefficients"]) CHECK(v.get<std::string>().find('/') == std::string::npos);
  CHECK(j["certificate"]["valid"] == true);
  CHECK(j["certificate"]["brackets"].size() == 16);
}

TEST_CASE("pell and weil subcommands") {
  const BandList pair{{-std::sqrt(8.0), -std::sqrt(2.0)}, {std::sqrt(2.0), std::sqrt(8.0)}};
  auto p = config("pell", pair);
  p.action = "construct";
  auto o = run_config(p);
  REQUIRE(o.status == 0);
  auto j = Json::parse(o.out);
  CHECK(j["datum"]["P"] == Json::array({"-5", "0", "1"}));
  CHECK(j["passed"] == true);
  p.action = "rationalize";
  p.m_prime = Rational(5, 2);
  o = run_config(p);
  REQUIRE(o.status == 0);
  CHECK(Json::parse(o.out)["capacity"].get<double>() == Approx(std::sqrt(1.25)).epsilon(1e-12));

  auto w = config("weil");
  w.action = "lift";
  w.q = 2;
  w.poly = std::vector<Rational>{-1, 1};
  o = run_config(w);
  REQUIRE(o.status == 0);
  CHECK(Json::parse(o.out)["lift_text"] == "X^2 - X + 2");
  w.action = "bound";
  j = Json::parse(run_config(w).out);
  CHECK(j["cap"].get<double>() == Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(j["satisfied"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run_config(config("nope")).status == 2);
  CHECK(run_config(config("cap")).status == 2);
  auto bad_tol = config("cap", {{0.0, 1.0}});
  bad_tol.tol = -1.0;
  CHECK(run_config(bad_tol).status == 2);
  auto w = config("weil");
  w.action = "lift";
  w.q = 2;
  w.poly = std::vector<Rational>{-3, 1};
  const auto o = run_config(w);
  CHECK(o.status == 2);
  CHECK(o.out.empty());
  CHECK_FALSE(o.err.empty());
  auto never = config("robinson");
  never.poly = std::vector<Rational>{-5, 0, 1};
  never.M = Rational(5, 2);
  CHECK(run_config(never).status == 3);
  auto pell = config("pell", {{0.0, 1.0}, {1.3, 3.0}});
  pell.action = "construct";
  pell.n = 8;
  CHECK(run_config(pell).status == 3);
}

TEST_CASE("output is byte-identical across runs") {
  auto c = config("fekete", {{-2.0, 0.0}, {1.0, 2.0}});
  c.n = 6;
  c.seed = 42;
  CHECK(run_config(c).out == run_config(c).out);
  auto r = config("robinson");
  r.preset = "x2m6";
  r.degree = 8;
  CHECK(run_config(r).out == run_config(r).out);
}

TEST_CASE("problem files round-trip") {
  std::vector<RunConfig> configs;
  auto a = config("cap", {{-2.0, 2.0}, {3.0, 4.5}});
  a.method = "chebyshev";
  a.n = 12;
  a.tol = 1e-11;
  configs.push_back(a);
  auto b = config("robinson");
  b.poly = std::vector<Rational>{-6, 0, 1};
  b.M = Rational(4);
  b.degree = 8;
  configs.push_back(b);
  auto p = config("pell", {{-1.0, 0.0}, {0.5, 1.0}});
  p.action = "rationalize";
  p.m_prime = Rational(7, 3);
  p.r = 3;
  configs.push_back(p);
  auto w = config("weil");
  w.action = "lift";
  w.q = 3;
  w.poly = std::vector<Rational>{Rational(1, 2), 0, 1};
  configs.push_back(w);
  for (const char* s : {"eqm", "fekete", "energy"}) {
    auto c = config(s, {{0.1, 0.9}});
    c.samples = 3;
    c.seed = 5;
    c.measure = "equilibrium";
    c.format = "json";
    configs.push_back(c);
  }
  for (const auto& c : configs) {
    const Json j = to_json(c);
    const RunConfig back = run_config_from_json(Json::parse(j.dump()));
    CHECK(back == c);
    CHECK(to_json(back).dump() == j.dump());
  }
  CHECK_THROWS_AS(run_config_from_json(Json::parse(R"({"bands": [[1]]})")), InvalidArgument);
  CHECK(rational_from_json(Json("3/9")) == Rational(1, 3));
  CHECK(rational_from_json(Json(0.25)) == Rational(1, 4));
}
