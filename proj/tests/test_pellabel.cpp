#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eqcap/abel.hpp"
#include "eqcap/pellabel.hpp"
#include "eqcap/remez.hpp"

using namespace eqcap;
using Catch::Approx;

namespace {

const IntervalUnion& pair_set() {
  static const auto e = IntervalUnion::make({{-std::sqrt(8.0), -std::sqrt(2.0)}, {std::sqrt(2.0), std::sqrt(8.0)}});
  return e;
}

}  // namespace

TEST_CASE("detection from rotation numbers") {
  auto det = detect_pell_abel(std::vector<double>{0.25, 0.75});
  REQUIRE(det);
  CHECK(det->r == 4);
  CHECK(det->r_j == std::vector<int>{1, 3});
  CHECK_FALSE(detect_pell_abel(std::vector<double>{1.0 / std::sqrt(2.0), 1.0 - 1.0 / std::sqrt(2.0)}, 64));
  const auto pair = detect_pell_abel(solve_R(pair_set()));
  REQUIRE(pair);
  CHECK(pair->r == 2);
  CHECK_FALSE(detect_pell_abel(solve_R(IntervalUnion::make({{0.0, 1.0}, {1.3, 3.0}})), 16));
}

TEST_CASE("synthesis on the symmetric pair is exact") {
  const auto pa = construct_pa_polynomial(solve_R(pair_set()), 2);
  REQUIRE(pa.exact());
  CHECK(*pa.P_exact == exact_poly({-5, 0, 1}));
  CHECK(*pa.Q_exact == exact_poly({1}));
  CHECK(*pa.M_exact == 3);
  const ExactPoly d = exact_poly({-2, 0, 1}) * exact_poly({-8, 0, 1});
  CHECK(*pa.P_exact * *pa.P_exact - d == ExactPoly::constant(Rational(9)));
  CHECK(std::pow(pa.lambda(), 0.5) == Approx(std::sqrt(1.5)).epsilon(1e-12));
  const auto rep = certify_structure(pa);
  for (const auto& c : rep.clauses) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  CHECK(rep.find("identity"));
  CHECK(rep.find("alternation"));
}

TEST_CASE("Chebyshev polynomials of [-2, 2] are Pell-Abel solutions") {
  const auto d = solve_R(IntervalUnion::single(-2.0, 2.0));
  for (int r = 1; r <= 6; ++r) {
    const auto pa = construct_pa_polynomial(d, r);
    REQUIRE(pa.exact());
    // T_r(t + 1/t) = t^r + t^-r has sup norm 2 on [-2, 2].
    CHECK(*pa.M_exact == 2);
    CHECK(certify_structure(pa).all_passed());
  }
  const auto t4 = construct_pa_polynomial(d, 4);
  CHECK(*t4.P_exact == exact_poly({2, 0, -4, 0, 1}));
  CHECK(*t4.Q_exact == exact_poly({0, -2, 0, 1}));
}

TEST_CASE("synthesized P is the Chebyshev polynomial of E") {
  for (const auto& e : {pair_set(), IntervalUnion::make({{0, 1}, {2, 3}})}) {
    const auto d = solve_R(e);
    const auto det = detect_pell_abel(d);
    REQUIRE(det);
    const auto pa = construct_pa_polynomial(d, det->r);
    const auto cheb = chebyshev_constant(e, det->r);
    for (int k = 0; k <= det->r; ++k) CHECK(pa.P[static_cast<std::size_t>(k)] == Approx(cheb.poly[static_cast<std::size_t>(k)]).margin(1e-6));
    CHECK(cheb.norm == Approx(pa.M).epsilon(1e-8));
  }
}

TEST_CASE("a corrupted datum fails the structure certificate") {
  auto pa = construct_pa_polynomial(solve_R(pair_set()), 2);
  pa.M = 2.5;
  pa.M_exact.reset();
  pa.P_exact.reset();
  const auto rep = certify_structure(pa);
  CHECK_FALSE(rep.all_passed());
  CHECK_FALSE(rep.find("identity")->passed);
}

TEST_CASE("construction rejects a degree that is not a Pell-Abel degree") {
  const auto d = solve_R(IntervalUnion::make({{0.0, 1.0}, {1.3, 3.0}}));
  CHECK_THROWS_AS(construct_pa_polynomial(d, 3), InvalidArgument);
}

TEST_CASE("rationalization keeps the interlacing") {
  const auto pa = construct_pa_polynomial(solve_R(pair_set()), 2);
  const auto res = rationalize(pa, Rational(5, 2));
  CHECK(res.P_prime == exact_poly({-5, 0, 1}));
  CHECK(res.bits == 0);
  REQUIRE(res.E_prime.size() == 2);
  CHECK(res.E_prime[1].a == Approx(std::sqrt(2.5)).epsilon(1e-12));
  CHECK(res.E_prime[1].b == Approx(std::sqrt(7.5)).epsilon(1e-12));
  CHECK(solve_R(res.E_prime).capacity() == Approx(std::sqrt(1.25)).epsilon(1e-10));
  CHECK(certify_structure(res.pa_prime).all_passed());

  const auto t3 = construct_pa_polynomial(solve_R(IntervalUnion::single(-2.0, 2.0)), 3);
  const auto r3 = rationalize(t3, Rational(3, 2));
  CHECK(r3.P_prime == exact_poly({0, -3, 0, 1}));
  CHECK(r3.E_prime.size() == 3);
  CHECK_THROWS_AS(rationalize(pa, Rational(4)), InvalidArgument);
}
