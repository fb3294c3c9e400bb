#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "eqcap/density.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/measure.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/quadrature.hpp"
#include "eqcap/rational.hpp"
#include "eqcap/roots.hpp"

using namespace eqcap;
using Catch::Approx;

namespace {

// Sylvester determinant over the rationals, as an independent resultant.
Rational sylvester_resultant(const ExactPoly& a, const ExactPoly& b) {
  const int m = a.degree(), n = b.degree();
  const int size = m + n;
  std::vector<std::vector<Rational>> s(size, std::vector<Rational>(size, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k) s[i][i + k] = a[static_cast<std::size_t>(m - k)];
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k) s[n + i][i + k] = b[static_cast<std::size_t>(n - k)];
  Rational det = 1;
  for (int c = 0; c < size; ++c) {
    int piv = c;
    while (piv < size && sgn(s[piv][c]) == 0) ++piv;
    if (piv == size) return 0;
    if (piv != c) {
      std::swap(s[piv], s[c]);
      det = -det;
    }
    det *= s[c][c];
    for (int r = c + 1; r < size; ++r) {
      const Rational f = s[r][c] / s[c][c];
      for (int k = c; k < size; ++k) s[r][k] -= f * s[c][k];
    }
  }
  return det;
}

ExactPoly random_int_poly(std::mt19937_64& rng, int deg, bool monic) {
  std::uniform_int_distribution<int> coef(-6, 6);
  std::vector<Rational> c;
  for (int i = 0; i < deg; ++i) c.push_back(coef(rng));
  int lead = monic ? 1 : coef(rng);
  if (lead == 0) lead = 2;
  c.push_back(lead);
  return ExactPoly(std::move(c));
}

}  // namespace

TEST_CASE("rational parsing and rounding") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-1.25e-1") == Rational(-1, 8));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidArgument);
  CHECK(to_string(Rational(3, 4)) == "3/4");
  CHECK(to_string(parse_rational("4/2")) == "2");
  for (int num = -20; num <= 20; ++num) {
    const Rational q(num, 4);
    const Rational frac = q - Rational(round_half_down(q));
    CHECK(frac >= Rational(-1, 2));
    CHECK(frac < Rational(1, 2));
  }
  CHECK(approximate_rational(0.3333333333333333, 100) == Rational(1, 3));
  CHECK(approximate_rational(M_PI, 1000) == Rational(355, 113));
  CHECK(round_dyadic(0.3, 8) == Rational(77, 256));
  CHECK(exact(0.5) == Rational(1, 2));
  CHECK(log_abs(Integer(Integer(1) << 2000)) == Approx(2000 * std::log(2.0)));
}

TEST_CASE("interval unions merge and expose gaps") {
  const auto e = IntervalUnion::make({{2, 3}, {0, 1}, {0.5, 1.5}});
  REQUIRE(e.size() == 2);
  CHECK(e[0].b == 1.5);
  CHECK(e.gap(1).a == 1.5);
  CHECK(e.gap(1).b == 2.0);
  CHECK(e.genus() == 1);
  CHECK(e.total_length() == Approx(2.5));
  CHECK(e.contains(2.5));
  CHECK_FALSE(e.contains(1.75));
  CHECK_THROWS_AS(IntervalUnion::make({{1, 0}}), InvalidArgument);
  for (int level = 0; level <= 6; ++level) {
    const auto c = cantor_prefix(level);
    CHECK(c.size() == (1u << level));
    CHECK(c.total_length() == Approx(std::pow(2.0 / 3.0, level)));
  }
}

TEST_CASE("polynomial arithmetic identities") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const ExactPoly a = random_int_poly(rng, 5, false);
    ExactPoly b = random_int_poly(rng, 3, true);
    const auto [q, r] = divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    const ExactPoly g = gcd(a * b, b * b);
    CHECK((b % g).is_zero());
  }
  const ExactPoly p = exact_poly({-1, 0, 1});
  CHECK(to_string(p) == "X^2 - 1");
  CHECK(p.compose(exact_poly({1, 1})) == exact_poly({0, 2, 1}));
  CHECK(is_squarefree(p));
  CHECK_FALSE(is_squarefree(p * p));
  const auto dec = squarefree_decomposition(p * p * exact_poly({0, 1}));
  int total = 0;
  for (const auto& [f, m] : dec) total += f.degree() * m;
  CHECK(total == 5);
}

TEST_CASE("resultant agrees with the Sylvester determinant") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const ExactPoly a = random_int_poly(rng, 1 + t % 4, true);
    const ExactPoly b = random_int_poly(rng, 1 + (t / 4) % 3, false);
    CHECK(resultant(a, b) == sylvester_resultant(a, b));
  }
  CHECK(resultant(exact_poly({-1, 1}), exact_poly({-1, 0, 1})) == 0);
}

TEST_CASE("Sturm counting and exact isolation") {
  const ExactPoly p = exact_poly({-2, 0, 1}) * exact_poly({-3, 1}) * exact_poly({1, 0, 1});
  SturmSequence s(p);
  CHECK(s.count_real() == 3);
  CHECK(s.count(Rational(0), Rational(2)) == 1);
  const auto roots = isolate_all_real_roots(p);
  REQUIRE(roots.size() == 3);
  const auto fine = refine(p, roots[0], Rational(1, Integer(1) << 60));
  CHECK(fine.midpoint() == Approx(-std::sqrt(2.0)).epsilon(1e-15));
  const auto cz = complex_roots(p);
  CHECK(cz.size() == 5);
  const auto near = isolate_real_roots(to_real(p), IntervalUnion::single(0.0, 4.0));
  REQUIRE(near.size() == 2);
  CHECK(near[1].midpoint() == Approx(3.0));
}

TEST_CASE("root measures carry multiplicity") {
  const ExactPoly p = exact_poly({-1, 1}) * exact_poly({-1, 1}) * exact_poly({2, 1});
  const auto mu = root_measure(p);
  REQUIRE(mu.size() == 2);
  CHECK(mu.total_mass() == Approx(1.0));
  CHECK(mu.is_real());
  double w1 = 0.0;
  for (const auto& a : mu.atoms()) if (std::abs(a.location - 1.0) < 1e-9) w1 = a.weight;
  CHECK(w1 == Approx(2.0 / 3.0));
  CHECK_THROWS_AS(root_measure(ExactPoly::constant(Rational(3))), InvalidArgument);
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {1, 2, 5, 16, 64}) {
    const auto& rule = gauss_legendre(n);
    double wsum = 0.0;
    for (double w : rule.w) wsum += w;
    CHECK(wsum == Approx(2.0).epsilon(1e-14));
    const int deg = 2 * n - 1;
    const double got = gauss_fixed([deg](double x) { return std::pow(x, deg - (deg % 2)); }, -1.0, 1.0, n);
    CHECK(got == Approx(2.0 / (deg - (deg % 2) + 1)).epsilon(1e-12));
  }
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) == Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  const double arcsine = integrate_endpoint_singular(
      [](double, double dl, double dr) { return 1.0 / std::sqrt(dl * dr); }, 0.0, 1.0);
  CHECK(arcsine == Approx(M_PI).epsilon(1e-12));
  const double logsing = integrate_endpoint_singular([](double, double dl, double) { return std::log(dl); }, 0.0, 1.0);
  CHECK(logsing == Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("densities integrate and produce potentials") {
  const Density u = Density::uniform(0.0, 2.0);
  CHECK(u.mass() == Approx(1.0));
  CHECK(u.expectation([](double x) { return x; }) == Approx(1.0));
  const Density a = Density::arcsine(-2.0, 2.0);
  CHECK(a.mass() == Approx(1.0).epsilon(1e-12));
  // The arcsine law of [-2, 2] has potential log 1 = 0 on the interval.
  for (double x : {-1.9, -0.3, 0.0, 1.2}) CHECK(std::fabs(a.potential(x)) < 1e-9);
  // Off the interval: log((|z| + sqrt(z^2 - 4)) / 2).
  const double z = 3.0;
  CHECK(a.potential(z) == Approx(std::log((z + std::sqrt(z * z - 4.0)) / 2.0)).epsilon(1e-10));
}
