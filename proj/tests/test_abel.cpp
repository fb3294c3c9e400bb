#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "eqcap/abel.hpp"
#include "eqcap/capacity.hpp"

using namespace eqcap;
using Catch::Approx;

namespace {

const IntervalUnion& pair_set() {
  static const auto e = IntervalUnion::make({{-std::sqrt(8.0), -std::sqrt(2.0)}, {std::sqrt(2.0), std::sqrt(8.0)}});
  return e;
}

}  // namespace

TEST_CASE("Abel capacity of intervals matches the closed form") {
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{-2, 2}, {0, 1}, {3, 11}, {-7.5, -7.25}}) {
    const auto d = solve_R(IntervalUnion::single(a, b));
    CHECK(d.capacity() == Approx((b - a) / 4.0).epsilon(1e-12));
    CHECK(d.omega.size() == 1);
    CHECK(d.omega[0] == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("symmetric pairs and reflection symmetry") {
  const auto d = solve_R(pair_set());
  CHECK(d.capacity() == Approx(0.5 * std::sqrt(6.0)).epsilon(1e-10));
  REQUIRE(d.roots.size() == 1);
  CHECK(std::fabs(d.roots[0]) < 1e-12);
  CHECK(d.omega[0] == Approx(0.5).epsilon(1e-10));
  // [0,1] u [2,3] is symmetric about 3/2, so R vanishes there.
  const auto two = solve_R(IntervalUnion::make({{0, 1}, {2, 3}}));
  CHECK(two.roots[0] == Approx(1.5).epsilon(1e-12));
  CHECK(two.capacity() == Approx(std::sqrt(0.5)).epsilon(1e-10));
  // Capacity is translation invariant and scales linearly.
  const auto e = IntervalUnion::make({{-1.0, 0.2}, {0.7, 1.1}, {2.0, 3.5}});
  const double c = solve_R(e).capacity();
  CHECK(solve_R(e.translated(4.0)).capacity() == Approx(c).epsilon(1e-10));
  CHECK(solve_R(e.scaled(2.5)).capacity() == Approx(2.5 * c).epsilon(1e-10));
}

TEST_CASE("monotonicity under inclusion") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<std::pair<double, double>> bands;
    double x = -2.0;
    for (int k = 0; k < 3; ++k) {
      const double len = 0.2 + u(rng);
      bands.emplace_back(x, x + len);
      x += len + 0.1 + u(rng);
    }
    const auto big = IntervalUnion::make(bands);
    auto shrunk = bands;
    shrunk[1].second -= 0.5 * (shrunk[1].second - shrunk[1].first);
    CHECK(solve_R(IntervalUnion::make(shrunk)).capacity() < solve_R(big).capacity());
    CHECK(solve_R(big).capacity() <= big.diameter() / 4.0);
  }
}

TEST_CASE("Cantor prefixes decrease") {
  double prev = 1.0;
  for (int level = 0; level <= 5; ++level) {
    const double c = solve_R(cantor_prefix(level)).capacity();
    CHECK(c < prev);
    CHECK(c > 0.2209);
    prev = c;
  }
}

TEST_CASE("equilibrium density of [-2, 2] is the arcsine law") {
  const BandDensity mu(solve_R(IntervalUnion::single(-2.0, 2.0)));
  for (int i = 1; i <= 50; ++i) {
    const double x = -2.0 + 4.0 * i / 51.0;
    CHECK(mu(x) == Approx(1.0 / (M_PI * std::sqrt(4.0 - x * x))).epsilon(1e-10));
  }
  CHECK(mu.total_mass() == Approx(1.0).epsilon(1e-12));
  CHECK(mu.cdf(0.0) == Approx(0.5).epsilon(1e-12));
  CHECK(mu.cdf(1.0) == Approx(0.5 + std::asin(0.5) / M_PI).epsilon(1e-12));
  CHECK(mu.quantile(0.75) == Approx(2.0 * std::sin(M_PI * 0.25)).epsilon(1e-10));
}

TEST_CASE("band masses are the rotation numbers and sum to one") {
  const auto d = solve_R(IntervalUnion::make({{-1.0, 0.2}, {0.7, 1.1}, {2.0, 3.5}}));
  const BandDensity mu(d);
  double s = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(mu.band_mass(j) == Approx(d.omega[j]).epsilon(1e-9));
    s += d.omega[j];
  }
  CHECK(s == Approx(1.0).epsilon(1e-10));
  // Each gap integral of R / sqrt|D| vanishes.
  for (int j = 1; j <= 2; ++j) CHECK(std::fabs(gap_integral(d.R, d.E, j)) < 1e-9);
}

TEST_CASE("Frostman: the potential equals log cap on E and exceeds it off E") {
  const auto e = IntervalUnion::make({{-1.0, 0.0}, {1.0, 3.0}});
  const auto d = solve_R(e);
  const BandDensity mu(d);
  const double logcap = d.vE;
  for (double x : {-0.9, -0.5, 0.0, 1.0, 2.2, 2.99}) CHECK(equilibrium_potential(mu, x) == Approx(logcap).margin(1e-8));
  for (double x : {0.5, 3.5, -2.0}) CHECK(equilibrium_potential(mu, x) > logcap + 1e-6);
  CHECK(equilibrium_potential(mu, {1.0, 1.0}) > logcap);
  CHECK(energy(mu.as_density()) == Approx(logcap).margin(1e-7));
  // log|z| - p(z) -> 0 at infinity.
  CHECK(equilibrium_potential(mu, 1e9) - std::log(1e9) == Approx(0.0).margin(1e-8));
}

TEST_CASE("resultant positivity on random coprime pairs") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> coef(-5, 5);
  int checked = 0;
  while (checked < 200) {
    std::vector<Rational> pc, qc;
    const int dp = 1 + static_cast<int>(rng() % 4), dq = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < dp; ++i) pc.push_back(coef(rng));
    pc.push_back(1);
    for (int i = 0; i <= dq; ++i) qc.push_back(coef(rng));
    const ExactPoly p(pc), q(qc);
    if (q.is_zero() || gcd(p, q).degree() > 0) continue;
    const auto res = resultant_positivity(p, q);
    CHECK(res.value >= 0.0);
    CHECK(res.resultant != 0);
    ++checked;
  }
  const ExactPoly common = exact_poly({-2, 1});
  const auto zero = resultant_positivity(common * exact_poly({1, 0, 1}), common * exact_poly({3, 1}));
  CHECK(zero.value == -std::numeric_limits<double>::infinity());
  CHECK(zero.resultant == 0);
  CHECK_THROWS_AS(resultant_positivity(exact_poly({1, 2}), exact_poly({1, 1})), InvalidArgument);
}
