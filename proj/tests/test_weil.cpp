#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "eqcap/weil.hpp"

using namespace eqcap;
using Catch::Approx;

TEST_CASE("lifts of small polynomials") {
  CHECK(weil_lift(exact_poly({0, 1}), 2) == exact_poly({2, 0, 1}));
  CHECK(weil_lift(exact_poly({-1, 1}), 2) == exact_poly({2, -1, 1}));
  CHECK_THROWS_AS(weil_lift(exact_poly({-3, 1}), 2), InvalidArgument);
  CHECK_THROWS_AS(weil_lift(exact_poly({1, 0, 1}), 5), InvalidArgument);
  CHECK_THROWS_AS(weil_lift(exact_poly({1, 2}), 5), InvalidArgument);
  // (X - 2 sqrt q) lifts to (X - sqrt q)^2: the boundary is admissible.
  CHECK(weil_lift(exact_poly({-4, 1}), 4) == exact_poly({4, -4, 1}));
  CHECK(weil_lift(exact_poly({-8, 0, 1}), 2) == exact_poly({4, 0, -4, 0, 1}));
  CHECK(weil_admissible(exact_poly({-8, 0, 1}), 2));
  CHECK_FALSE(weil_admissible(exact_poly({-9, 0, 1}), 2));
  CHECK_FALSE(weil_admissible(exact_poly({-5, 1}), 4));
}

TEST_CASE("pushforward of the lifted roots") {
  CHECK(pushforward_check(exact_poly({2, 0, 1}), exact_poly({0, 1}), 2));
  CHECK(pushforward_check(exact_poly({2, -1, 1}), exact_poly({-1, 1}), 2));
  CHECK_FALSE(pushforward_check(exact_poly({2, -1, 1}), exact_poly({0, 1}), 2));
  CHECK_FALSE(pushforward_check(exact_poly({2, 0, 1}), exact_poly({0, 1, 1}), 2));
}

TEST_CASE("random admissible lifts round-trip") {
  std::mt19937_64 rng(99);
  int done = 0;
  while (done < 100) {
    const long q = 2 + static_cast<long>(rng() % 4);
    const int bound = static_cast<int>(std::floor(2.0 * std::sqrt(static_cast<double>(q))));
    std::uniform_int_distribution<int> root(-bound, bound);
    ExactPoly p = ExactPoly::constant(Rational(1));
    const int deg = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < deg; ++k) p = p * exact_poly({-root(rng), 1});
    // Sometimes add an irreducible quadratic X^2 - c with c < 4q.
    if (rng() % 3 == 0) {
      std::uniform_int_distribution<long> c(1, 4 * q - 1);
      p = p * exact_poly({-c(rng), 0, 1});
    }
    if (!weil_admissible(p, q)) continue;
    const ExactPoly lift = weil_lift(p, q);
    CHECK(lift.is_integer());
    CHECK(lift.is_monic());
    CHECK(lift.degree() == 2 * p.degree());
    CHECK(modulus_defect(lift, q) < 1e-10);
    CHECK(pushforward_check(lift, p, q));
    ++done;
  }
}

TEST_CASE("circle capacities and the support bound") {
  for (long q : {2, 3, 4, 5, 9}) {
    CHECK(circle_capacity(CircleSet::full(q)) == Approx(std::sqrt(static_cast<double>(q))).epsilon(1e-10));
  }
  const auto sb = support_capacity_bound(CircleSet::full(4));
  CHECK(sb.cap == Approx(2.0).epsilon(1e-10));
  CHECK(sb.bound == Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sb.satisfied);
  const auto small = support_capacity_bound(CircleSet::make(4, IntervalUnion::single(-0.1, 0.1)));
  CHECK(small.cap == Approx(std::sqrt(2.0) * std::sqrt(0.05)).epsilon(1e-10));
  CHECK_FALSE(small.satisfied);
  const auto q2 = support_capacity_bound(CircleSet::full(2));
  CHECK(q2.cap == Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(q2.bound == Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
  CHECK(q2.satisfied);
  CHECK_THROWS_AS(CircleSet::make(2, IntervalUnion::single(-3.0, 0.0)), InvalidArgument);
}

TEST_CASE("energy on the circle and on the interval") {
  const double r = std::sqrt(2.0);
  const BandDensity mu(solve_R(IntervalUnion::make({{-2.0, -0.5}, {0.5, 1.5}})));
  const auto eq = circle_energy_check(mu.as_density(), r);
  CHECK(std::fabs(eq.defect) < 2e-4);
  CHECK(eq.interval_energy == Approx(mu.datum().vE).margin(1e-7));
  const auto un = circle_energy_check(Density::uniform(-1.0, 2.0), r);
  CHECK(std::fabs(un.defect) < 2e-4);
  CHECK(un.interval_energy == Approx(std::log(3.0) - 1.5).margin(1e-7));
  CHECK_THROWS_AS(circle_energy_check(Density::uniform(-3.0, 0.0), r), InvalidArgument);
}
