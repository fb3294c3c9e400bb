#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eqcap/capacity.hpp"
#include "eqcap/fekete.hpp"
#include "eqcap/remez.hpp"

using namespace eqcap;
using Catch::Approx;

TEST_CASE("closed forms") {
  for (double len : {1.0, 2.0, 4.0, 8.0}) {
    CHECK(capacity_closed_form(shape::Interval{0.0, len}) == len / 4.0);
    CHECK(capacity_scale(capacity_closed_form(shape::Interval{0.0, 1.0}), len) == Approx(len / 4.0));
  }
  CHECK(capacity_closed_form(shape::Interval{-2.0, 2.0}) == 1.0);
  CHECK(capacity_closed_form(shape::SymmetricPair{std::sqrt(2.0), std::sqrt(8.0)}) == Approx(0.5 * std::sqrt(6.0)));
  CHECK(capacity_closed_form(shape::Circle{3.0}) == 3.0);
  CHECK(capacity_closed_form(shape::Arc{2.0, 2.0 * M_PI}) == Approx(2.0));
  CHECK(capacity_closed_form(shape::Arc{1.0, M_PI}) == Approx(std::sin(M_PI / 4.0)));
  CHECK_THROWS_AS(capacity_closed_form(shape::Interval{1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(capacity_closed_form(shape::SymmetricPair{-1.0, 2.0}), InvalidArgument);
  CHECK(capacity_preimage(1.0, 2) == 1.0);
  CHECK(capacity_preimage(4.0, 2) == Approx(2.0));
  CHECK(parse_capacity_method("abel") == CapacityMethod::abel_integral);
  CHECK(parse_capacity_method("remez") == CapacityMethod::chebyshev);
  CHECK_THROWS_AS(parse_capacity_method("magic"), InvalidArgument);
}

TEST_CASE("energy of normalized Lebesgue measure") {
  for (double len : {1.0, 2.0, std::exp(1.5), 6.0}) {
    CHECK(energy(Density::uniform(0.0, len)) == Approx(std::log(len) - 1.5).margin(1e-8));
  }
  CHECK(energy(Density::uniform(0.0, 4.0)) < 0.0);
  CHECK(energy(Density::uniform(0.0, 5.0)) > 0.0);
  CHECK(energy(Density::arcsine(-2.0, 2.0)) == Approx(0.0).margin(1e-8));
  CHECK(energy(Density::arcsine(0.0, 1.0)) == Approx(std::log(0.25)).margin(1e-8));
  // Shifting does not change the energy; scaling by s adds log s.
  CHECK(energy(Density::uniform(3.0, 5.0)) == Approx(energy(Density::uniform(0.0, 1.0)) + std::log(2.0)).margin(1e-8));
  CHECK_THROWS_AS(energy(Density({{0.0, 1.0, [](double, double, double) { return 2.0; }}})), InvalidArgument);
}

TEST_CASE("pullback by a monic polynomial divides the energy by its degree") {
  const RealPoly f{-2.0, 0.0, 1.0};
  for (const Density& nu : {Density::uniform(-2.0, 2.0), Density::uniform(-1.0, 1.5), Density::arcsine(-2.0, 2.0)}) {
    const Density pb = pullback_density(f, nu);
    CHECK(pb.mass() == Approx(1.0).epsilon(1e-10));
    CHECK(energy(pb) == Approx(energy(nu) / 2.0).margin(2e-4));
  }
  const RealPoly cubic{0.0, -3.0, 0.0, 1.0};
  const Density nu = Density::uniform(-2.0, 2.0);
  CHECK(energy(pullback_density(cubic, nu)) == Approx(energy(nu) / 3.0).margin(2e-4));
}

TEST_CASE("Fekete diameters decrease toward the capacity") {
  const auto e = IntervalUnion::single(-2.0, 2.0);
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= 8; ++n) {
    const auto res = fekete_diameter(e, n, 7);
    CHECK(res.diameter <= prev + 1e-12);
    CHECK(res.diameter >= 1.0);
    CHECK(res.points.front() == Approx(-2.0));
    CHECK(res.points.back() == Approx(2.0));
    prev = res.diameter;
  }
  CHECK(fekete_diameter(e, 2).diameter == Approx(4.0));
  // Fekete points of an interval are the zeros of (1 - x^2) P'_{n-1}; n = 3 gives 0.
  CHECK(fekete_diameter(e, 3).points[1] == Approx(0.0).margin(1e-8));
  CHECK(fekete_diameter(e, 5, 1).diameter == Approx(fekete_diameter(e, 5, 2).diameter).epsilon(1e-10));
  CHECK_THROWS_AS(fekete_diameter(e, 1), InvalidArgument);
}

TEST_CASE("Remez recovers Chebyshev polynomials") {
  const auto e = IntervalUnion::single(-2.0, 2.0);
  for (int n : {1, 2, 3, 5, 8, 16}) {
    const auto res = chebyshev_constant(e, n);
    CHECK(res.norm == Approx(2.0).epsilon(1e-10));
  }
  const auto pair = IntervalUnion::make({{-std::sqrt(8.0), -std::sqrt(2.0)}, {std::sqrt(2.0), std::sqrt(8.0)}});
  const auto t2 = chebyshev_constant(pair, 2);
  CHECK(t2.norm == Approx(3.0).epsilon(1e-10));
  CHECK(t2.poly[0] == Approx(-5.0).epsilon(1e-9));
  CHECK(std::fabs(t2.poly[1]) < 1e-9);
  CHECK(t2.poly[2] == 1.0);
  // Affine invariance: t_n(sE + c) = s^n t_n(E).
  const auto shifted = chebyshev_constant(IntervalUnion::single(1.0, 3.0), 4);
  CHECK(shifted.norm == Approx(2.0 * std::pow(0.5, 4)).epsilon(1e-10));
}

TEST_CASE("discrete pseudo-energy") {
  const auto mu = DiscreteMeasure::uniform({-1.0, 1.0});
  CHECK(pseudo_energy_discrete(mu) == Approx(0.5 * std::log(2.0)));
  CHECK_THROWS_AS(pseudo_energy_discrete(DiscreteMeasure::uniform({1.0, 1.0})), InvalidArgument);
}
