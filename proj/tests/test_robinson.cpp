#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eqcap/robinson.hpp"

using namespace eqcap;
using Catch::Approx;

namespace {

// T_0 = 2, T_1 = X, T_{k+1} = X T_k - T_{k-1}.
ExactPoly tn_by_recurrence(int n) {
  ExactPoly prev = ExactPoly::constant(Rational(2));
  ExactPoly cur = exact_poly({0, 1});
  for (int k = 1; k < n; ++k) {
    ExactPoly next = exact_poly({0, 1}) * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

TEST_CASE("closed-form T_n agrees with the recurrence") {
  for (int n = 1; n <= 24; ++n) CHECK(chebyshev_Tn(n) == tn_by_recurrence(n));
  // T_n(t + 1/t) = t^n + t^-n.
  const auto t7 = to_real(chebyshev_Tn(7));
  for (double t : {1.3, 2.0, 0.7}) CHECK(t7(t + 1.0 / t) == Approx(std::pow(t, 7) + std::pow(t, -7)).epsilon(1e-12));
  CHECK_THROWS_AS(chebyshev_Tn(0), InvalidArgument);
}

TEST_CASE("reference instance") {
  const auto inst = robinson_preset("x2m6");
  CHECK(inst.r == 2);
  CHECK(inst.lambda == 2);
  CHECK(inst.ell == 2);
  CHECK(inst.E()[0].a == Approx(-std::sqrt(10.0)).epsilon(1e-14));
  CHECK(inst.E()[1].a == Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(inst.contains(Rational(2)));
  CHECK_FALSE(inst.contains(Rational(1)));
  CHECK_THROWS_AS(robinson_preset("nope"), InvalidArgument);
  CHECK_THROWS_AS(make_robinson_instance(exact_poly({-6, 0, 1}), Rational(2)), InvalidArgument);
}

TEST_CASE("composition satisfies the Pell identity and matches T_n") {
  for (const char* name : {"x2m6", "x2m5"}) {
    const auto inst = robinson_preset(name);
    const Rational l2 = inst.lambda * inst.lambda;
    Rational four_l2n = 4;
    for (int n = 1; n <= 12; ++n) {
      four_l2n *= l2;
      const ExactPoly pn = compose_Pn(inst, n);
      const ExactPoly qn = compose_Qn(inst, n);
      CHECK(pn * pn - inst.D * qn * qn == ExactPoly::constant(four_l2n));
      // P_n = lambda^n T_n(P / lambda).
      Rational ln = 1;
      for (int k = 0; k < n; ++k) ln *= inst.lambda;
      const ExactPoly scaled = inst.P * (Rational(1) / inst.lambda);
      CHECK(pn == chebyshev_Tn(n).compose(scaled) * ln);
    }
  }
}

TEST_CASE("integer polynomials for the reference instance") {
  const auto inst = robinson_preset("x2m6");
  const BandDensity mu(solve_R(inst.E()));
  double prev = 1.0;
  for (int n : {1, 2, 4, 8, 16}) {
    const auto res = generate(inst, 2 * n);
    CHECK(res.n == n);
    CHECK(res.P_prime.is_integer());
    CHECK(res.P_prime.is_monic());
    CHECK(res.P_prime.degree() == 2 * n);
    REQUIRE(res.certificate.valid);
    CHECK(res.certificate.per_band == std::vector<int>{n, n});
    for (const auto& br : res.certificate.brackets) {
      CHECK(inst.contains(br.lo));
      CHECK(inst.contains(br.hi));
      CHECK(sgn(res.P_prime(br.lo)) * sgn(res.P_prime(br.hi)) < 0);
    }
    std::vector<Atom> atoms;
    for (double x : res.certificate.roots) atoms.push_back({x, 1.0});
    const double ks = kolmogorov_distance(DiscreteMeasure(atoms), mu);
    CHECK(ks < prev);
    CHECK(ks <= 1.0 / (2.0 * n) + 1e-9);
    prev = ks;
  }
}

TEST_CASE("bounded correction for a non-integral lambda") {
  const auto inst = robinson_preset("x2m5");
  CHECK(inst.lambda == Rational(3, 2));
  CHECK(inst.ell == 4);
  CHECK_FALSE(certify_integrality(inst, 8));
  REQUIRE(certify_integrality(inst, 32));
  const auto corr = correction_Cn(inst, 32);
  CHECK_FALSE(corr.is_zero());
  CHECK(corr.max_abs_c <= Rational(1, 2));
  for (const auto& row : corr.c)
    for (const auto& c : row) {
      CHECK(c >= Rational(-1, 2));
      CHECK(c < Rational(1, 2));
    }
  CHECK(corr.P_prime.is_integer());
  CHECK(corr.P_prime + corr.C == corr.Pn);
  CHECK(corr.C.degree() < 2 * (32 - inst.ell));
  CHECK(corr.sup_C <= corr.analytic_bound);
  CHECK(corr.analytic_bound < corr.two_lambda_n);
  const auto res = generate(inst, 10);
  CHECK(res.n == 32);
  CHECK(res.certificate.valid);
  CHECK(static_cast<int>(res.certificate.roots.size()) == 64);
  CHECK_THROWS_AS(correction_Cn(inst, 8), InvalidArgument);
}

TEST_CASE("no admissible n in range is reported") {
  const auto inst = make_robinson_instance(exact_poly({-5, 0, 1}), Rational(5, 2));
  CHECK(inst.ell == 10);
  CHECK_THROWS_AS(generate(inst, 4, 140), CertificationFailure);
}

TEST_CASE("Kolmogorov distance against the arcsine law") {
  const BandDensity mu(solve_R(IntervalUnion::single(-2.0, 2.0)));
  std::vector<double> q;
  for (int k = 0; k < 10; ++k) q.push_back(mu.quantile((k + 0.5) / 10.0));
  CHECK(kolmogorov_distance(DiscreteMeasure::uniform(q), mu) == Approx(0.05).epsilon(1e-8));
  const auto rep = convergence_report({DiscreteMeasure::uniform({0.0}), DiscreteMeasure::uniform(q)}, mu);
  CHECK(rep[0] == Approx(0.5));
  CHECK(rep[1] < rep[0]);
}
