#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "eqcap/abel.hpp"
#include "eqcap/capacity.hpp"
#include "eqcap/density.hpp"
#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/rational.hpp"
#include "eqcap/roots.hpp"

namespace eqcap {

/// A conjugation-invariant closed subset of the circle |z| = sqrt(q), stored through
/// its image under z -> z + conj(z), which lies in [-2 sqrt q, 2 sqrt q].
struct CircleSet {
  long q = 2;
  IntervalUnion x_bands = IntervalUnion::single(-1.0, 1.0);

  double radius() const { return std::sqrt(static_cast<double>(q)); }

  static CircleSet full(long q) {
    const double c = 2.0 * std::sqrt(static_cast<double>(q));
    return make(q, IntervalUnion::single(-c, c));
  }

  static CircleSet make(long q, IntervalUnion bands) {
    detail::require(q >= 2, "q must be at least 2");
    const double c = 2.0 * std::sqrt(static_cast<double>(q));
    const double slack = 1e-12 * c;
    detail::require(bands.lower() >= -c - slack && bands.upper() <= c + slack,
                    "circle set image must lie in [-2 sqrt q, 2 sqrt q]");
    return CircleSet{q, std::move(bands)};
  }
};

inline double circle_capacity(const CircleSet& cs) {
  const double cap_i = abel_capacity(solve_R(cs.x_bands));
  return std::sqrt(cs.radius()) * std::sqrt(cap_i);
}

struct SupportBound {
  double cap;
  double bound;  // q^(1/4)
  bool satisfied;
};

inline SupportBound support_capacity_bound(const CircleSet& cs) {
  const double cap = circle_capacity(cs);
  const double bound = std::pow(static_cast<double>(cs.q), 0.25);
  return {cap, bound, cap >= bound};
}

/// True when every root of p is real and lies in [-2 sqrt q, 2 sqrt q]; decided exactly.
inline bool weil_admissible(const ExactPoly& p, long q) {
  detail::require(q >= 1, "q must be positive");
  if (p.degree() < 1) return true;
  ExactPoly s = squarefree_part(p);
  SturmSequence all(s);
  if (all.count_real() != s.degree()) return false;
  // Roots at +-2 sqrt q are roots of X^2 - 4q; strip them before comparing with
  // rational brackets of the (possibly irrational) bound.
  const ExactPoly edge = exact_poly({-4 * q, 0, 1});
  const ExactPoly common = gcd(s, edge);
  if (common.degree() >= 1) s = s / common;
  if (s.degree() < 1) return true;
  SturmSequence seq(s);
  // lo <= 2 sqrt q <= hi, tightened until no root of s can sit in between.
  const Integer four_q = 4 * Integer(q);
  for (int bits = 8; bits <= 4096; bits *= 2) {
    const Integer scale = Integer(1) << bits;
    Integer root;
    mpz_sqrt(root.get_mpz_t(), Integer(four_q * scale * scale).get_mpz_t());
    const Rational lo(root, scale);
    const Rational hi(root + 1, scale);
    const bool exact_edge = (root * root == four_q * scale * scale);
    if (exact_edge) return seq.count(-lo, lo) == s.degree();
    const int ambiguous = seq.count(lo, hi) + seq.count(-hi, -lo);
    if (ambiguous == 0) return seq.count(-lo, lo) == s.degree();
  }
  throw ConvergenceFailure("could not separate the roots from 2 sqrt q");
}

/// X^d P((X^2 + q) / X): the monic integer polynomial prod (X^2 - a X + q) over the
/// roots a of P, built by exact composition.
inline ExactPoly weil_lift(const ExactPoly& p, long q) {
  detail::require(p.degree() >= 1, "lift needs a nonconstant polynomial");
  if (!p.is_monic() || !p.is_integer()) throw InvalidArgument("lift needs a monic integer polynomial");
  if (!weil_admissible(p, q)) throw InvalidArgument("a root of P lies outside [-2 sqrt q, 2 sqrt q]");
  const int d = p.degree();
  const ExactPoly t = exact_poly({q, 0, 1});
  ExactPoly out;
  ExactPoly tk = ExactPoly::constant(Rational(1));
  for (int k = 0; k <= d; ++k) {
    out += ExactPoly::monomial(d - k, p[static_cast<std::size_t>(k)]) * tk;
    tk = tk * t;
  }
  return out;
}

/// The images z + q/z of the roots of pc, with multiplicity, match the roots of pi,
/// each counted twice (z and its conjugate), within tol.
inline bool pushforward_check(const ExactPoly& pc, const ExactPoly& pi, long q, double tol = 1e-10) {
  if (pc.degree() != 2 * pi.degree() || pi.degree() < 1) return false;
  struct Pt {
    std::complex<double> z;
    int mult;
  };
  std::vector<Pt> image, target;
  for (const auto& [factor, mult] : squarefree_decomposition(pc)) {
    for (const auto& z : complex_roots(factor)) {
      if (std::abs(z) == 0.0) return false;
      image.push_back({z + static_cast<double>(q) / z, mult});
    }
  }
  for (const auto& [factor, mult] : squarefree_decomposition(pi)) {
    for (const auto& a : complex_roots(factor)) target.push_back({a, 2 * mult});
  }
  for (const auto& pt : image) {
    auto best = target.end();
    double dist = 0.0;
    for (auto it = target.begin(); it != target.end(); ++it) {
      if (it->mult <= 0) continue;
      const double dd = std::abs(it->z - pt.z);
      if (best == target.end() || dd < dist) {
        best = it;
        dist = dd;
      }
    }
    if (best == target.end() || dist > tol * (1.0 + std::abs(best->z)) || best->mult < pt.mult) return false;
    best->mult -= pt.mult;
  }
  return std::all_of(target.begin(), target.end(), [](const Pt& p) { return p.mult == 0; });
}

/// Largest |z| - sqrt q over the roots of a lifted polynomial.
inline double modulus_defect(const ExactPoly& pc, long q) {
  const double r = std::sqrt(static_cast<double>(q));
  double worst = 0.0;
  for (const auto& [factor, mult] : squarefree_decomposition(pc)) {
    (void)mult;
    for (const auto& z : complex_roots(factor)) worst = std::max(worst, std::fabs(std::abs(z) - r));
  }
  return worst;
}

/// Transfer of a density on the x-line to the circle, in the angle variable: each x
/// has the two preimages +-theta with x = 2 r cos theta, each carrying half the mass.
/// The bands must lie strictly inside (-2r, 2r).
inline Density circle_density(const Density& nu, double r) {
  std::vector<DensityPiece> pieces;
  for (const auto& p : nu.pieces()) {
    detail::require(p.a > -2.0 * r && p.b < 2.0 * r, "circle transfer needs bands inside (-2r, 2r)");
    const double alpha = std::acos(p.b / (2.0 * r));
    const double beta = std::acos(p.a / (2.0 * r));
    auto eval = p.eval;
    // Distances in x recovered from angle distances: x - a and b - x as products of sines.
    auto value = [eval, r, alpha, beta](double t, double to_alpha, double to_beta) {
      const double x = 2.0 * r * std::cos(t);
      const double dl = 4.0 * r * std::sin(0.5 * (beta + t)) * std::sin(0.5 * to_beta);
      const double dr = 4.0 * r * std::sin(0.5 * (t + alpha)) * std::sin(0.5 * to_alpha);
      return r * std::sin(t) * eval(x, dl, dr);
    };
    pieces.push_back({alpha, beta, [value](double t, double dl, double dr) { return value(t, dl, dr); }});
    pieces.push_back({-beta, -alpha, [value](double t, double dl, double dr) { return value(-t, dr, dl); }});
  }
  std::sort(pieces.begin(), pieces.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  return Density(std::move(pieces), nu.tolerance());
}

struct CircleEnergy {
  double interval_energy;  // I(nu) on the x-line
  double circle_energy;    // I(nu') on the circle of radius r
  double defect;           // I(nu) - (2 I(nu') - log r)
};

/// Energies on both sides of z -> z + conj(z). Since |f(z) - f(w)| = |z - w| |z - conj w| / r
/// on the circle, I(nu) = 2 I(nu') - log r; the defect measures how well that holds.
inline CircleEnergy circle_energy_check(const Density& nu, double r, double tol = 1e-9) {
  const Density g = circle_density(nu, r);
  // log|r e^{it} - r e^{is}| = log r + log|t - s| + log(sin(d/2) / (d/2)), d = t - s in (-2pi, 2pi).
  const double line = energy(g, tol);
  auto log_sinc = [](double d) {
    const double h = 0.5 * d;
    return std::fabs(h) < 1e-8 ? -h * h / 6.0 : std::log(std::sin(h) / h);
  };
  const double smooth = g.expectation([&](double t) { return g.expectation([&](double s) { return log_sinc(t - s); }); });
  const double ic = std::log(r) + line + smooth;
  const double ii = energy(nu, tol);
  return {ii, ic, ii - (2.0 * ic - std::log(r))};
}

}  // namespace eqcap
