#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/quadrature.hpp"

namespace eqcap {

/// One band of a density on the line. eval(x, dl, dr) receives dl = x - a and
/// dr = b - x exactly so that endpoint singularities can be evaluated without
/// cancellation.
struct DensityPiece {
  double a;
  double b;
  std::function<double(double, double, double)> eval;
};

/// A sampled (callable) density supported on finitely many bands.
class Density {
 public:
  Density() = default;
  explicit Density(std::vector<DensityPiece> pieces, double tol = 1e-12) : pieces_(std::move(pieces)), tol_(tol) {
    detail::require(!pieces_.empty(), "density needs at least one piece");
    for (const auto& p : pieces_) detail::require(p.a < p.b, "density piece needs a < b");
  }

  /// Normalized Lebesgue measure on [a, b].
  static Density uniform(double a, double b) {
    detail::require(a < b, "uniform density needs a < b");
    const double h = 1.0 / (b - a);
    return Density({{a, b, [h](double, double, double) { return h; }}});
  }

  /// Arcsine law 1 / (pi sqrt((x - a)(b - x))), the equilibrium measure of [a, b].
  static Density arcsine(double a, double b) {
    detail::require(a < b, "arcsine density needs a < b");
    return Density({{a, b, [](double, double dl, double dr) { return 1.0 / (M_PI * std::sqrt(dl * dr)); }}});
  }

  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  double tolerance() const { return tol_; }

  IntervalUnion support() const {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& p : pieces_) pairs.emplace_back(p.a, p.b);
    return IntervalUnion::make(std::move(pairs));
  }

  double operator()(double x) const {
    double s = 0.0;
    for (const auto& p : pieces_) {
      if (x > p.a && x < p.b) s += p.eval(x, x - p.a, p.b - x);
    }
    return s;
  }

  /// Integral of phi against the density.
  template <class F>
  double expectation(F&& phi) const {
    double s = 0.0;
    for (const auto& p : pieces_) {
      s += integrate_endpoint_singular(
          [&](double x, double dl, double dr) { return phi(x) * p.eval(x, dl, dr); }, p.a, p.b, tol_);
    }
    return s;
  }

  double mass() const {
    return expectation([](double) { return 1.0; });
  }

  /// Logarithmic potential p(z) = integral of log|z - y| against the density.
  double potential(std::complex<double> z) const {
    double s = 0.0;
    for (const auto& p : pieces_) s += piece_potential(p, z);
    return s;
  }

  /// Potential at a real point, with |x - y| passed exactly when x sits inside
  /// a band so that the logarithmic singularity is resolved.
  double potential(double x) const { return potential(std::complex<double>(x, 0.0)); }

 private:
  double piece_potential(const DensityPiece& p, std::complex<double> z) const {
    const double x = z.real();
    const double y = z.imag();
    if (y == 0.0 && x > p.a && x < p.b) {
      const double to_b = p.b - x;
      const double to_a = x - p.a;
      double left = integrate_endpoint_singular(
          [&](double t, double dl, double dr) { return std::log(dr) * p.eval(t, dl, dr + to_b); }, p.a, x, tol_);
      double right = integrate_endpoint_singular(
          [&](double t, double dl, double dr) { return std::log(dl) * p.eval(t, dl + to_a, dr); }, x, p.b, tol_);
      return left + right;
    }
    return integrate_endpoint_singular(
        [&](double t, double dl, double dr) {
          double dx = x - t;
          if (x >= p.b) dx = (x - p.b) + dr;
          else if (x <= p.a) dx = (x - p.a) - dl;
          return 0.5 * std::log(dx * dx + y * y) * p.eval(t, dl, dr);
        },
        p.a, p.b, tol_);
  }

  std::vector<DensityPiece> pieces_;
  double tol_ = 1e-12;
};

}  // namespace eqcap
