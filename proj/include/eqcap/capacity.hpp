#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "eqcap/density.hpp"
#include "eqcap/error.hpp"
#include "eqcap/measure.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/roots.hpp"

namespace eqcap {

enum class CapacityMethod { closed_form, fekete, chebyshev, abel_integral };

inline std::string to_string(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::closed_form: return "closed_form";
    case CapacityMethod::fekete: return "fekete";
    case CapacityMethod::chebyshev: return "chebyshev";
    case CapacityMethod::abel_integral: return "abel_integral";
  }
  return "unknown";
}

inline CapacityMethod parse_capacity_method(const std::string& s) {
  if (s == "closed_form" || s == "closed") return CapacityMethod::closed_form;
  if (s == "fekete") return CapacityMethod::fekete;
  if (s == "chebyshev" || s == "remez") return CapacityMethod::chebyshev;
  if (s == "abel_integral" || s == "abel") return CapacityMethod::abel_integral;
  throw InvalidArgument("unknown capacity method '" + s + "'");
}

struct CapacityReport {
  double value = 0.0;
  CapacityMethod method = CapacityMethod::closed_form;
  std::map<std::string, std::vector<double>> diagnostics;
};

namespace shape {
struct Interval {
  double a, b;
};
/// [-b, -a] union [a, b].
struct SymmetricPair {
  double a, b;
};
struct Circle {
  double r;
};
/// Arc of the circle of radius r with opening angle alpha.
struct Arc {
  double r, alpha;
};
}  // namespace shape

using Shape = std::variant<shape::Interval, shape::SymmetricPair, shape::Circle, shape::Arc>;

inline double capacity_closed_form(const Shape& s) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, shape::Interval>) {
          detail::require(v.a < v.b, "interval needs a < b");
          return (v.b - v.a) / 4.0;
        } else if constexpr (std::is_same_v<T, shape::SymmetricPair>) {
          detail::require(0.0 < v.a && v.a < v.b, "symmetric pair needs 0 < a < b");
          return 0.5 * std::sqrt((v.b - v.a) * (v.b + v.a));
        } else if constexpr (std::is_same_v<T, shape::Circle>) {
          detail::require(v.r > 0.0, "circle needs r > 0");
          return v.r;
        } else {
          detail::require(v.r > 0.0, "arc needs r > 0");
          detail::require(v.alpha >= 0.0 && v.alpha <= 2.0 * M_PI, "arc angle must lie in [0, 2 pi]");
          return v.r * std::sin(v.alpha / 4.0);
        }
      },
      s);
}

inline double capacity_scale(double cap, double lambda) { return std::fabs(lambda) * cap; }

inline double capacity_preimage(double cap_k, int d) {
  detail::require(cap_k >= 0.0, "capacity must be nonnegative");
  detail::require(d >= 1, "preimage degree must be at least 1");
  return std::pow(cap_k, 1.0 / d);
}

/// Canonical lift of a density on K to f^{-1}(K): at x it is nu(f(x)) |f'(x)| / deg f.
inline Density pullback_density(const RealPoly& f, const Density& nu) {
  if (f.degree() < 1) throw InvalidArgument("pullback needs a nonconstant polynomial");
  const RealPoly df = f.derivative();
  const double d = f.degree();
  std::vector<DensityPiece> pieces;
  for (const auto& piece : nu.pieces()) {
    const RealPoly f_lo = f - RealPoly::constant(piece.a);
    const RealPoly f_hi = f - RealPoly::constant(piece.b);
    std::vector<double> breaks;
    const double scale = 1.0 + std::fabs(f.leading());
    for (const RealPoly* g : {&f_lo, &f_hi}) {
      for (const auto& z : complex_roots(*g)) {
        if (std::fabs(z.imag()) <= 1e-6 * (scale + std::abs(z))) breaks.push_back(z.real());
      }
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> uniq;
    for (double x : breaks) {
      if (uniq.empty() || x - uniq.back() > 1e-9 * (1.0 + std::fabs(x))) uniq.push_back(x);
    }
    for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
      const double lo = uniq[i];
      const double hi = uniq[i + 1];
      const double y = f(0.5 * (lo + hi));
      if (!(y > piece.a && y < piece.b)) continue;
      auto eval = piece.eval;
      pieces.push_back({lo, hi, [eval, f, f_lo, f_hi, df, d, lo, hi](double x, double, double) {
                          auto at = [&](double t) {
                            return eval(f(t), std::fabs(f_lo(t)), std::fabs(f_hi(t))) * std::fabs(df(t)) / d;
                          };
                          const double v = at(x);
                          if (std::isfinite(v)) return v;
                          // Infinite density against a critical point of f: take the one-sided limit.
                          const double step = 1e-10 * (hi - lo);
                          return at(x - lo < hi - x ? x + step : x - step);
                        }});
    }
  }
  if (pieces.empty()) throw InvalidArgument("preimage of the density support is empty");
  return Density(std::move(pieces), nu.tolerance());
}

/// Energy I(mu) = double integral of log|x - y|, computed as the integral of the
/// potential against mu.
inline double energy(const Density& mu, double tol = 1e-9) {
  const double m = mu.mass();
  if (std::fabs(m - 1.0) > 1e-8) throw InvalidArgument("energy needs a mass-one density (mass " + std::to_string(m) + ")");
  double s = 0.0;
  for (const auto& p : mu.pieces()) {
    s += integrate_endpoint_singular(
        [&](double x, double dl, double dr) { return p.eval(x, dl, dr) * mu.potential(x); }, p.a, p.b, tol);
  }
  return s;
}

/// Off-diagonal energy sum over i != j of w_i w_j log|x_i - x_j|.
inline double pseudo_energy_discrete(const DiscreteMeasure& mu) {
  const auto& atoms = mu.atoms();
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const double dist = std::abs(atoms[i].location - atoms[j].location);
      if (dist == 0.0) throw InvalidArgument("pseudo-energy needs distinct atoms");
      s += 2.0 * atoms[i].weight * atoms[j].weight * std::log(dist);
    }
  }
  return s;
}

}  // namespace eqcap
