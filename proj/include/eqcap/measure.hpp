#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "eqcap/error.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/roots.hpp"

namespace eqcap {

struct Atom {
  std::complex<double> location;
  double weight;
};

/// Finitely many weighted point masses.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (const auto& a : atoms_) {
      detail::require(a.weight > 0.0 && std::isfinite(a.weight), "atom weights must be positive");
    }
  }

  /// Equal weights 1/n at the given real points.
  static DiscreteMeasure uniform(const std::vector<double>& points) {
    detail::require(!points.empty(), "uniform measure needs at least one point");
    std::vector<Atom> atoms;
    const double w = 1.0 / static_cast<double>(points.size());
    for (double x : points) atoms.push_back({{x, 0.0}, w});
    return DiscreteMeasure(std::move(atoms));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  double total_mass() const {
    return std::accumulate(atoms_.begin(), atoms_.end(), 0.0,
                           [](double s, const Atom& a) { return s + a.weight; });
  }

  bool is_real(double tol = 1e-9) const {
    return std::all_of(atoms_.begin(), atoms_.end(), [tol](const Atom& a) {
      return std::fabs(a.location.imag()) <= tol * (1.0 + std::abs(a.location));
    });
  }

  /// Merges atoms closer than tol * (1 + |z|), summing weights, and sorts by
  /// (real, imag).
  DiscreteMeasure merged(double tol = 1e-9) const {
    std::vector<Atom> sorted = atoms_;
    std::sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) {
      if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
      return a.location.imag() < b.location.imag();
    });
    std::vector<Atom> out;
    std::vector<bool> used(sorted.size(), false);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (used[i]) continue;
      Atom acc = sorted[i];
      std::complex<double> weighted = acc.location * acc.weight;
      for (std::size_t j = i + 1; j < sorted.size(); ++j) {
        if (used[j]) continue;
        const double scale = tol * (1.0 + std::abs(sorted[i].location));
        if (sorted[j].location.real() - sorted[i].location.real() > scale) break;
        if (std::abs(sorted[j].location - sorted[i].location) <= scale) {
          used[j] = true;
          acc.weight += sorted[j].weight;
          weighted += sorted[j].location * sorted[j].weight;
        }
      }
      acc.location = weighted / acc.weight;
      out.push_back(acc);
    }
    return DiscreteMeasure(std::move(out));
  }

  /// Sorted real parts of the atom locations.
  std::vector<double> real_locations() const {
    std::vector<double> xs;
    for (const auto& a : atoms_) xs.push_back(a.location.real());
    std::sort(xs.begin(), xs.end());
    return xs;
  }

 private:
  std::vector<Atom> atoms_;
};

/// Root measure (1/d) sum of point masses at the complex roots, with multiplicity.
/// Exact input is split into squarefree factors first, so repeated roots merge exactly.
inline DiscreteMeasure root_measure(const ExactPoly& p) {
  if (p.degree() < 1) throw InvalidArgument("root measure of a constant polynomial");
  const double d = p.degree();
  std::vector<Atom> atoms;
  for (const auto& [factor, mult] : squarefree_decomposition(p)) {
    for (const auto& z : complex_roots(factor)) atoms.push_back({z, mult / d});
  }
  return DiscreteMeasure(std::move(atoms)).merged(0.0);
}

inline DiscreteMeasure root_measure(const RealPoly& p, double merge_tol = 1e-7) {
  if (p.degree() < 1) throw InvalidArgument("root measure of a constant polynomial");
  const double w = 1.0 / p.degree();
  std::vector<Atom> atoms;
  for (const auto& z : complex_roots(p)) atoms.push_back({z, w});
  return DiscreteMeasure(std::move(atoms)).merged(merge_tol);
}

}  // namespace eqcap
