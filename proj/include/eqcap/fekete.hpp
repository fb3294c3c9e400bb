#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/parallel.hpp"

namespace eqcap {

struct FeketeResult {
  double diameter;          // d_n(E)
  double log_product;       // sum over i < j of log|x_i - x_j| at the optimum
  std::vector<double> points;
};

namespace detail {

inline double log_vandermonde(const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d = std::fabs(x[j] - x[i]);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      s += std::log(d);
    }
  }
  return s;
}

inline double project_to(const IntervalUnion& e, double x) {
  if (e.contains(x)) return x;
  double best = e.lower();
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& band : e.bands()) {
    for (double end : {band.a, band.b}) {
      if (std::fabs(end - x) < dist) {
        dist = std::fabs(end - x);
        best = end;
      }
    }
  }
  return best;
}

inline bool strictly_increasing(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) return false;
  }
  return true;
}

/// Local ascent from a sorted start: projected Newton steps on the free
/// coordinates with a backtracking line search, falling back to gradient steps.
inline std::vector<double> fekete_ascent(const IntervalUnion& e, std::vector<double> x) {
  const std::size_t n = x.size();
  double f = log_vandermonde(x);
  for (int iter = 0; iter < 2000; ++iter) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double inv = 1.0 / (x[i] - x[j]);
        g(static_cast<Eigen::Index>(i)) += inv;
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += inv * inv;
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= inv * inv;
      }
    }
    // Coordinates pinned at a band end with the gradient pointing outward are held fixed.
    std::vector<Eigen::Index> free;
    for (std::size_t i = 0; i < n; ++i) {
      const auto band = e.band_of(x[i]);
      const double gi = g(static_cast<Eigen::Index>(i));
      bool pinned = false;
      if (band) {
        const Band& b = e[*band];
        pinned = (x[i] <= b.a && gi < 0.0) || (x[i] >= b.b && gi > 0.0);
      }
      if (!pinned) free.push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (!free.empty()) {
      const auto m = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd hf(m, m);
      Eigen::VectorXd gf(m);
      for (Eigen::Index a = 0; a < m; ++a) {
        gf(a) = g(free[static_cast<std::size_t>(a)]);
        for (Eigen::Index b = 0; b < m; ++b) hf(a, b) = -h(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
      }
      hf += 1e-12 * (1.0 + hf.diagonal().cwiseAbs().maxCoeff()) * Eigen::MatrixXd::Identity(m, m);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hf);
      Eigen::VectorXd step = ldlt.solve(gf);
      if (ldlt.info() != Eigen::Success || !step.allFinite() || step.dot(gf) <= 0.0) step = gf;
      for (Eigen::Index a = 0; a < m; ++a) dir(free[static_cast<std::size_t>(a)]) = step(a);
    }
    if (dir.lpNorm<Eigen::Infinity>() == 0.0) break;

    auto try_step = [&](const Eigen::VectorXd& d, double& f_new, std::vector<double>& x_new) {
      double t = 1.0;
      for (int k = 0; k < 60; ++k, t *= 0.5) {
        for (std::size_t i = 0; i < n; ++i) x_new[i] = project_to(e, x[i] + t * d(static_cast<Eigen::Index>(i)));
        if (!strictly_increasing(x_new)) continue;
        f_new = log_vandermonde(x_new);
        if (f_new > f) return true;
      }
      return false;
    };

    std::vector<double> x_new(n);
    double f_new = f;
    bool moved = try_step(dir, f_new, x_new);
    if (!moved) moved = try_step(g, f_new, x_new);
    if (!moved) break;
    const double gain = f_new - f;
    x = x_new;
    f = f_new;
    if (gain <= 1e-15 * (1.0 + std::fabs(f))) break;
  }
  return x;
}

}  // namespace detail

/// Transfinite-diameter oracle d_n(E): maximizes the Vandermonde product over
/// n points of E by multistart local ascent.
inline FeketeResult fekete_diameter(const IntervalUnion& e, int n, std::uint64_t seed = 0, int starts = 20) {
  detail::require(n >= 2 && n <= 12, "Fekete oracle supports 2 <= n <= 12");
  detail::require(starts >= 1, "at least one start is needed");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double total = e.total_length();

  auto sample = [&]() {
    double u = unit(rng) * total;
    for (const auto& band : e.bands()) {
      if (u <= band.length()) return band.a + u;
      u -= band.length();
    }
    return e.upper();
  };

  // Starts are drawn up front so the result does not depend on the worker count.
  std::vector<std::vector<double>> init(static_cast<std::size_t>(starts));
  for (int s = 0; s < starts; ++s) {
    std::vector<double>& x = init[static_cast<std::size_t>(s)];
    x.resize(static_cast<std::size_t>(n));
    if (s == 0) {
      // Chebyshev-Lobatto points of the hull, projected.
      for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = e.center() - 0.5 * e.diameter() * std::cos(M_PI * i / (n - 1));
      for (auto& v : x) v = detail::project_to(e, v);
    } else {
      for (auto& v : x) v = sample();
    }
    std::sort(x.begin(), x.end());
  }
  std::vector<std::vector<double>> found(init.size());
  parallel_for(init.size(), [&](std::size_t s) {
    if (detail::strictly_increasing(init[s])) found[s] = detail::fekete_ascent(e, init[s]);
  });
  FeketeResult best{0.0, -std::numeric_limits<double>::infinity(), {}};
  for (auto& x : found) {
    if (x.empty()) continue;
    const double f = detail::log_vandermonde(x);
    if (f > best.log_product) best = {0.0, f, x};
  }
  if (best.points.empty()) throw ConvergenceFailure("no Fekete start produced distinct points");
  best.diameter = std::exp(2.0 * best.log_product / (static_cast<double>(n) * (n - 1)));
  return best;
}

}  // namespace eqcap
