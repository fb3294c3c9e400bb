#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "eqcap/error.hpp"

namespace eqcap {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.x.resize(static_cast<std::size_t>(n));
  rule.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      long double step = p1 / dp;
      z -= step;
      if (std::fabs(step) < 1e-19L) break;
    }
    // Recompute the derivative at the converged node for the weight.
    long double p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    long double w = 2 / ((1 - z * z) * dp * dp);
    rule.x[static_cast<std::size_t>(i)] = static_cast<double>(-z);
    rule.x[static_cast<std::size_t>(n - 1 - i)] = static_cast<double>(z);
    rule.w[static_cast<std::size_t>(i)] = static_cast<double>(w);
    rule.w[static_cast<std::size_t>(n - 1 - i)] = static_cast<double>(w);
  }
  if (n % 2 == 1) rule.x[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace detail

inline const GaussRule& gauss_legendre(int n) {
  detail::require(n >= 1 && n <= 1024, "Gauss-Legendre order must be in 1..1024");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

/// Fixed-order Gauss-Legendre on [a, b].
template <class F>
double gauss_fixed(F&& f, double a, double b, int n = 16) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
  return s * half;
}

namespace detail {

constexpr int kAdaptiveOrder = 16;

template <class F>
double adaptive_step(F& f, double a, double b, double whole, double tol, int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_fixed(f, a, mid, kAdaptiveOrder);
  const double right = gauss_fixed(f, mid, b, kAdaptiveOrder);
  const double refined = left + right;
  // The floor keeps roundoff in large panels from forcing pointless refinement.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(refined);
  if (std::fabs(refined - whole) <= std::max(tol, floor) || depth >= max_depth || !(mid > a && mid < b)) {
    if (!std::isfinite(refined)) throw ConvergenceFailure("non-finite value in adaptive quadrature");
    return refined;
  }
  const double sub_tol = tol * M_SQRT1_2;
  return adaptive_step(f, a, mid, left, sub_tol, depth + 1, max_depth) +
         adaptive_step(f, mid, b, right, sub_tol, depth + 1, max_depth);
}

template <class F>
Eigen::VectorXd gauss_fixed_vector(F& f, double a, double b, Eigen::Index dim) {
  const GaussRule& rule = gauss_legendre(kAdaptiveOrder);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
  return s * half;
}

template <class F>
Eigen::VectorXd adaptive_step_vector(F& f, double a, double b, const Eigen::VectorXd& whole, double tol, int depth,
                                     int max_depth) {
  const double mid = 0.5 * (a + b);
  Eigen::VectorXd left = gauss_fixed_vector(f, a, mid, whole.size());
  Eigen::VectorXd right = gauss_fixed_vector(f, mid, b, whole.size());
  Eigen::VectorXd refined = left + right;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * refined.lpNorm<Eigen::Infinity>();
  if ((refined - whole).lpNorm<Eigen::Infinity>() <= std::max(tol, floor) || depth >= max_depth || !(mid > a && mid < b)) {
    if (!refined.allFinite()) throw ConvergenceFailure("non-finite value in adaptive quadrature");
    return refined;
  }
  const double sub_tol = tol * M_SQRT1_2;
  return adaptive_step_vector(f, a, mid, left, sub_tol, depth + 1, max_depth) +
         adaptive_step_vector(f, mid, b, right, sub_tol, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Gauss-Legendre: an order-16 panel is accepted once it agrees with the
/// sum over its two halves to within the (absolute) tolerance.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, int max_depth = 40) {
  if (a == b) return 0.0;
  double whole = gauss_fixed(f, a, b, detail::kAdaptiveOrder);
  return detail::adaptive_step(f, a, b, whole, tol, 0, max_depth);
}

/// Vector-valued variant; the tolerance applies to the max-norm of the difference.
template <class F>
Eigen::VectorXd integrate_vector(F&& f, double a, double b, Eigen::Index dim, double tol = 1e-12,
                                 int max_depth = 40) {
  if (a == b) return Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd whole = detail::gauss_fixed_vector(f, a, b, dim);
  return detail::adaptive_step_vector(f, a, b, whole, tol, 0, max_depth);
}

/// Integral over [a, b] of g(x, dl, dr) where dl = x - a and dr = b - x are passed
/// exactly; g may blow up like an inverse square root (or a logarithm) at either end.
/// Each half is mapped by x = a + s^2 (resp. x = b - s^2), which makes the
/// inverse-square-root behaviour smooth.
template <class G>
double integrate_endpoint_singular(G&& g, double a, double b, double tol = 1e-12, int max_depth = 40) {
  detail::require(a <= b, "integration bounds must satisfy a <= b");
  if (a == b) return 0.0;
  const double len = b - a;
  const double root = std::sqrt(0.5 * len);
  auto left = [&](double s) {
    const double dl = s * s;
    return 2.0 * s * g(a + dl, dl, len - dl);
  };
  auto right = [&](double s) {
    const double dr = s * s;
    return 2.0 * s * g(b - dr, len - dr, dr);
  };
  return integrate(left, 0.0, root, 0.5 * tol, max_depth) + integrate(right, 0.0, root, 0.5 * tol, max_depth);
}

template <class G>
Eigen::VectorXd integrate_endpoint_singular_vector(G&& g, double a, double b, Eigen::Index dim, double tol = 1e-12,
                                                   int max_depth = 40) {
  detail::require(a <= b, "integration bounds must satisfy a <= b");
  if (a == b) return Eigen::VectorXd::Zero(dim);
  const double len = b - a;
  const double root = std::sqrt(0.5 * len);
  auto left = [&](double s) -> Eigen::VectorXd {
    const double dl = s * s;
    return (2.0 * s) * g(a + dl, dl, len - dl);
  };
  auto right = [&](double s) -> Eigen::VectorXd {
    const double dr = s * s;
    return (2.0 * s) * g(b - dr, len - dr, dr);
  };
  return integrate_vector(left, 0.0, root, dim, 0.5 * tol, max_depth) +
         integrate_vector(right, 0.0, root, dim, 0.5 * tol, max_depth);
}

}  // namespace eqcap
