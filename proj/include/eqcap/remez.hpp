#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/polynomial.hpp"

namespace eqcap {

/// Polynomial stored in the Chebyshev basis of u = (x - center) / half.
struct ChebyshevSeries {
  double center = 0.0;
  double half = 1.0;
  std::vector<double> a;  // coefficients of T_0(u), ..., T_n(u)

  double operator()(double x) const {
    const double u = (x - center) / half;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = a.size(); k-- > 1;) {
      const double b0 = 2.0 * u * b1 - b2 + a[k];
      b2 = b1;
      b1 = b0;
    }
    return u * b1 - b2 + (a.empty() ? 0.0 : a[0]);
  }

  RealPoly to_monomial() const {
    const RealPoly u = RealPoly{-center / half, 1.0 / half};
    RealPoly t_prev = RealPoly::constant(1.0);
    RealPoly t_cur = u;
    RealPoly out = RealPoly::constant(a.empty() ? 0.0 : a[0]);
    if (a.size() > 1) out += t_cur * a[1];
    for (std::size_t k = 2; k < a.size(); ++k) {
      RealPoly t_next = RealPoly::constant(2.0) * u * t_cur - t_prev;
      out += t_next * a[k];
      t_prev = std::move(t_cur);
      t_cur = std::move(t_next);
    }
    return out;
  }
};

struct ChebyshevResult {
  double norm;      // t_n(E)
  double estimate;  // t_n(E)^(1/n)
  RealPoly poly;    // monic, monomial basis
  ChebyshevSeries series;
  std::vector<double> reference;
  int iterations;
};

namespace detail {

struct Extremum {
  double x;
  double v;
};

inline double golden_max_abs(const ChebyshevSeries& p, double lo, double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - phi * (hi - lo);
  double d = lo + phi * (hi - lo);
  double fc = std::fabs(p(c)), fd = std::fabs(p(d));
  for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = std::fabs(p(c));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = std::fabs(p(d));
    }
  }
  return fc > fd ? c : d;
}

/// Local maxima of |p| on each band, band ends included, in increasing order.
inline std::vector<Extremum> abs_extrema(const ChebyshevSeries& p, const IntervalUnion& e, int degree) {
  std::vector<Extremum> out;
  const int m = std::max(64, 16 * (degree + 1));
  for (const auto& band : e.bands()) {
    const int k = std::max(16, static_cast<int>(m * band.length() / e.diameter()) + 16);
    std::vector<double> xs(static_cast<std::size_t>(k) + 1), vs(xs.size());
    for (int i = 0; i <= k; ++i) {
      xs[static_cast<std::size_t>(i)] = band.a + band.length() * 0.5 * (1.0 - std::cos(M_PI * i / k));
    }
    xs.front() = band.a;
    xs.back() = band.b;
    for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = p(xs[i]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double here = std::fabs(vs[i]);
      const bool left_ok = (i == 0) || here >= std::fabs(vs[i - 1]);
      const bool right_ok = (i + 1 == xs.size()) || here >= std::fabs(vs[i + 1]);
      if (!(left_ok && right_ok)) continue;
      double x = xs[i];
      if (i > 0 && i + 1 < xs.size()) x = golden_max_abs(p, xs[i - 1], xs[i + 1]);
      out.push_back({x, p(x)});
    }
  }
  return out;
}

}  // namespace detail

/// Monic degree-n polynomial of least sup norm on E by the Remez exchange,
/// in a Chebyshev basis centered on the hull of E.
inline ChebyshevResult chebyshev_constant(const IntervalUnion& e, int n, double tol = 1e-12, int max_iter = 200) {
  detail::require(n >= 1, "Chebyshev polynomial degree must be at least 1");
  ChebyshevSeries p;
  p.center = e.center();
  p.half = 0.5 * e.diameter();
  p.a.assign(static_cast<std::size_t>(n) + 1, 0.0);
  // Monic in x: the T_n(u) coefficient is half^n / 2^(n-1).
  const double lead = std::exp(n * std::log(p.half) - (n - 1) * std::log(2.0));
  p.a.back() = lead;

  // Initial reference: n + 1 points shared among bands in proportion to length.
  std::vector<double> ref;
  {
    const std::size_t nb = e.size();
    std::vector<int> count(nb, 0);
    std::vector<std::pair<double, std::size_t>> rem;
    int used = 0;
    for (std::size_t j = 0; j < nb; ++j) {
      const double share = (n + 1) * e[j].length() / e.total_length();
      count[j] = static_cast<int>(std::floor(share));
      used += count[j];
      rem.emplace_back(share - count[j], j);
    }
    std::sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t i = 0; used < n + 1; ++i, ++used) ++count[rem[i % rem.size()].second];
    for (std::size_t j = 0; j < nb; ++j) {
      const int k = count[j];
      for (int i = 0; i < k; ++i) {
        const double t = (k == 1) ? 0.5 : 0.5 * (1.0 - std::cos(M_PI * i / (k - 1)));
        ref.push_back(e[j].a + t * e[j].length());
      }
    }
  }

  const auto np1 = static_cast<Eigen::Index>(n + 1);
  double level = 0.0;
  double norm = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    Eigen::MatrixXd a(np1, np1);
    Eigen::VectorXd rhs(np1);
    for (Eigen::Index i = 0; i < np1; ++i) {
      const double u = (ref[static_cast<std::size_t>(i)] - p.center) / p.half;
      // T_k(u) by recurrence.
      double t0 = 1.0, t1 = u;
      for (Eigen::Index k = 0; k < n; ++k) {
        a(i, k) = (k == 0) ? 1.0 : t1;
        if (k >= 1) {
          const double t2 = 2.0 * u * t1 - t0;
          t0 = t1;
          t1 = t2;
        }
      }
      const double tn = (n == 1) ? u : t1;
      a(i, n) = (i % 2 == 0) ? -1.0 : 1.0;
      rhs(i) = -lead * tn;
    }
    Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
    if (!sol.allFinite()) throw ConvergenceFailure("Remez linear system is singular");
    for (int k = 0; k < n; ++k) p.a[static_cast<std::size_t>(k)] = sol(k);
    level = std::fabs(sol(n));

    auto ext = detail::abs_extrema(p, e, n);
    auto glob = std::max_element(ext.begin(), ext.end(),
                                 [](const auto& x, const auto& y) { return std::fabs(x.v) < std::fabs(y.v); });
    norm = std::fabs(glob->v);

    if (norm - level <= tol * norm) {
      // Alternation check on the final reference.
      bool alternates = true;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const double v = p(ref[i]);
        if (std::fabs(std::fabs(v) - norm) > 1e-8 * norm) alternates = false;
        if (i > 0 && (v > 0) == (p(ref[i - 1]) > 0)) alternates = false;
      }
      if (!alternates) throw ConvergenceFailure("Remez reference lost alternation at convergence");
      ChebyshevResult out{norm, std::pow(norm, 1.0 / n), p.to_monomial(), p, ref, iter};
      // Pin the leading coefficient exactly; rounding in the basis change perturbs it.
      std::vector<double> c = out.poly.coeffs();
      c.resize(static_cast<std::size_t>(n) + 1, 0.0);
      c.back() = 1.0;
      out.poly = RealPoly(std::move(c));
      return out;
    }

    // Multi-point exchange: merge same-sign runs, keep the largest of each.
    std::vector<detail::Extremum> alt;
    for (const auto& x : ext) {
      if (!alt.empty() && (alt.back().v > 0) == (x.v > 0)) {
        if (std::fabs(x.v) > std::fabs(alt.back().v)) alt.back() = x;
      } else {
        alt.push_back(x);
      }
    }
    if (static_cast<int>(alt.size()) >= n + 1) {
      while (static_cast<int>(alt.size()) > n + 1) {
        if (std::fabs(alt.front().v) < std::fabs(alt.back().v)) alt.erase(alt.begin());
        else alt.pop_back();
      }
      for (std::size_t i = 0; i < alt.size(); ++i) ref[i] = alt[i].x;
    } else {
      // Single exchange of the global maximum into the current reference.
      const double z = glob->x;
      const bool sz = glob->v > 0;
      auto sign_at = [&](std::size_t i) { return p(ref[i]) > 0; };
      if (z < ref.front()) {
        if (sign_at(0) == sz) ref.front() = z;
        else {
          ref.insert(ref.begin(), z);
          ref.pop_back();
        }
      } else if (z > ref.back()) {
        if (sign_at(ref.size() - 1) == sz) ref.back() = z;
        else {
          ref.push_back(z);
          ref.erase(ref.begin());
        }
      } else {
        auto it = std::upper_bound(ref.begin(), ref.end(), z);
        std::size_t hi = static_cast<std::size_t>(it - ref.begin());
        std::size_t lo = hi - 1;
        if (sign_at(lo) == sz) ref[lo] = z;
        else ref[hi] = z;
      }
    }
  }
  throw ConvergenceFailure("Remez exchange did not converge within the iteration cap");
}

}  // namespace eqcap
