#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/rational.hpp"

namespace eqcap {

/// All complex roots with multiplicity: companion-matrix eigenvalues polished by
/// a few Newton steps in extended precision.
inline std::vector<std::complex<double>> complex_roots(const RealPoly& p) {
  detail::require(p.degree() >= 1, "root finding needs a nonconstant polynomial");
  const int n = p.degree();
  const double lead = p.leading();
  // Leading zero roots are split off exactly.
  int zeros = 0;
  while (p[static_cast<std::size_t>(zeros)] == 0.0) ++zeros;
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(zeros), {0.0, 0.0});
  const int m = n - zeros;
  if (m == 0) return roots;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) {
    companion(i, m - 1) = -p[static_cast<std::size_t>(i + zeros)] / lead;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw ConvergenceFailure("companion eigenvalue solver failed");
  const auto& ev = solver.eigenvalues();

  using Cld = std::complex<long double>;
  for (int i = 0; i < m; ++i) {
    Cld z(ev[i].real(), ev[i].imag());
    for (int it = 0; it < 4; ++it) {
      Cld f = 0, df = 0;
      for (int k = n; k >= 0; --k) {
        df = df * z + f;
        f = f * z + static_cast<long double>(p[static_cast<std::size_t>(k)]);
      }
      if (std::abs(df) == 0.0L) break;
      Cld step = f / df;
      // Newton on a multiple root converges slowly and may wander; only accept shrinking steps.
      if (!(std::abs(step) < 1e-3L * (1.0L + std::abs(z)))) break;
      z -= step;
    }
    roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return roots;
}

inline std::vector<std::complex<double>> complex_roots(const ExactPoly& p) { return complex_roots(to_real(p)); }

/// Sturm sequence p, p', -rem(p, p'), ...
class SturmSequence {
 public:
  explicit SturmSequence(const ExactPoly& p) {
    detail::require(p.degree() >= 1, "Sturm sequence needs a nonconstant polynomial");
    seq_.push_back(p);
    seq_.push_back(p.derivative());
    while (seq_.back().degree() > 0) {
      ExactPoly r = seq_[seq_.size() - 2] % seq_.back();
      if (r.is_zero()) break;
      // Positive rescaling keeps signs and tames coefficient growth.
      Rational scale = abs(r.leading());
      seq_.push_back(-(r * Rational(1 / scale)));
    }
  }

  /// Sign variations at a rational point; zeros are skipped.
  int variations(const Rational& x) const {
    int count = 0;
    int last = 0;
    for (const auto& q : seq_) {
      int s = sgn(q(x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  /// Sign variations at +infinity (dir = +1) or -infinity (dir = -1).
  int variations_at_infinity(int dir) const {
    int count = 0;
    int last = 0;
    for (const auto& q : seq_) {
      int s = sgn(q.leading());
      if (dir < 0 && q.degree() % 2 == 1) s = -s;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  /// Distinct real roots in the half-open interval (lo, hi].
  int count(const Rational& lo, const Rational& hi) const { return variations(lo) - variations(hi); }
  int count_real() const { return variations_at_infinity(-1) - variations_at_infinity(+1); }

  const std::vector<ExactPoly>& polys() const { return seq_; }

 private:
  std::vector<ExactPoly> seq_;
};

/// A root of an exact polynomial known to lie in (lo, hi]; lo == hi marks an exact root.
struct ExactRootBracket {
  Rational lo;
  Rational hi;

  double midpoint() const { return Rational((lo + hi) / 2).get_d(); }
};

struct RootBracket {
  double lo;
  double hi;

  double midpoint() const { return 0.5 * (lo + hi); }
};

namespace detail {

inline void sturm_bisect(const SturmSequence& s, const ExactPoly& p, Rational lo, Rational hi, int count,
                         std::vector<ExactRootBracket>& out) {
  if (count == 0) return;
  if (count == 1) {
    if (sgn(p(hi)) == 0) {
      out.push_back({hi, hi});
    } else {
      out.push_back({lo, hi});
    }
    return;
  }
  Rational mid = (lo + hi) / 2;
  int left = s.count(lo, mid);
  sturm_bisect(s, p, lo, mid, left, out);
  sturm_bisect(s, p, mid, hi, count - left, out);
}

}  // namespace detail

/// Certified isolation of the real roots of an exact squarefree polynomial inside
/// the window, by exact Sturm sequences. Each bracket holds exactly one root.
inline std::vector<ExactRootBracket> isolate_real_roots(const ExactPoly& p, const IntervalUnion& window) {
  detail::require(p.degree() >= 1, "root isolation needs a nonconstant polynomial");
  if (!is_squarefree(p)) throw InvalidArgument("root isolation needs a squarefree polynomial");
  SturmSequence s(p);
  std::vector<ExactRootBracket> out;
  for (const auto& band : window.bands()) {
    Rational a = exact(band.a);
    Rational b = exact(band.b);
    if (sgn(p(a)) == 0) out.push_back({a, a});
    detail::sturm_bisect(s, p, a, b, s.count(a, b), out);
  }
  return out;
}

/// Exact real-root isolation over the whole line.
inline std::vector<ExactRootBracket> isolate_all_real_roots(const ExactPoly& p) {
  detail::require(p.degree() >= 1, "root isolation needs a nonconstant polynomial");
  if (!is_squarefree(p)) throw InvalidArgument("root isolation needs a squarefree polynomial");
  // Cauchy bound: every root satisfies |x| <= 1 + max |c_i / c_n|.
  Rational bound = 0;
  for (const auto& c : p.coeffs()) bound = std::max(bound, Rational(abs(c / p.leading())));
  bound += 1;
  SturmSequence s(p);
  std::vector<ExactRootBracket> out;
  Rational lo = -bound;
  if (sgn(p(lo)) == 0) out.push_back({lo, lo});
  detail::sturm_bisect(s, p, lo, bound, s.count(lo, bound), out);
  return out;
}

/// Shrinks an exact bracket by bisection until its width is below `width`.
inline ExactRootBracket refine(const ExactPoly& p, ExactRootBracket br, const Rational& width) {
  if (br.lo == br.hi) return br;
  int s_hi = sgn(p(br.hi));
  if (s_hi == 0) return {br.hi, br.hi};
  int s_lo = sgn(p(br.lo));
  // A root sitting exactly on lo belongs to the neighbouring bracket.
  if (s_lo == s_hi) {
    throw InvalidArgument("bracket refinement needs a sign change across (lo, hi]");
  }
  while (br.hi - br.lo > width) {
    Rational mid = (br.lo + br.hi) / 2;
    int s = sgn(p(mid));
    if (s == 0) return {mid, mid};
    if (s == s_hi) br.hi = mid;
    else br.lo = mid;
  }
  return br;
}

/// Real roots inside the window for a floating polynomial assumed squarefree there:
/// sign changes on an adaptive grid, bisection, then Newton polishing.
inline std::vector<RootBracket> isolate_real_roots(const RealPoly& p, const IntervalUnion& window) {
  detail::require(p.degree() >= 1, "root isolation needs a nonconstant polynomial");
  const RealPoly dp = p.derivative();
  std::vector<RootBracket> out;
  for (const auto& band : window.bands()) {
    // Grid fine enough that consecutive roots of a degree-d polynomial are separated.
    const int n = std::max(64, 32 * p.degree());
    std::vector<double> xs(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
      // Cosine spacing clusters where polynomial roots cluster.
      double t = 0.5 * (1.0 - std::cos(M_PI * i / n));
      xs[static_cast<std::size_t>(i)] = band.a + (band.b - band.a) * t;
    }
    xs.front() = band.a;
    xs.back() = band.b;
    double prev = p(xs[0]);
    if (prev == 0.0) out.push_back({xs[0], xs[0]});
    for (int i = 1; i <= n; ++i) {
      double x = xs[static_cast<std::size_t>(i)];
      double v = p(x);
      if (v == 0.0) {
        out.push_back({x, x});
      } else if (prev != 0.0 && (prev < 0) != (v < 0)) {
        double lo = xs[static_cast<std::size_t>(i - 1)];
        double hi = x;
        double flo = prev;
        for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::fabs(lo)); ++it) {
          double mid = 0.5 * (lo + hi);
          double fm = p(mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        double z = 0.5 * (lo + hi);
        for (int it = 0; it < 3; ++it) {
          double d = dp(z);
          if (d == 0.0) break;
          double next = z - p(z) / d;
          if (next < lo || next > hi) break;
          z = next;
        }
        out.push_back({std::min(lo, z), std::max(hi, z)});
      }
      prev = v;
    }
  }
  return out;
}

}  // namespace eqcap
