#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqcap/abel.hpp"
#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/measure.hpp"
#include "eqcap/pellabel.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/rational.hpp"
#include "eqcap/roots.hpp"

namespace eqcap {

/// T_n with T_n(t + 1/t) = t^n + t^-n, from the closed binomial formula.
inline ExactPoly chebyshev_Tn(int n) {
  detail::require(n >= 1, "Chebyshev index must be at least 1");
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
  c[static_cast<std::size_t>(n)] = 1;
  for (int k = 1; k <= n / 2; ++k) {
    Integer binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n - k - 1), static_cast<unsigned long>(k - 1));
    Rational term = Rational(Integer(n) * binom, Integer(k));
    term.canonicalize();
    if (k % 2 == 1) term = -term;
    c[static_cast<std::size_t>(n - 2 * k)] = term;
  }
  return ExactPoly(std::move(c));
}

/// Rational Pell-Abel datum with Q = 1 and M > 2, ready for the integer construction.
struct RobinsonInstance {
  PellAbelDatum pa;
  ExactPoly P;
  ExactPoly D;  // P^2 - M^2
  Rational M;
  Rational lambda;  // M / 2
  double A = 0.0;   // sup over E of 1 + |x| + ... + |x|^(r-1)
  int ell = 0;      // smallest l > 0 with lambda^l (lambda - 1) >= A / 2
  int r = 0;

  const IntervalUnion& E() const { return pa.E; }

  /// Exact membership test |P(x)| <= M, which is equivalent to x in E.
  bool contains(const Rational& x) const { return abs(P(x)) <= M; }
};

inline RobinsonInstance make_robinson_instance(const PellAbelDatum& pa) {
  if (!pa.P_exact || !pa.M_exact || !pa.Q_exact) throw InvalidArgument("integer construction needs an exact datum");
  if (!(*pa.Q_exact == ExactPoly::constant(Rational(1)))) throw InvalidArgument("integer construction needs Q = 1");
  if (!(*pa.M_exact > 2)) throw InvalidArgument("integer construction needs M > 2 (capacity above 1)");
  RobinsonInstance inst;
  inst.pa = pa;
  inst.P = *pa.P_exact;
  inst.M = *pa.M_exact;
  inst.lambda = inst.M / 2;
  inst.r = inst.P.degree();
  inst.D = inst.P * inst.P - ExactPoly::constant(Rational(inst.M * inst.M));
  double xmax = std::max(std::fabs(pa.E.lower()), std::fabs(pa.E.upper()));
  long double a = 0.0L, pw = 1.0L;
  for (int i = 0; i < inst.r; ++i, pw *= xmax) a += pw;
  inst.A = static_cast<double>(a);
  const long double lam = inst.lambda.get_d();
  long double lhs = lam * (lam - 1.0L);
  inst.ell = 1;
  while (lhs < a / 2.0L) {
    lhs *= lam;
    ++inst.ell;
  }
  return inst;
}

/// Instance from an exact monic P and rational M > 2: E = {|P| <= M} must consist
/// of deg P bands, which is the Q = 1 case.
inline RobinsonInstance make_robinson_instance(const ExactPoly& p, const Rational& m) {
  detail::require(p.degree() >= 1 && p.is_monic(), "P must be monic and nonconstant");
  if (!(m > 2)) throw InvalidArgument("integer construction needs M > 2 (capacity above 1)");
  const int r = p.degree();
  const ExactPoly d = p * p - ExactPoly::constant(Rational(m * m));
  if (!is_squarefree(d)) throw InvalidArgument("P^2 - M^2 must be squarefree");
  auto roots = isolate_all_real_roots(d);
  if (static_cast<int>(roots.size()) != 2 * r) {
    throw InvalidArgument("{|P| <= M} is not a union of deg P real bands");
  }
  std::vector<std::pair<double, double>> bands;
  const Rational width(1, Integer(1) << 80);
  for (int k = 0; k < r; ++k) {
    const auto lo = refine(d, roots[static_cast<std::size_t>(2 * k)], width);
    const auto hi = refine(d, roots[static_cast<std::size_t>(2 * k + 1)], width);
    bands.emplace_back(lo.midpoint(), hi.midpoint());
  }
  PellAbelDatum pa;
  pa.E = IntervalUnion::make(bands);
  detail::require(static_cast<int>(pa.E.size()) == r, "bands of {|P| <= M} must be disjoint");
  pa.P = to_real(p);
  pa.Q = RealPoly::constant(1.0);
  pa.D = to_real(d);
  pa.R = to_real(p.derivative()) * (1.0 / r);
  pa.M = m.get_d();
  pa.r = r;
  pa.r_j.assign(static_cast<std::size_t>(r), 1);
  pa.P_exact = p;
  pa.Q_exact = ExactPoly::constant(Rational(1));
  pa.D_exact = d;
  pa.M_exact = m;
  return make_robinson_instance(pa);
}

/// Reference instance P = X^2 - 6, M = 4 on [-sqrt 10, -sqrt 2] u [sqrt 2, sqrt 10].
inline RobinsonInstance robinson_preset(const std::string& name) {
  if (name == "x2m6") return make_robinson_instance(exact_poly({-6, 0, 1}), Rational(4));
  if (name == "x2m5") return make_robinson_instance(exact_poly({-5, 0, 1}), Rational(3));
  throw InvalidArgument("unknown preset '" + name + "' (known: x2m6, x2m5)");
}

namespace detail {

/// P_0 = 2, P_1 = P, P_{k+1} = P P_k - lambda^2 P_{k-1}, i.e. P_k = lambda^k T_k(P / lambda).
inline std::vector<ExactPoly> pn_sequence(const RobinsonInstance& inst, int n) {
  std::vector<ExactPoly> seq{ExactPoly::constant(Rational(2)), inst.P};
  const Rational l2 = inst.lambda * inst.lambda;
  while (static_cast<int>(seq.size()) <= n) {
    const std::size_t k = seq.size() - 1;
    seq.push_back(inst.P * seq[k] - seq[k - 1] * l2);
  }
  return seq;
}

/// Floating values P_0(x), ..., P_n(x) by the same recurrence; stable on E where
/// |P_k| <= 2 lambda^k.
inline std::vector<double> pn_values(const RobinsonInstance& inst, const RealPoly& p, int n, double x) {
  const double l2 = inst.lambda.get_d() * inst.lambda.get_d();
  std::vector<double> v{2.0, p(x)};
  while (static_cast<int>(v.size()) <= n) {
    const std::size_t k = v.size() - 1;
    v.push_back(v[1] * v[k] - l2 * v[k - 1]);
  }
  v.resize(static_cast<std::size_t>(n) + 1);
  return v;
}

}  // namespace detail

inline ExactPoly compose_Pn(const RobinsonInstance& inst, int n) {
  detail::require(n >= 1, "n must be at least 1");
  return detail::pn_sequence(inst, n)[static_cast<std::size_t>(n)];
}

/// Q_n with P_n^2 - D Q_n^2 = (2 lambda^n)^2: Q_1 = 1, Q_{k+1} = P Q_k - lambda^2 Q_{k-1}.
inline ExactPoly compose_Qn(const RobinsonInstance& inst, int n) {
  detail::require(n >= 1, "n must be at least 1");
  const Rational l2 = inst.lambda * inst.lambda;
  ExactPoly prev;
  ExactPoly cur = ExactPoly::constant(Rational(1));
  for (int k = 1; k < n; ++k) {
    ExactPoly next = inst.P * cur - prev * l2;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// True when the coefficients of x^{nr-1}, ..., x^{nr-l r} of P_n are integers
/// (all coefficients when n <= l).
inline bool certify_integrality(const RobinsonInstance& inst, int n) {
  const ExactPoly pn = compose_Pn(inst, n);
  const int top = n * inst.r;
  const int bottom = std::max(0, top - inst.ell * inst.r);
  for (int d = top - 1; d >= bottom; --d) {
    if (!is_integer(pn[static_cast<std::size_t>(d)])) return false;
  }
  return true;
}

struct Correction {
  int n = 0;
  ExactPoly Pn;
  ExactPoly C;
  ExactPoly P_prime;
  std::vector<std::vector<Rational>> c;  // c[k][j] multiplies x^j P_k (P_0 taken as 1)
  Rational max_abs_c;
  double sup_C = 0.0;         // sampled sup over E of |C_n|
  double analytic_bound = 0.0;  // A lambda^(n-l) / (lambda - 1)
  double two_lambda_n = 0.0;

  bool is_zero() const { return C.is_zero(); }
};

namespace detail {

/// sup over samples of E of |sum c_jk x^j P_k(x)|, evaluated through the basis.
inline double sup_correction(const RobinsonInstance& inst, const Correction& corr, int samples_per_band = 2000) {
  if (corr.C.is_zero()) return 0.0;
  const RealPoly p = to_real(inst.P);
  const int kmax = static_cast<int>(corr.c.size());
  std::vector<std::vector<double>> cd(corr.c.size());
  for (std::size_t k = 0; k < corr.c.size(); ++k) {
    for (const auto& v : corr.c[k]) cd[k].push_back(v.get_d());
  }
  double sup = 0.0;
  for (const auto& band : inst.E().bands()) {
    for (int i = 0; i <= samples_per_band; ++i) {
      const double x = band.a + band.length() * 0.5 * (1.0 - std::cos(M_PI * i / samples_per_band));
      const auto pk = pn_values(inst, p, std::max(kmax - 1, 1), x);
      double s = 0.0;
      for (int k = 0; k < kmax; ++k) {
        const double basis = (k == 0) ? 1.0 : pk[static_cast<std::size_t>(k)];
        double inner = 0.0, xp = 1.0;
        for (int j = 0; j < inst.r; ++j, xp *= x) inner += cd[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * xp;
        s += inner * basis;
      }
      sup = std::max(sup, std::fabs(s));
    }
  }
  return sup;
}

}  // namespace detail

/// The bounded correction C_n = sum c_jk x^j P_k (0 <= j < r, 0 <= k < n - l) with
/// c_jk in [-1/2, 1/2), chosen from the top degree down so that P_n - C_n is integral.
inline Correction correction_Cn(const RobinsonInstance& inst, int n) {
  detail::require(n >= 1, "n must be at least 1");
  Correction out;
  out.n = n;
  const auto seq = detail::pn_sequence(inst, n);
  out.Pn = seq[static_cast<std::size_t>(n)];
  const int top = n * inst.r;
  const int bottom = std::max(0, top - inst.ell * inst.r);
  for (int d = top - 1; d >= bottom; --d) {
    if (!is_integer(out.Pn[static_cast<std::size_t>(d)])) {
      throw InvalidArgument("top coefficients of P_n are not integral for n = " + std::to_string(n));
    }
  }
  const int kcount = std::max(0, n - inst.ell);
  out.c.assign(static_cast<std::size_t>(kcount), std::vector<Rational>(static_cast<std::size_t>(inst.r), Rational(0)));
  ExactPoly f = out.Pn;
  out.max_abs_c = 0;
  for (int k = kcount - 1; k >= 0; --k) {
    const ExactPoly basis_k = (k == 0) ? ExactPoly::constant(Rational(1)) : seq[static_cast<std::size_t>(k)];
    for (int j = inst.r - 1; j >= 0; --j) {
      const int d = j + k * inst.r;
      const Rational coeff = f[static_cast<std::size_t>(d)];
      Rational c = coeff - Rational(round_half_down(coeff));
      if (sgn(c) == 0) continue;
      out.c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = c;
      out.max_abs_c = std::max(out.max_abs_c, Rational(abs(c)));
      f -= ExactPoly::monomial(j, c) * basis_k;
    }
  }
  if (!f.is_integer()) {
    // Degrees below (n - l) r are all covered by the basis, so this cannot happen when n > l.
    throw CertificationFailure("P_n - C_n is not integral for n = " + std::to_string(n));
  }
  out.P_prime = f;
  out.C = out.Pn - f;
  const double lam = inst.lambda.get_d();
  out.two_lambda_n = 2.0 * std::pow(lam, n);
  out.analytic_bound = inst.A * std::pow(lam, n - inst.ell) / (lam - 1.0);
  out.sup_C = detail::sup_correction(inst, out);
  return out;
}

struct RootCertificate {
  int n = 0;
  int degree = 0;
  std::vector<Rational> points;              // sign-alternation points, increasing, all in E
  std::vector<ExactRootBracket> brackets;    // one simple root of P'_n in each
  std::vector<int> per_band;                 // roots per band of E
  std::vector<double> roots;                 // floating roots refined inside the brackets
  bool valid = false;
};

struct RobinsonResult {
  int n = 0;
  ExactPoly P_prime;
  Correction correction;
  RootCertificate certificate;
};

namespace detail {

/// Floating evaluation of P'_n = P_n - C_n through the recurrence and the basis.
inline double eval_prime(const RobinsonInstance& inst, const Correction& corr, const RealPoly& p, double x) {
  const auto pk = pn_values(inst, p, corr.n, x);
  double s = pk[static_cast<std::size_t>(corr.n)];
  for (std::size_t k = 0; k < corr.c.size(); ++k) {
    const double basis = (k == 0) ? 1.0 : pk[k];
    double inner = 0.0, xp = 1.0;
    for (int j = 0; j < inst.r; ++j, xp *= x) inner += corr.c[k][static_cast<std::size_t>(j)].get_d() * xp;
    s -= inner * basis;
  }
  return s;
}

/// Point of band j where P = 2 lambda cos(t), t in [0, pi]; P is monotone on each band.
inline double band_point(const RobinsonInstance& inst, const RealPoly& p, std::size_t j, double target) {
  const Band& b = inst.E()[j];
  double lo = b.a, hi = b.b;
  const bool increasing = p(hi) > p(lo);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((p(mid) < target) == increasing) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Exact certificate that P'_n has n r simple roots in E: at rational points where
/// P_n = +-2 lambda^n (nearly), |C_n| < 2 lambda^n forces P'_n to alternate in sign.
inline RootCertificate certify_roots(const RobinsonInstance& inst, const Correction& corr) {
  RootCertificate cert;
  cert.n = corr.n;
  cert.degree = corr.P_prime.degree();
  const RealPoly p = to_real(inst.P);
  const double lam = inst.lambda.get_d();
  const int n = corr.n;
  for (std::size_t j = 0; j < inst.E().size(); ++j) {
    const Band& b = inst.E()[j];
    std::vector<Rational> pts;
    for (int k = 0; k <= n; ++k) {
      // On band j, P_n = 2 lambda^n cos(n t) where P = 2 lambda cos t; extremes at t = k pi / n.
      const double t = M_PI * k / n;
      double x = detail::band_point(inst, p, j, 2.0 * lam * std::cos(t));
      const double inset = 1e-9 * b.length();
      x = std::clamp(x, b.a + inset, b.b - inset);
      Rational q = exact(x);
      if (!inst.contains(q)) return cert;
      pts.push_back(q);
    }
    // P decreases across the band in t, so the points run one way or the other.
    if (pts.back() < pts.front()) std::reverse(pts.begin(), pts.end());
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (!(pts[i] > pts[i - 1])) return cert;
    }
    int count = 0;
    int prev = sgn(corr.P_prime(pts[0]));
    if (prev == 0) return cert;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const int s = sgn(corr.P_prime(pts[i]));
      if (s == 0 || s == prev) return cert;
      cert.brackets.push_back({pts[i - 1], pts[i]});
      prev = s;
      ++count;
    }
    cert.per_band.push_back(count);
    for (auto& q : pts) cert.points.push_back(q);
  }
  if (static_cast<int>(cert.brackets.size()) != cert.degree) return cert;
  for (const auto& br : cert.brackets) {
    double lo = br.lo.get_d(), hi = br.hi.get_d();
    double flo = detail::eval_prime(inst, corr, p, lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = detail::eval_prime(inst, corr, p, mid);
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
    cert.roots.push_back(0.5 * (lo + hi));
  }
  cert.valid = true;
  return cert;
}

/// Smallest n with n r >= degree_target for which P_n has integral top coefficients
/// (or is integral outright), then the corrected integer polynomial with its certificate.
inline RobinsonResult generate(const RobinsonInstance& inst, int degree_target, int max_degree = 256) {
  detail::require(degree_target >= 1, "degree target must be at least 1");
  const int n0 = (degree_target + inst.r - 1) / inst.r;
  const int n_max = max_degree / inst.r;
  const auto seq = detail::pn_sequence(inst, std::max(n_max, 1));
  auto top_integral = [&](int n) {
    const ExactPoly& pn = seq[static_cast<std::size_t>(n)];
    const int top = n * inst.r;
    for (int d = top - 1; d >= std::max(0, top - inst.ell * inst.r); --d) {
      if (!is_integer(pn[static_cast<std::size_t>(d)])) return false;
    }
    return true;
  };
  std::string tried;
  for (int n = n0; n <= n_max; ++n) {
    const bool integral = seq[static_cast<std::size_t>(n)].is_integer();
    if (!integral && (n <= inst.ell || !top_integral(n))) {
      if (tried.size() < 200) tried += (tried.empty() ? "" : ",") + std::to_string(n);
      continue;
    }
    RobinsonResult res;
    res.n = n;
    res.correction = correction_Cn(inst, n);
    res.P_prime = res.correction.P_prime;
    if (!res.P_prime.is_monic() || !res.P_prime.is_integer()) {
      throw CertificationFailure("corrected polynomial is not monic with integer coefficients");
    }
    if (!(res.correction.sup_C < res.correction.two_lambda_n)) {
      throw CertificationFailure("sup |C_n| on E is not below 2 lambda^n");
    }
    res.certificate = certify_roots(inst, res.correction);
    if (!res.certificate.valid) throw CertificationFailure("sign alternation certificate failed for n = " + std::to_string(n));
    return res;
  }
  throw CertificationFailure("no n with n r <= " + std::to_string(max_degree) +
                             " makes the top l r coefficients of P_n integral (l = " + std::to_string(inst.ell) +
                             "; rejected n: " + tried + "); the divisibility modulus m exceeds the search range");
}

/// Kolmogorov distance between a discrete measure on the line and mu_E.
inline double kolmogorov_distance(const DiscreteMeasure& nu, const BandDensity& mu) {
  std::vector<std::pair<double, double>> atoms;
  for (const auto& a : nu.atoms()) atoms.emplace_back(a.location.real(), a.weight);
  std::sort(atoms.begin(), atoms.end());
  const double total = nu.total_mass();
  double cum = 0.0, dist = 0.0;
  for (const auto& [x, w] : atoms) {
    const double f = mu.cdf(x);
    dist = std::max(dist, std::fabs(cum / total - f));
    cum += w;
    dist = std::max(dist, std::fabs(cum / total - f));
  }
  return dist;
}

inline std::vector<double> convergence_report(const std::vector<DiscreteMeasure>& measures, const BandDensity& mu) {
  std::vector<double> out;
  for (const auto& m : measures) out.push_back(kolmogorov_distance(m, mu));
  return out;
}

}  // namespace eqcap
