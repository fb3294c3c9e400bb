#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqcap/abel.hpp"
#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/rational.hpp"
#include "eqcap/remez.hpp"
#include "eqcap/roots.hpp"

namespace eqcap {

/// Solution of P^2 - D Q^2 = M^2 with P monic of degree r whose extremal set is E.
struct PellAbelDatum {
  IntervalUnion E = IntervalUnion::single(-1.0, 1.0);
  RealPoly P;
  RealPoly Q;
  RealPoly D;
  RealPoly R;  // gap polynomial of E, used by the derivative clause
  double M = 0.0;
  int r = 0;
  std::vector<int> r_j;
  // Exact counterparts, present when every coefficient was recognized as rational
  // and the identity held exactly.
  std::optional<ExactPoly> P_exact;
  std::optional<ExactPoly> Q_exact;
  std::optional<ExactPoly> D_exact;
  std::optional<Rational> M_exact;

  double lambda() const { return 0.5 * M; }
  bool exact() const { return P_exact.has_value(); }
};

inline std::vector<double> rotation_numbers(const AbelDatum& datum) { return datum.omega; }

struct PellAbelDetection {
  int r;
  std::vector<int> r_j;
};

inline std::optional<PellAbelDetection> detect_pell_abel(const std::vector<double>& omega, int max_denominator = 64,
                                                         double tol = 1e-9) {
  detail::require(max_denominator >= 1, "max_denominator must be at least 1");
  detail::require(!omega.empty(), "rotation numbers must be nonempty");
  for (int r = 1; r <= max_denominator; ++r) {
    std::vector<int> rj;
    bool ok = true;
    for (double w : omega) {
      const double v = r * w;
      const double k = std::round(v);
      if (k < 1.0 || std::fabs(v - k) > tol) {
        ok = false;
        break;
      }
      rj.push_back(static_cast<int>(k));
    }
    if (ok) return PellAbelDetection{r, rj};
  }
  return std::nullopt;
}

inline std::optional<PellAbelDetection> detect_pell_abel(const AbelDatum& datum, int max_denominator = 64,
                                                         double tol = 1e-9) {
  return detect_pell_abel(datum.omega, max_denominator, tol);
}

namespace detail {

/// Monic square root of a polynomial of even degree with leading coefficient 1,
/// by the leading-coefficient recursion; the remainder S - Q^2 is returned too.
inline std::pair<RealPoly, RealPoly> poly_sqrt(const RealPoly& s) {
  require(s.degree() >= 0 && s.degree() % 2 == 0, "square root needs an even-degree polynomial");
  const int m = s.degree() / 2;
  std::vector<double> q(static_cast<std::size_t>(m) + 1, 0.0);
  const double lead = std::sqrt(s.leading());
  q[static_cast<std::size_t>(m)] = lead;
  for (int k = 1; k <= m; ++k) {
    const int deg = 2 * m - k;
    double acc = s[static_cast<std::size_t>(deg)];
    for (int i = m - k + 1; i <= m; ++i) {
      const int j = deg - i;
      if (j > m - k && j <= m) acc -= q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(j)];
    }
    q[static_cast<std::size_t>(m - k)] = acc / (2.0 * lead);
  }
  RealPoly qp(q);
  return {qp, s - qp * qp};
}

inline double max_abs_coeff(const RealPoly& p) {
  double m = 0.0;
  for (double c : p.coeffs()) m = std::max(m, std::fabs(c));
  return m;
}

/// Recognizes every coefficient as a rational of bounded denominator.
inline std::optional<ExactPoly> snap_exact(const RealPoly& p, long max_den = 4096, double rel = 1e-9) {
  std::vector<Rational> c;
  for (double v : p.coeffs()) {
    Rational q = approximate_rational(v, max_den);
    if (std::fabs(q.get_d() - v) > rel * (1.0 + std::fabs(v))) return std::nullopt;
    c.push_back(q);
  }
  return ExactPoly(std::move(c));
}

}  // namespace detail

/// Synthesizes P = M cos(theta) on E by a monic least-squares fit, then Q from
/// (P^2 - M^2) / D.
inline PellAbelDatum construct_pa_polynomial(const AbelDatum& datum, int r, double tol_rat = 1e-9) {
  detail::require(r >= 1, "degree r must be at least 1");
  const IntervalUnion& e = datum.E;
  const int g = e.genus();
  std::vector<int> rj;
  int sum = 0;
  for (double w : datum.omega) {
    const double v = r * w;
    const double k = std::round(v);
    if (k < 1.0 || std::fabs(v - k) > tol_rat) {
      throw InvalidArgument("r * omega_j is not a positive integer for r = " + std::to_string(r));
    }
    rj.push_back(static_cast<int>(k));
    sum += static_cast<int>(k);
  }
  if (sum != r) throw CertificationFailure("band root counts do not add up to r");

  const BandDensity mu(datum);
  PellAbelDatum out;
  out.E = e;
  out.r = r;
  out.r_j = rj;
  out.D = datum.D;
  out.R = datum.R;
  out.M = 2.0 * std::pow(datum.capacity(), r);
  const double M = out.M;

  // Signs at the right end of each band: +M on the last, flipping by (-1)^{r_{j+1}}.
  std::vector<double> sign(static_cast<std::size_t>(g) + 1, 1.0);
  for (int j = g - 1; j >= 0; --j) {
    sign[static_cast<std::size_t>(j)] = sign[static_cast<std::size_t>(j + 1)] * ((rj[static_cast<std::size_t>(j + 1)] % 2) ? -1.0 : 1.0);
  }

  ChebyshevSeries fit;
  fit.center = e.center();
  fit.half = 0.5 * e.diameter();
  fit.a.assign(static_cast<std::size_t>(r) + 1, 0.0);
  const double lead = std::exp(r * std::log(fit.half) - (r - 1) * std::log(2.0));
  fit.a.back() = lead;

  const int per_band = std::max(4 * r, 32);
  std::vector<double> xs, ys;
  for (int j = 0; j <= g; ++j) {
    const Band& b = e[static_cast<std::size_t>(j)];
    for (int i = 0; i < per_band; ++i) {
      const double t = 0.5 * (1.0 - std::cos(M_PI * (i + 0.5) / per_band));
      const double x = b.a + t * b.length();
      // Mass from x to b_j.
      const double g_j = mu.segment_mass(static_cast<std::size_t>(j), t * b.length(), 0.0);
      xs.push_back(x);
      ys.push_back(sign[static_cast<std::size_t>(j)] * M * std::cos(r * M_PI * g_j));
    }
  }
  const auto rows = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd a(rows, r);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double u = (xs[static_cast<std::size_t>(i)] - fit.center) / fit.half;
    double t0 = 1.0, t1 = u;
    for (int k = 0; k < r; ++k) {
      if (k == 0) a(i, 0) = 1.0;
      else {
        a(i, k) = t1;
        const double t2 = 2.0 * u * t1 - t0;
        t0 = t1;
        t1 = t2;
      }
    }
    const double tr = (r == 1) ? u : t1;
    rhs(i) = ys[static_cast<std::size_t>(i)] - lead * tr;
  }
  Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
  for (int k = 0; k < r; ++k) fit.a[static_cast<std::size_t>(k)] = sol(k);
  double fit_resid = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) fit_resid = std::max(fit_resid, std::fabs(fit(xs[i]) - ys[i]));
  if (fit_resid > 1e-6 * M) {
    throw CertificationFailure("Pell-Abel fit residual " + std::to_string(fit_resid / M) + " * M exceeds 1e-6 * M");
  }
  {
    std::vector<double> c = fit.to_monomial().coeffs();
    c.resize(static_cast<std::size_t>(r) + 1, 0.0);
    c.back() = 1.0;
    out.P = RealPoly(std::move(c));
  }

  const RealPoly num = out.P * out.P - RealPoly::constant(M * M);
  auto [q2, rem] = divmod(num, out.D);
  const double scale = std::max(1.0, detail::max_abs_coeff(num));
  if (detail::max_abs_coeff(rem) > 1e-6 * scale) {
    throw CertificationFailure("(P^2 - M^2) is not divisible by D (remainder " +
                               std::to_string(detail::max_abs_coeff(rem) / scale) + ")");
  }
  auto [q, sq_rem] = detail::poly_sqrt(q2);
  if (detail::max_abs_coeff(sq_rem) > 1e-6 * std::max(1.0, detail::max_abs_coeff(q2))) {
    throw CertificationFailure("(P^2 - M^2) / D is not a perfect square");
  }
  out.Q = q;

  // Exact recognition: P, Q, D and M^2 with small denominators satisfying the identity exactly.
  auto pe = detail::snap_exact(out.P);
  auto qe = detail::snap_exact(out.Q);
  auto de = detail::snap_exact(out.D);
  auto m2 = detail::snap_exact(RealPoly::constant(M * M));
  if (pe && qe && de && m2) {
    const Rational m2v = (*m2)[0];
    if ((*pe) * (*pe) - (*de) * (*qe) * (*qe) == ExactPoly::constant(m2v)) {
      out.P_exact = pe;
      out.Q_exact = qe;
      out.D_exact = de;
      Rational mq = approximate_rational(M, 4096);
      if (mq * mq == m2v) {
        out.M_exact = mq;
        out.M = mq.get_d();
      }
    }
  }
  return out;
}

struct StructureClause {
  std::string name;
  bool passed;
  std::string detail;
};

struct StructureReport {
  std::vector<StructureClause> clauses;
  bool all_passed() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const auto& c) { return c.passed; });
  }
  const StructureClause* find(const std::string& name) const {
    for (const auto& c : clauses) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

/// Sub-intervals of band j cut by the interior roots of Q.
inline std::vector<std::pair<double, double>> pa_subintervals(const PellAbelDatum& pa, std::size_t j) {
  const Band& b = pa.E[j];
  std::vector<double> cuts{b.a};
  if (pa.Q.degree() >= 1) {
    const double pad = 1e-9 * b.length();
    for (const auto& br : isolate_real_roots(pa.Q, IntervalUnion::single(b.a + pad, b.b - pad))) cuts.push_back(br.midpoint());
  }
  cuts.push_back(b.b);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.emplace_back(cuts[i], cuts[i + 1]);
  return out;
}

inline StructureReport certify_structure(const PellAbelDatum& pa) {
  StructureReport rep;
  const double M = pa.M;
  const IntervalUnion& e = pa.E;
  auto add = [&](std::string name, bool ok, std::string det) { rep.clauses.push_back({std::move(name), ok, std::move(det)}); };

  {
    const RealPoly lhs = pa.P * pa.P - pa.D * pa.Q * pa.Q - RealPoly::constant(M * M);
    const double scale = std::max(M * M, detail::max_abs_coeff(pa.P * pa.P));
    const double res = detail::max_abs_coeff(lhs) / scale;
    bool ok = res < 1e-8;
    std::string det = "relative coefficient residual " + std::to_string(res);
    if (pa.exact() && pa.M_exact) {
      const bool exact_ok = (*pa.P_exact) * (*pa.P_exact) - (*pa.D_exact) * (*pa.Q_exact) * (*pa.Q_exact) ==
                            ExactPoly::constant(Rational((*pa.M_exact) * (*pa.M_exact)));
      ok = ok && exact_ok;
      det += exact_ok ? "; exact identity holds" : "; exact identity fails";
    }
    add("identity", ok, det);
  }

  {
    int sum = 0;
    for (int v : pa.r_j) sum += v;
    add("degree_sum", sum == pa.r && static_cast<int>(pa.r_j.size()) == static_cast<int>(e.size()),
        "sum r_j = " + std::to_string(sum) + ", r = " + std::to_string(pa.r));
  }

  {
    bool ok = true;
    std::string det;
    int total = 0;
    for (std::size_t j = 0; j < e.size(); ++j) {
      const int n = static_cast<int>(isolate_real_roots(pa.P, IntervalUnion::single(e[j].a, e[j].b)).size());
      total += n;
      if (j < pa.r_j.size() && n != pa.r_j[j]) ok = false;
      det += (j ? "," : "") + std::to_string(n);
    }
    ok = ok && total == pa.r;
    add("p_roots", ok, "roots of P per band: " + det);
  }

  {
    bool ok = true;
    std::string det;
    for (std::size_t j = 0; j < e.size(); ++j) {
      const int n = static_cast<int>(pa_subintervals(pa, j).size()) - 1;
      if (j < pa.r_j.size() && n != pa.r_j[j] - 1) ok = false;
      det += (j ? "," : "") + std::to_string(n);
    }
    add("q_roots", ok, "interior roots of Q per band: " + det);
  }

  {
    // Alternation between +M and -M at the cut points, with P strictly monotone in between.
    bool ok = true;
    double worst = 0.0;
    const RealPoly dp = pa.P.derivative();
    for (std::size_t j = 0; j < e.size(); ++j) {
      const auto subs = pa_subintervals(pa, j);
      for (const auto& [lo, hi] : subs) {
        const double plo = pa.P(lo), phi = pa.P(hi);
        worst = std::max({worst, std::fabs(std::fabs(plo) - M), std::fabs(std::fabs(phi) - M)});
        if ((plo > 0) == (phi > 0)) ok = false;
        const double pad = 1e-7 * (hi - lo);
        if (dp.degree() >= 1 && !isolate_real_roots(dp, IntervalUnion::single(lo + pad, hi - pad)).empty()) ok = false;
      }
    }
    ok = ok && worst <= 1e-6 * M;
    add("alternation", ok, "max ||P| - M| at cut points " + std::to_string(worst / M) + " * M");
  }

  {
    // E = {|P| <= M}: inside on band samples, strictly outside in gaps and beyond the hull.
    bool ok = true;
    for (const auto& b : e.bands()) {
      for (int i = 0; i <= 64; ++i) {
        const double x = b.a + b.length() * i / 64.0;
        if (std::fabs(pa.P(x)) > M * (1.0 + 1e-8)) ok = false;
      }
    }
    std::vector<double> outside;
    for (int j = 1; j <= e.genus(); ++j) {
      const Band gap = e.gap(j);
      for (int i = 1; i < 32; ++i) outside.push_back(gap.a + gap.length() * i / 32.0);
    }
    for (int i = 1; i <= 32; ++i) {
      outside.push_back(e.upper() + e.diameter() * i / 32.0);
      outside.push_back(e.lower() - e.diameter() * i / 32.0);
    }
    for (double x : outside) {
      if (!(std::fabs(pa.P(x)) > M)) ok = false;
    }
    add("containment", ok, "|P| <= M on band samples and |P| > M at gap and exterior samples");
  }

  {
    const RealPoly lhs = pa.P.derivative() - RealPoly::constant(static_cast<double>(pa.r)) * pa.Q * pa.R;
    const double rel = detail::max_abs_coeff(lhs) / std::max(1e-300, detail::max_abs_coeff(pa.P.derivative()));
    add("derivative", rel < 1e-6, "relative coefficient residual of dP/dx - r Q R " + std::to_string(rel));
  }
  return rep;
}

struct RationalizeResult {
  ExactPoly P_prime;
  IntervalUnion E_prime = IntervalUnion::single(-1.0, 1.0);
  PellAbelDatum pa_prime;
  int bits = 0;  // denominators 2^bits, 0 when P was already exact
};

/// Replaces P by a nearby rational P' and M by a rational M' < M, so that
/// E' = {|P'| <= M'} sits inside E with the same root interlacing; Q' = 1.
inline RationalizeResult rationalize(const PellAbelDatum& pa, const Rational& m_prime, int max_bits = 256) {
  detail::require(sgn(m_prime) > 0, "M' must be positive");
  detail::require(m_prime.get_d() < pa.M && !(pa.M_exact && m_prime >= *pa.M_exact), "M' must be below M");
  const int r = pa.r;
  const IntervalUnion& e = pa.E;

  std::vector<std::pair<double, double>> subs;
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (const auto& s : pa_subintervals(pa, j)) subs.push_back(s);
  }

  auto attempt = [&](const ExactPoly& pp) -> std::optional<RationalizeResult> {
    const Rational m2 = m_prime * m_prime;
    const ExactPoly dprime = pp * pp - ExactPoly::constant(m2);
    if (!is_squarefree(dprime)) return std::nullopt;
    const auto roots = isolate_all_real_roots(dprime);
    if (static_cast<int>(roots.size()) != 2 * r) return std::nullopt;
    std::vector<ExactRootBracket> refined;
    for (const auto& br : roots) refined.push_back(refine(dprime, br, Rational(1, 1L << 40)));
    const ExactPoly dp = pp.derivative();
    std::vector<std::pair<double, double>> bands;
    for (int k = 0; k < r; ++k) {
      const auto& lo = refined[static_cast<std::size_t>(2 * k)];
      const auto& hi = refined[static_cast<std::size_t>(2 * k + 1)];
      // Inside: |P'| <= M' between the pair; P' has no critical point there.
      const Rational mid = (lo.hi + hi.lo) / 2;
      if (abs(pp(mid)) > m_prime) return std::nullopt;
      if (dp.degree() >= 1) {
        const ExactPoly sq = squarefree_part(dp);
        SturmSequence s(sq);
        if (s.count(lo.lo, hi.hi) != 0 || sgn(sq(lo.lo)) == 0) return std::nullopt;
      }
      // Same position as in the proof: inside the k-th sub-interval of E.
      const auto& sub = subs[static_cast<std::size_t>(k)];
      if (!(lo.lo.get_d() > sub.first && hi.hi.get_d() < sub.second)) return std::nullopt;
      if (!e.contains(lo.lo.get_d()) || !e.contains(hi.hi.get_d())) return std::nullopt;
      bands.emplace_back(lo.midpoint(), hi.midpoint());
    }
    RationalizeResult res{pp, IntervalUnion::make(bands), {}, 0};
    PellAbelDatum& q = res.pa_prime;
    q.E = res.E_prime;
    q.P = to_real(pp);
    q.Q = RealPoly::constant(1.0);
    q.D = to_real(dprime);
    q.M = m_prime.get_d();
    q.r = r;
    q.r_j.assign(static_cast<std::size_t>(r), 1);
    q.P_exact = pp;
    q.Q_exact = ExactPoly::constant(Rational(1));
    q.D_exact = dprime;
    q.M_exact = m_prime;
    // With Q' = 1 the derivative identity gives the gap polynomial of E' as dP'/dx / r.
    q.R = to_real(dp) * (1.0 / r);
    return res;
  };

  if (pa.P_exact) {
    if (auto res = attempt(*pa.P_exact)) return *res;
  }
  for (int bits = 8; bits <= max_bits; bits *= 2) {
    std::vector<Rational> c;
    for (double v : pa.P.coeffs()) c.push_back(round_dyadic(v, bits));
    c.back() = 1;
    if (auto res = attempt(ExactPoly(std::move(c)))) {
      res->bits = bits;
      return *res;
    }
  }
  throw CertificationFailure("no rational P' within the rounding budget keeps the root interlacing for this M'");
}

}  // namespace eqcap
