#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "eqcap/density.hpp"
#include "eqcap/error.hpp"
#include "eqcap/interval_union.hpp"
#include "eqcap/polynomial.hpp"
#include "eqcap/quadrature.hpp"
#include "eqcap/rational.hpp"

namespace eqcap {

/// Exact distances from the evaluation point to up to two endpoints.
struct EndpointOverride {
  int k1 = -1;
  double d1 = 0.0;
  int k2 = -1;
  double d2 = 0.0;
};

/// Evaluates Prod(y - m_i) / sqrt|D(y)| and related products for a union scaled to
/// [-1, 1], grouping each factor y - m_i with the two endpoints of gap i so that
/// nothing overflows even for hundreds of bands. Endpoints are indexed
/// 0..2g+1 as a_0, b_0, a_1, ..., b_g; up to two of them can be given an exact
/// distance to y.
class GapProduct {
 public:
  GapProduct() = default;
  GapProduct(std::vector<double> endpoints, std::vector<double> nodes)
      : e_(std::move(endpoints)), m_(std::move(nodes)) {}

  int genus() const { return static_cast<int>(m_.size()); }
  const std::vector<double>& endpoints() const { return e_; }
  const std::vector<double>& nodes() const { return m_; }

  /// Fills base = 1 / sqrt(|y - a_0| |y - b_g|), q_i = 1 / sqrt(|y - b_{i-1}| |y - a_i|)
  /// and f_i = (y - m_i) q_i for i = 1..g (stored at index i - 1).
  void factors(double y, const EndpointOverride& o, double& base, std::vector<double>& f, std::vector<double>& q) const {
    auto dist = [&](int k) {
      if (k == o.k1) return o.d1;
      if (k == o.k2) return o.d2;
      return std::fabs(y - e_[static_cast<std::size_t>(k)]);
    };
    const int g = genus();
    base = 1.0 / std::sqrt(dist(0) * dist(2 * g + 1));
    f.resize(static_cast<std::size_t>(g));
    q.resize(static_cast<std::size_t>(g));
    for (int i = 1; i <= g; ++i) {
      const double qi = 1.0 / std::sqrt(dist(2 * i - 1) * dist(2 * i));
      q[static_cast<std::size_t>(i - 1)] = qi;
      f[static_cast<std::size_t>(i - 1)] = (y - m_[static_cast<std::size_t>(i - 1)]) * qi;
    }
  }

  /// Prod(y - m_i) / sqrt|D(y)|.
  double ratio(double y, const EndpointOverride& o = {}) const {
    double base;
    std::vector<double> f, q;
    factors(y, o, base, f, q);
    double p = base;
    for (double v : f) p *= v;
    return p;
  }

 private:
  std::vector<double> e_;
  std::vector<double> m_;
};

/// Canonical third-kind differential data of an interval union.
struct AbelDatum {
  IntervalUnion E = IntervalUnion::single(-1.0, 1.0);
  RealPoly D;                  // monic, roots at the endpoints
  RealPoly R;                  // monic of degree g
  std::vector<double> roots;   // one root of R per gap, increasing
  std::vector<double> eta;     // |eta_j| = band integral of |R| / sqrt|D|
  std::vector<double> omega;   // eta_j / pi
  double vE = 0.0;             // log cap(E)
  double condition = 1.0;      // condition number of the last gap system
  double residual = 0.0;       // max relative gap-integral residual
  // Scaled frame y = (x - center) / half in which E sits in [-1, 1].
  double center = 0.0;
  double half = 1.0;
  GapProduct scaled;

  int genus() const { return E.genus(); }
  double capacity() const { return std::exp(vE); }

  /// R(x) / sqrt|D(x)| with exact distances for up to two endpoints (x units).
  double ratio(double x, const EndpointOverride& o = {}) const {
    EndpointOverride oy = o;
    oy.d1 /= half;
    oy.d2 /= half;
    return scaled.ratio((x - center) / half, oy) / half;
  }
};

namespace detail {

inline std::vector<double> scaled_endpoints(const IntervalUnion& e, double center, double half) {
  std::vector<double> out;
  for (double v : e.endpoints()) out.push_back((v - center) / half);
  out.front() = -1.0;
  out.back() = 1.0;
  return out;
}

/// Vector of gap integrals over gap j (1-based) in the scaled frame:
/// components 0..g-1 hold W_k / sqrt D, component g holds W / sqrt D and
/// component g+1 holds |W| / sqrt D, with W = Prod(y - m_i), W_k = W / (y - m_k).
inline Eigen::VectorXd gap_vector(const GapProduct& gp, int j, double tol) {
  const int g = gp.genus();
  const auto& e = gp.endpoints();
  const double lo = e[static_cast<std::size_t>(2 * j - 1)];
  const double hi = e[static_cast<std::size_t>(2 * j)];
  std::vector<double> f, q, pre(static_cast<std::size_t>(g) + 1), suf(static_cast<std::size_t>(g) + 1);
  auto integrand = [&](double y, double dl, double dr) -> Eigen::VectorXd {
    double base;
    gp.factors(y, {2 * j - 1, dl, 2 * j, dr}, base, f, q);
    pre[0] = 1.0;
    for (int i = 0; i < g; ++i) pre[static_cast<std::size_t>(i + 1)] = pre[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
    suf[static_cast<std::size_t>(g)] = 1.0;
    for (int i = g; i-- > 0;) suf[static_cast<std::size_t>(i)] = suf[static_cast<std::size_t>(i + 1)] * f[static_cast<std::size_t>(i)];
    Eigen::VectorXd v(g + 2);
    for (int k = 0; k < g; ++k) {
      v(k) = base * pre[static_cast<std::size_t>(k)] * suf[static_cast<std::size_t>(k + 1)] * q[static_cast<std::size_t>(k)];
    }
    v(g) = base * pre[static_cast<std::size_t>(g)];
    v(g + 1) = std::fabs(v(g));
    return v;
  };
  return integrate_endpoint_singular_vector(integrand, lo, hi, g + 2, tol);
}

/// Root of Prod(y - m_i) + sum c_k W_k in gap j by bisection on its sign.
inline double gap_root(const GapProduct& gp, const Eigen::VectorXd& c, int j) {
  const int g = gp.genus();
  const auto& e = gp.endpoints();
  std::vector<double> f, q;
  const double lo = e[static_cast<std::size_t>(2 * j - 1)];
  const double len = e[static_cast<std::size_t>(2 * j)] - lo;
  // Work with the offset t from the left end so that the endpoint distances stay exact.
  auto sign_at = [&](double t) {
    double base;
    gp.factors(lo + t, {2 * j - 1, t, 2 * j, len - t}, base, f, q);
    // Prod f_i + sum c_k q_k Prod_{i != k} f_i, accumulated left to right.
    double prod = 1.0, acc = 0.0;
    for (int i = 0; i < g; ++i) {
      acc = acc * f[static_cast<std::size_t>(i)] + c(i) * q[static_cast<std::size_t>(i)] * prod;
      prod *= f[static_cast<std::size_t>(i)];
    }
    return prod + acc;
  };
  double a = 1e-13 * len, b = len - 1e-13 * len;
  double fa = sign_at(a), fb = sign_at(b);
  if (!(fa * fb < 0.0)) throw CertificationFailure("R has no sign change in gap " + std::to_string(j));
  for (int it = 0; it < 200 && b - a > 1e-17 * len; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = sign_at(mid);
    if (fm == 0.0) return lo + mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return lo + 0.5 * (a + b);
}

}  // namespace detail

/// Integral over gap j (1-based) of R / sqrt D for a monic R given by its roots.
inline double gap_integral(const AbelDatum& datum, const std::vector<double>& roots_x, int gap_index,
                           double tol = 1e-13) {
  const int g = datum.genus();
  detail::require(g >= 1, "a single interval has no gaps");
  detail::require(gap_index >= 1 && gap_index <= g, "gap index out of range");
  detail::require(static_cast<int>(roots_x.size()) == g, "R must have degree g");
  std::vector<double> ry;
  for (double r : roots_x) ry.push_back((r - datum.center) / datum.half);
  GapProduct gp(datum.scaled.endpoints(), ry);
  return detail::gap_vector(gp, gap_index, tol)(g);
}

/// Gap integral for an arbitrary monic R of degree g with real coefficients: the
/// integral over gap j of R(x) / sqrt D(x), D the monic endpoint polynomial.
inline double gap_integral(const RealPoly& r, const IntervalUnion& e, int gap_index, double tol = 1e-13) {
  const int g = e.genus();
  detail::require(g >= 1, "a single interval has no gaps");
  detail::require(gap_index >= 1 && gap_index <= g, "gap index out of range");
  const Band gap = e.gap(gap_index);
  const auto ends = e.endpoints();
  const int kl = 2 * gap_index - 1, kr = 2 * gap_index;
  return integrate_endpoint_singular(
      [&](double x, double dl, double dr) {
        double s = r(x);
        for (int k = 0; k < static_cast<int>(ends.size()); ++k) {
          const double d = (k == kl) ? dl : (k == kr) ? dr : std::fabs(x - ends[static_cast<std::size_t>(k)]);
          s /= std::sqrt(d);
        }
        return s;
      },
      gap.a, gap.b, tol);
}

/// Solves the gap conditions for R and computes the band weights and log-capacity.
inline AbelDatum solve_R(const IntervalUnion& e, double tol = 1e-13) {
  AbelDatum out;
  out.E = e;
  out.center = e.center();
  out.half = 0.5 * e.diameter();
  const int g = e.genus();
  const auto ey = detail::scaled_endpoints(e, out.center, out.half);

  std::vector<double> nodes;
  for (int j = 1; j <= g; ++j) {
    nodes.push_back(0.5 * (ey[static_cast<std::size_t>(2 * j - 1)] + ey[static_cast<std::size_t>(2 * j)]));
  }
  GapProduct gp(ey, nodes);
  out.residual = 0.0;
  for (int pass = 0; pass < 6 && g > 0; ++pass) {
    Eigen::MatrixXd a(g, g);
    Eigen::VectorXd w(g);
    double resid = 0.0;
    for (int j = 1; j <= g; ++j) {
      Eigen::VectorXd v = detail::gap_vector(gp, j, tol);
      a.row(j - 1) = v.head(g).transpose();
      w(j - 1) = v(g);
      resid = std::max(resid, std::fabs(v(g)) / v(g + 1));
    }
    out.residual = resid;
    if (resid <= 1e-11) break;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    out.condition = sv(0) / sv(sv.size() - 1);
    if (!(out.condition < 1e13)) {
      throw ConvergenceFailure("gap system for R is ill-conditioned (condition " + std::to_string(out.condition) + ")");
    }
    Eigen::VectorXd c = svd.solve(-w);
    std::vector<double> roots;
    for (int j = 1; j <= g; ++j) roots.push_back(detail::gap_root(gp, c, j));
    gp = GapProduct(ey, roots);
  }
  if (out.residual > 1e-10) {
    throw CertificationFailure("gap integrals of R did not vanish (relative residual " + std::to_string(out.residual) +
                               ")");
  }
  out.scaled = gp;

  for (double y : gp.nodes()) out.roots.push_back(out.center + out.half * y);
  out.R = RealPoly::from_roots(out.roots);
  out.D = RealPoly::from_roots(e.endpoints());

  double total = 0.0;
  for (int j = 0; j <= g; ++j) {
    const double lo = ey[static_cast<std::size_t>(2 * j)];
    const double hi = ey[static_cast<std::size_t>(2 * j + 1)];
    const double eta = integrate_endpoint_singular(
        [&](double y, double dl, double dr) { return std::fabs(gp.ratio(y, {2 * j, dl, 2 * j + 1, dr})); }, lo, hi, tol);
    out.eta.push_back(eta);
    out.omega.push_back(eta / M_PI);
    total += eta / M_PI;
  }
  if (std::fabs(total - 1.0) > 1e-8) {
    throw CertificationFailure("harmonic weights do not sum to one (sum " + std::to_string(total) + ")");
  }

  // v(E) from the right ray; the capacity scales with the half-width.
  auto side = [&](const std::vector<double>& ends, const std::vector<double>& roots) {
    GapProduct h(ends, roots);
    const int last = static_cast<int>(ends.size()) - 1;
    const double x0 = 3.0;
    const double near = integrate_endpoint_singular(
        [&](double t, double dl, double) { return h.ratio(t, {last, dl, -1, 0.0}); }, 1.0, x0, tol);
    // Beyond x0, t = x0 / u turns the tail into a smooth integral over (0, 1].
    const double tail = integrate(
        [&](double u) {
          double s = 0.0;
          for (double r : roots) s += std::log1p(-r * u / x0);
          for (double v : ends) s -= 0.5 * std::log1p(-v * u / x0);
          return std::expm1(s) / u;
        },
        0.0, 1.0, tol);
    return std::log(x0) - near - tail;
  };
  const double v_right = side(ey, gp.nodes());
  std::vector<double> ends_left, roots_left;
  for (auto it = ey.rbegin(); it != ey.rend(); ++it) ends_left.push_back(-*it);
  for (auto it = gp.nodes().rbegin(); it != gp.nodes().rend(); ++it) roots_left.push_back(-*it);
  const double v_left = side(ends_left, roots_left);
  if (std::fabs(v_right - v_left) > 1e-7) {
    throw CertificationFailure("left and right capacity integrals disagree (" + std::to_string(v_right) + " vs " +
                               std::to_string(v_left) + ")");
  }
  out.vE = v_right + std::log(out.half);
  return out;
}

inline double abel_capacity(const AbelDatum& datum) { return std::exp(datum.vE); }

/// Equilibrium density |R| / (pi sqrt|D|) with per-band cumulative mass tables.
class BandDensity {
 public:
  static constexpr int kTableSize = 64;

  explicit BandDensity(AbelDatum datum) : datum_(std::move(datum)) {
    const auto& bands = datum_.E.bands();
    for (std::size_t j = 0; j < bands.size(); ++j) {
      Table t;
      const double len = bands[j].length();
      t.offset_left.resize(kTableSize + 1);
      t.offset_right.resize(kTableSize + 1);
      t.mass.assign(kTableSize + 1, 0.0);
      for (int i = 0; i <= kTableSize; ++i) {
        t.offset_left[static_cast<std::size_t>(i)] = len * 0.5 * (1.0 - std::cos(M_PI * i / kTableSize));
        t.offset_right[static_cast<std::size_t>(i)] = len * 0.5 * (1.0 - std::cos(M_PI * (kTableSize - i) / kTableSize));
      }
      for (int i = 0; i < kTableSize; ++i) {
        t.mass[static_cast<std::size_t>(i + 1)] =
            t.mass[static_cast<std::size_t>(i)] + segment_mass(j, t.offset_left[static_cast<std::size_t>(i)],
                                                               t.offset_right[static_cast<std::size_t>(i + 1)]);
      }
      tables_.push_back(std::move(t));
    }
  }

  const AbelDatum& datum() const { return datum_; }

  /// Density on band j with exact distances dl, dr to its endpoints.
  double band_value(std::size_t j, double x, double dl, double dr) const {
    const int k = static_cast<int>(2 * j);
    return std::fabs(datum_.ratio(x, {k, dl, k + 1, dr})) / M_PI;
  }

  double operator()(double x) const {
    const auto j = datum_.E.band_of(x);
    if (!j) return 0.0;
    const Band& b = datum_.E[*j];
    if (x <= b.a || x >= b.b) return std::numeric_limits<double>::infinity();
    return band_value(*j, x, x - b.a, b.b - x);
  }

  double band_mass(std::size_t j) const { return tables_[j].mass.back(); }
  double total_mass() const {
    double s = 0.0;
    for (std::size_t j = 0; j < tables_.size(); ++j) s += band_mass(j);
    return s;
  }

  /// mu_E((-inf, x]).
  double cdf(double x) const {
    const auto& bands = datum_.E.bands();
    double s = 0.0;
    for (std::size_t j = 0; j < bands.size(); ++j) {
      if (x >= bands[j].b) {
        s += band_mass(j);
        continue;
      }
      if (x <= bands[j].a) break;
      const Table& t = tables_[j];
      const double off = x - bands[j].a;
      auto it = std::upper_bound(t.offset_left.begin(), t.offset_left.end(), off);
      const auto i = static_cast<std::size_t>(it - t.offset_left.begin()) - 1;
      s += t.mass[i] + segment_mass(j, t.offset_left[i], bands[j].b - x);
      break;
    }
    return s;
  }

  /// Smallest x with cdf(x) >= p, by bisection inside the band that carries p.
  double quantile(double p) const {
    const auto& bands = datum_.E.bands();
    if (p <= 0.0) return bands.front().a;
    double before = 0.0;
    for (std::size_t j = 0; j < bands.size(); ++j) {
      const double m = band_mass(j);
      if (p <= before + m || j + 1 == bands.size()) {
        const Table& t = tables_[j];
        const double target = std::min(p - before, m);
        auto it = std::lower_bound(t.mass.begin(), t.mass.end(), target);
        std::size_t i = static_cast<std::size_t>(it - t.mass.begin());
        if (i == 0) return bands[j].a;
        double lo = bands[j].a + t.offset_left[i - 1];
        double hi = (i >= t.mass.size()) ? bands[j].b : bands[j].b - t.offset_right[i];
        const double base = t.mass[i - 1];
        const double left_off = t.offset_left[i - 1];
        for (int it2 = 0; it2 < 100 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++it2) {
          const double mid = 0.5 * (lo + hi);
          const double cm = base + segment_mass(j, left_off, bands[j].b - mid);
          if (cm < target) lo = mid;
          else hi = mid;
        }
        return 0.5 * (lo + hi);
      }
      before += m;
    }
    return bands.back().b;
  }

  /// Mass of band j between offsets: from a_j + left to b_j - right.
  double segment_mass(std::size_t j, double left, double right) const {
    const Band& b = datum_.E[j];
    const double lo = b.a + left;
    const double hi = b.b - right;
    if (!(hi > lo)) return 0.0;
    return integrate_endpoint_singular(
        [&](double x, double dl, double dr) { return band_value(j, x, left + dl, right + dr); }, lo, hi, 1e-14);
  }

  Density as_density(double tol = 1e-12) const {
    std::vector<DensityPiece> pieces;
    for (std::size_t j = 0; j < datum_.E.size(); ++j) {
      const Band& b = datum_.E[j];
      pieces.push_back({b.a, b.b, [this, j](double x, double dl, double dr) { return band_value(j, x, dl, dr); }});
    }
    return Density(std::move(pieces), tol);
  }

 private:
  struct Table {
    std::vector<double> offset_left;   // node offset from a_j
    std::vector<double> offset_right;  // node offset from b_j
    std::vector<double> mass;          // mass from a_j to the node
  };

  AbelDatum datum_;
  std::vector<Table> tables_;
};

inline BandDensity equilibrium_density(const AbelDatum& datum) { return BandDensity(datum); }

/// Equilibrium potential p(z) = integral of log|z - w| d mu_E(w).
inline double equilibrium_potential(const BandDensity& mu, std::complex<double> z) {
  return mu.as_density().potential(z);
}

inline double equilibrium_potential(const AbelDatum& datum, std::complex<double> z) {
  return equilibrium_potential(BandDensity(datum), z);
}

struct ResultantPositivity {
  double value;       // (1/deg P) log|Res(P, Q)|, or -infinity
  Integer resultant;
};

inline ResultantPositivity resultant_positivity(const ExactPoly& p, const ExactPoly& q) {
  detail::require(p.degree() >= 1 && p.is_monic(), "P must be monic and nonconstant");
  detail::require(p.is_integer() && q.is_integer(), "resultant positivity needs integer coefficients");
  detail::require(!q.is_zero(), "Q must be nonzero");
  const Rational res = resultant(p, q);
  if (!is_integer(res)) throw CertificationFailure("resultant of integer polynomials is not an integer");
  const Integer z = res.get_num();
  if (z == 0) return {-std::numeric_limits<double>::infinity(), z};
  return {log_abs(z) / p.degree(), z};
}

}  // namespace eqcap
