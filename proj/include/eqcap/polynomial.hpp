#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "eqcap/error.hpp"
#include "eqcap/rational.hpp"

namespace eqcap {

namespace detail {

template <class To, class From>
To scalar_cast(const From& v) {
  if constexpr (std::is_same_v<From, Rational>) {
    if constexpr (std::is_same_v<To, Rational>) {
      return v;
    } else {
      return To(v.get_d());
    }
  } else {
    return To(v);
  }
}

template <class T>
bool is_zero(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return sgn(v) == 0;
  } else {
    return v == T(0);
  }
}

}  // namespace detail

/// Dense univariate polynomial, coefficients lowest degree first. The zero
/// polynomial has an empty coefficient list and degree -1.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() = default;
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const T& v) { return Polynomial(std::vector<T>{v}); }
  static Polynomial x() { return Polynomial(std::vector<T>{T(0), T(1)}); }
  static Polynomial monomial(int degree, const T& coeff = T(1)) {
    std::vector<T> c(static_cast<std::size_t>(degree) + 1, T(0));
    c.back() = coeff;
    return Polynomial(std::move(c));
  }
  /// Monic polynomial with the given roots.
  static Polynomial from_roots(const std::vector<T>& roots) {
    Polynomial p = constant(T(1));
    for (const auto& r : roots) p *= Polynomial(std::vector<T>{T(-r), T(1)});
    return p;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }

  /// Coefficient of x^i; zero beyond the degree.
  T operator[](std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  const T& leading() const {
    detail::require(!c_.empty(), "zero polynomial has no leading coefficient");
    return c_.back();
  }
  bool is_monic() const { return !c_.empty() && c_.back() == T(1); }

  /// True when every coefficient is an integer. Only meaningful for exact polynomials.
  bool is_integer() const {
    if constexpr (std::is_same_v<T, Rational>) {
      return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q.get_den() == 1; });
    } else {
      return std::all_of(c_.begin(), c_.end(), [](const T& v) { return v == std::round(v); });
    }
  }

  /// Horner evaluation in the type of the argument.
  template <class U>
  U operator()(const U& x) const {
    U acc = U(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = acc * x + detail::scalar_cast<U>(*it);
    }
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return Polynomial(std::move(d));
  }

  Polynomial monic() const {
    detail::require(!c_.empty(), "zero polynomial cannot be made monic");
    Polynomial out = *this;
    T lead = c_.back();
    for (auto& v : out.c_) v = v / lead;
    return out;
  }

  /// p(q(x)) by Horner in the polynomial ring.
  Polynomial compose(const Polynomial& q) const {
    Polynomial acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = acc * q + constant(*it);
    }
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) {
    *this = *this * o;
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    for (auto& v : c_) v = v * s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(out));
  }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Euclidean division: returns (quotient, remainder) with deg r < deg divisor.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den) {
    detail::require(!den.is_zero(), "division by the zero polynomial");
    if (num.degree() < den.degree()) return {Polynomial{}, num};
    std::vector<T> r = num.c_;
    const int dn = den.degree();
    std::vector<T> q(static_cast<std::size_t>(num.degree() - dn) + 1, T(0));
    const T lead = den.c_.back();
    for (int k = num.degree() - dn; k >= 0; --k) {
      T factor = r[static_cast<std::size_t>(k + dn)] / lead;
      q[static_cast<std::size_t>(k)] = factor;
      if (detail::is_zero(factor)) continue;
      for (int i = 0; i <= dn; ++i) {
        auto idx = static_cast<std::size_t>(k + i);
        r[idx] = r[idx] - factor * den.c_[static_cast<std::size_t>(i)];
      }
      r[static_cast<std::size_t>(k + dn)] = T(0);
    }
    r.resize(static_cast<std::size_t>(dn));
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }
  friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }

 private:
  void trim() {
    while (!c_.empty() && detail::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

using RealPoly = Polynomial<double>;
using ExactPoly = Polynomial<Rational>;

inline RealPoly to_real(const ExactPoly& p) {
  std::vector<double> c;
  c.reserve(p.coeffs().size());
  for (const auto& q : p.coeffs()) c.push_back(q.get_d());
  return RealPoly(std::move(c));
}

inline ExactPoly to_exact(const RealPoly& p) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (double v : p.coeffs()) c.push_back(exact(v));
  return ExactPoly(std::move(c));
}

inline ExactPoly exact_poly(std::initializer_list<long> coeffs) {
  std::vector<Rational> c;
  for (long v : coeffs) c.emplace_back(v);
  return ExactPoly(std::move(c));
}

/// Monic gcd over the rationals.
inline ExactPoly gcd(ExactPoly a, ExactPoly b) {
  while (!b.is_zero()) {
    ExactPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

inline bool is_squarefree(const ExactPoly& p) {
  if (p.degree() <= 0) return true;
  return gcd(p, p.derivative()).degree() == 0;
}

/// Yun's algorithm: returns (factor, multiplicity) pairs with squarefree, pairwise
/// coprime monic factors whose product (with multiplicities) is p up to a constant.
inline std::vector<std::pair<ExactPoly, int>> squarefree_decomposition(const ExactPoly& p) {
  detail::require(p.degree() >= 1, "squarefree decomposition needs a nonconstant polynomial");
  std::vector<std::pair<ExactPoly, int>> out;
  ExactPoly f = p.monic();
  ExactPoly df = f.derivative();
  ExactPoly a = gcd(f, df);
  ExactPoly b = f / a;
  ExactPoly c = df / a;
  ExactPoly d = c - b.derivative();
  int mult = 1;
  while (b.degree() >= 1) {
    ExactPoly g = gcd(b, d);
    if (g.degree() >= 1) out.emplace_back(g, mult);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    ++mult;
  }
  return out;
}

inline ExactPoly squarefree_part(const ExactPoly& p) {
  detail::require(p.degree() >= 1, "squarefree part needs a nonconstant polynomial");
  return (p / gcd(p, p.derivative())).monic();
}

/// Exact resultant over the rationals by the Euclidean recursion.
inline Rational resultant(const ExactPoly& a0, const ExactPoly& b0) {
  detail::require(!a0.is_zero() && !b0.is_zero(), "resultant of the zero polynomial");
  ExactPoly a = a0;
  ExactPoly b = b0;
  Rational acc = 1;
  while (true) {
    const int da = a.degree();
    const int db = b.degree();
    if (db == 0) {
      Rational lb = b.leading();
      Rational pw = 1;
      for (int i = 0; i < da; ++i) pw *= lb;
      return acc * pw;
    }
    if (da < db) {
      if ((da * db) % 2 == 1) acc = -acc;
      std::swap(a, b);
      continue;
    }
    ExactPoly r = a % b;
    if (r.is_zero()) return 0;
    // res(a,b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
    const int dr = r.degree();
    if ((da * db) % 2 == 1) acc = -acc;
    Rational lb = b.leading();
    for (int i = 0; i < da - dr; ++i) acc *= lb;
    a = std::move(b);
    b = std::move(r);
  }
}

inline std::string to_string(const ExactPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const Rational& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    std::string coeff = to_string(Rational(abs(c)));
    if (!out.empty()) out += sgn(c) < 0 ? " - " : " + ";
    else if (sgn(c) < 0) out += "-";
    bool unit = (abs(c) == 1);
    if (i == 0) out += coeff;
    else {
      if (!unit) out += coeff + "*";
      out += (i == 1) ? "X" : "X^" + std::to_string(i);
    }
  }
  return out;
}

}  // namespace eqcap
