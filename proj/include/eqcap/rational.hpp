#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "eqcap/error.hpp"

namespace eqcap {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Integer floor(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

/// Nearest integer, ties toward +infinity, so that q - round_half_down(q) lies in [-1/2, 1/2).
inline Integer round_half_down(const Rational& q) {
  Rational shifted = q + Rational(1, 2);
  return floor(shifted);
}

inline int sign(const Rational& q) { return sgn(q); }

inline Rational exact(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("cannot represent a non-finite value exactly");
  return Rational(x);
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Natural log of |z| without overflow for huge integers.
inline double log_abs(const Integer& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

inline double log_abs(const Rational& q) {
  return log_abs(Integer(q.get_num())) - log_abs(Integer(q.get_den()));
}

/// Best rational approximation with denominator at most max_den, by continued fractions.
inline Rational approximate_rational(double x, long max_den) {
  if (!std::isfinite(x)) throw InvalidArgument("cannot approximate a non-finite value");
  Rational target = exact(x);
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rest = target;
  for (int it = 0; it < 64; ++it) {
    Integer a = floor(rest);
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rational frac = rest - a;
    if (sgn(frac) == 0) break;
    rest = 1 / frac;
  }
  Rational out(p1, q1);
  out.canonicalize();
  return out;
}

/// Rounds to the nearest multiple of 2^-bits.
inline Rational round_dyadic(double x, int bits) {
  Rational scaled = exact(x);
  Integer pow2 = 1;
  pow2 <<= static_cast<mp_bitcnt_t>(bits);
  scaled *= pow2;
  Rational out(round_half_down(scaled), pow2);
  out.canonicalize();
  return out;
}

/// Canonical text form: "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses "p/q", an integer, or a decimal literal such as "-1.25e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw InvalidArgument("empty rational literal");

  auto parse_integer = [](std::string_view s) {
    std::string buf(s);
    if (!buf.empty() && buf.front() == '+') buf.erase(0, 1);
    if (buf.empty() || buf == "-") throw InvalidArgument("malformed integer literal");
    for (std::size_t i = (buf.front() == '-' ? 1 : 0); i < buf.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(buf[i]))) {
        throw InvalidArgument("malformed integer literal '" + buf + "'");
      }
    }
    return Integer(buf, 10);
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(text.substr(0, slash)));
    Integer den = parse_integer(trim(text.substr(slash + 1)));
    if (den == 0) throw InvalidArgument("zero denominator in rational literal");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  // Decimal: [sign] digits [. digits] [e|E [sign] digits]
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    Integer ex = parse_integer(text.substr(e + 1));
    if (!ex.fits_slong_p() || std::labs(ex.get_si()) > 4000) {
      throw InvalidArgument("exponent out of range in decimal literal");
    }
    exponent = ex.get_si();
  }
  std::string digits;
  bool negative = false;
  long fraction_digits = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < mantissa.size(); ++i) {
    char c = mantissa[i];
    if (i == 0 && (c == '-' || c == '+')) {
      negative = (c == '-');
      continue;
    }
    if (c == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw InvalidArgument("malformed decimal literal '" + std::string(text) + "'");
    }
    digits.push_back(c);
    if (seen_point) ++fraction_digits;
  }
  if (digits.empty()) throw InvalidArgument("malformed decimal literal '" + std::string(text) + "'");
  Rational q{Integer(digits, 10)};
  long scale = exponent - fraction_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  if (scale >= 0) {
    q *= ten_pow;
  } else {
    q /= ten_pow;
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace eqcap
