#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "eqcap/error.hpp"

namespace eqcap {

struct Band {
  double a;
  double b;

  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
  bool contains(double x) const { return a <= x && x <= b; }
  friend bool operator==(const Band&, const Band&) = default;
};

/// Finite union of disjoint closed real intervals a_0 < b_0 < a_1 < ... < b_g.
class IntervalUnion {
 public:
  /// Sorts the pairs and merges overlapping or touching bands. Bands whose gap
  /// is below 1e-12 times the overall diameter are treated as touching.
  static IntervalUnion make(std::vector<std::pair<double, double>> pairs) {
    detail::require(!pairs.empty(), "interval union needs at least one band");
    for (const auto& [a, b] : pairs) {
      detail::require(std::isfinite(a) && std::isfinite(b), "band endpoints must be finite");
      detail::require(a < b, "each band [a,b] needs a < b");
    }
    std::sort(pairs.begin(), pairs.end());
    double lo = pairs.front().first;
    double hi = lo;
    for (const auto& p : pairs) hi = std::max(hi, p.second);
    const double merge_gap = 1e-12 * (hi - lo);

    IntervalUnion out;
    for (const auto& [a, b] : pairs) {
      if (!out.bands_.empty() && a - out.bands_.back().b <= merge_gap) {
        out.bands_.back().b = std::max(out.bands_.back().b, b);
      } else {
        out.bands_.push_back(Band{a, b});
      }
    }
    return out;
  }

  static IntervalUnion single(double a, double b) { return make({{a, b}}); }

  const std::vector<Band>& bands() const { return bands_; }
  std::size_t size() const { return bands_.size(); }
  const Band& operator[](std::size_t j) const { return bands_[j]; }

  /// Number of gaps; the genus of the associated hyperelliptic curve.
  int genus() const { return static_cast<int>(bands_.size()) - 1; }

  double lower() const { return bands_.front().a; }
  double upper() const { return bands_.back().b; }
  double diameter() const { return upper() - lower(); }
  double center() const { return 0.5 * (lower() + upper()); }

  /// Gap j (1-based, 1..g) is the open interval (b_{j-1}, a_j).
  Band gap(int j) const {
    detail::require(j >= 1 && j <= genus(), "gap index out of range");
    return Band{bands_[j - 1].b, bands_[j].a};
  }

  /// Endpoints in increasing order: a_0, b_0, a_1, ..., b_g.
  std::vector<double> endpoints() const {
    std::vector<double> e;
    e.reserve(2 * bands_.size());
    for (const auto& band : bands_) {
      e.push_back(band.a);
      e.push_back(band.b);
    }
    return e;
  }

  bool contains(double x) const { return band_of(x).has_value(); }

  std::optional<std::size_t> band_of(double x) const {
    auto it = std::upper_bound(bands_.begin(), bands_.end(), x,
                               [](double v, const Band& band) { return v < band.a; });
    if (it == bands_.begin()) return std::nullopt;
    --it;
    if (x <= it->b) return static_cast<std::size_t>(it - bands_.begin());
    return std::nullopt;
  }

  double total_length() const {
    double s = 0.0;
    for (const auto& band : bands_) s += band.length();
    return s;
  }

  IntervalUnion translated(double shift) const {
    IntervalUnion out = *this;
    for (auto& band : out.bands_) {
      band.a += shift;
      band.b += shift;
    }
    return out;
  }

  IntervalUnion scaled(double factor) const {
    detail::require(factor != 0.0, "scale factor must be nonzero");
    std::vector<std::pair<double, double>> pairs;
    for (const auto& band : bands_) {
      double a = band.a * factor;
      double b = band.b * factor;
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    return make(std::move(pairs));
  }

  std::vector<std::pair<double, double>> pairs() const {
    std::vector<std::pair<double, double>> out;
    for (const auto& band : bands_) out.emplace_back(band.a, band.b);
    return out;
  }

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  IntervalUnion() = default;
  std::vector<Band> bands_;
};

inline IntervalUnion make_interval_union(std::vector<std::pair<double, double>> pairs) {
  return IntervalUnion::make(std::move(pairs));
}

/// Level-k prefix of the triadic Cantor set: 2^k bands of length 3^-k inside [0,1].
inline IntervalUnion cantor_prefix(int level) {
  detail::require(level >= 0 && level <= 16, "Cantor level must be in 0..16");
  std::vector<std::pair<double, double>> bands{{0.0, 1.0}};
  for (int k = 0; k < level; ++k) {
    std::vector<std::pair<double, double>> next;
    next.reserve(2 * bands.size());
    for (const auto& [a, b] : bands) {
      double third = (b - a) / 3.0;
      next.emplace_back(a, a + third);
      next.emplace_back(b - third, b);
    }
    bands = std::move(next);
  }
  return IntervalUnion::make(std::move(bands));
}

}  // namespace eqcap
