#pragma once

// Positive piecewise-constant weights: explicit pieces on a window, a constant value
// outside it (1 unless stated otherwise).

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "pwlab/error.hpp"

namespace pwlab {

struct WeightPiece {
  double from = 0;
  double to = 0;
  double value = 1;
};

struct Weight {
  double window_lo = 0;
  double window_hi = 0;
  std::vector<WeightPiece> pieces;
  double outside_value = 1;

  static Weight constant(double v) {
    Weight w;
    w.window_lo = -1;
    w.window_hi = 1;
    w.pieces = {{-1, 1, v}};
    w.outside_value = v;
    w.validate();
    return w;
  }

  /// Equal to `outside` everywhere except `v` on [a, b].
  static Weight step(double a, double b, double v, double outside = 1.0) {
    Weight w;
    w.window_lo = a;
    w.window_hi = b;
    w.pieces = {{a, b, v}};
    w.outside_value = outside;
    w.validate();
    return w;
  }

  /// Cells [edges[i], edges[i+1]) carry values[i].
  static Weight from_cells(const std::vector<double>& edges, const std::vector<double>& values,
                           double outside = 1.0) {
    if (edges.size() != values.size() + 1 || values.empty())
      throw Error(ErrorKind::invalid_input, "weight: need edges.size() == values.size() + 1 >= 2");
    Weight w;
    w.window_lo = edges.front();
    w.window_hi = edges.back();
    for (size_t i = 0; i < values.size(); ++i) w.pieces.push_back({edges[i], edges[i + 1], values[i]});
    w.outside_value = outside;
    w.validate();
    return w;
  }

  void validate() const {
    if (!(window_lo <= window_hi)) throw Error(ErrorKind::invalid_input, "weight: window must satisfy lo <= hi");
    if (!(outside_value > 0) || !std::isfinite(outside_value))
      throw Error(ErrorKind::invalid_input, "weight: outside value must be positive and finite");
    if (pieces.empty()) {
      if (window_lo != window_hi) throw Error(ErrorKind::invalid_input, "weight: pieces must cover the window");
      return;
    }
    const double tol = 1e-12 * std::max({1.0, std::abs(window_lo), std::abs(window_hi)});
    if (std::abs(pieces.front().from - window_lo) > tol || std::abs(pieces.back().to - window_hi) > tol)
      throw Error(ErrorKind::invalid_input, "weight: pieces must cover the window exactly");
    for (size_t i = 0; i < pieces.size(); ++i) {
      const auto& p = pieces[i];
      if (!(p.from < p.to)) throw Error(ErrorKind::invalid_input, "weight: empty or reversed piece");
      if (!(p.value > 0) || !std::isfinite(p.value))
        throw Error(ErrorKind::invalid_input, "weight: piece values must be positive and finite");
      if (i > 0 && std::abs(p.from - pieces[i - 1].to) > tol) {
        std::ostringstream os;
        os << "weight: gap or overlap at " << p.from;
        throw Error(ErrorKind::invalid_input, os.str());
      }
    }
  }

  double m_lo() const {
    double v = outside_value;
    for (const auto& p : pieces) v = std::min(v, p.value);
    return v;
  }

  double m_hi() const {
    double v = outside_value;
    for (const auto& p : pieces) v = std::max(v, p.value);
    return v;
  }

  bool is_constant() const { return m_lo() == m_hi(); }

  double operator()(double t) const {
    if (t < window_lo || t >= window_hi || pieces.empty()) return outside_value;
    auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                               [](double x, const WeightPiece& p) { return x < p.to; });
    return it == pieces.end() ? pieces.back().value : it->value;
  }

  /// Points where m may jump (window ends and piece boundaries).
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    if (pieces.empty()) return b;
    b.push_back(window_lo);
    for (const auto& p : pieces) b.push_back(p.to);
    return b;
  }

  /// Calls fn(lo, hi, value) for the constant stretches of m covering [a, b], a <= b.
  template <class Fn>
  void for_each_segment(double a, double b, Fn&& fn) const {
    if (!(a < b)) return;
    if (pieces.empty() || b <= window_lo || a >= window_hi) {
      fn(a, b, outside_value);
      return;
    }
    if (a < window_lo) fn(a, window_lo, outside_value);
    for (const auto& p : pieces) {
      const double lo = std::max(a, p.from), hi = std::min(b, p.to);
      if (lo < hi) fn(lo, hi, p.value);
    }
    if (b > window_hi) fn(window_hi, b, outside_value);
  }

  /// Exact integral of m over [a, b] (signed).
  double mass(double a, double b) const {
    if (b < a) return -mass(b, a);
    double s = 0;
    for_each_segment(a, b, [&](double lo, double hi, double v) { s += v * (hi - lo); });
    return s;
  }

  /// Exact integral of t m(t) over [a, b], a <= b.
  double first_moment(double a, double b) const {
    double s = 0;
    for_each_segment(a, b, [&](double lo, double hi, double v) { s += v * (hi - lo) * 0.5 * (hi + lo); });
    return s;
  }

  /// Exact integral of chi(t) m(t) / t over [-R, R], with chi the indicator of |t| > 1.
  double compensator(double R) const {
    double s = 0;
    auto add = [&](double lo, double hi, double v) { s += v * std::log(hi / lo); };
    if (R > 1) {
      for_each_segment(1.0, R, add);
      for_each_segment(-R, -1.0, [&](double lo, double hi, double v) { s -= v * std::log(lo / hi); });
    }
    return s;
  }
};

}  // namespace pwlab
