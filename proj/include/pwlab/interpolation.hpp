#pragma once

// Level sets of the phase, separation and Carleson checks, generating products, Beurling
// density, the A2 checker, lifting to classical Paley-Wiener data and the interpolation
// battery for H(E) = e^g PW(m).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pwlab/hb_model.hpp"
#include "pwlab/mountain.hpp"
#include "pwlab/multiplier.hpp"
#include "pwlab/numerics.hpp"
#include "pwlab/potential.hpp"
#include "pwlab/smoothing.hpp"
#include "pwlab/weight.hpp"

namespace pwlab {

// ---------------------------------------------------------------------------
// Level sets

struct LevelSet {
  double alpha = 0;
  double window_lo = 0, window_hi = 0;
  std::vector<double> points;  // strictly increasing

  /// Distance to the nearest point (infinity when empty).
  double distance(double x) const {
    if (points.empty()) return std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(points.begin(), points.end(), x);
    double d = std::numeric_limits<double>::infinity();
    if (it != points.end()) d = *it - x;
    if (it != points.begin()) d = std::min(d, x - *(it - 1));
    return d;
  }

  /// Nearest point (NaN when empty).
  double nearest(double x) const {
    if (points.empty()) return std::numeric_limits<double>::quiet_NaN();
    auto it = std::lower_bound(points.begin(), points.end(), x);
    if (it == points.end()) return points.back();
    if (it == points.begin()) return *it;
    return (*it - x) < (x - *(it - 1)) ? *it : *(it - 1);
  }

  double max_gap() const {
    double g = 0;
    for (size_t i = 1; i < points.size(); ++i) g = std::max(g, points[i] - points[i - 1]);
    return g;
  }
};

/// Solutions of phi(x) = alpha + k pi in [lo, hi] by bisection on the increasing phase.
/// Bisection stops at `tol` or when the bracket no longer shrinks in floating point.
inline LevelSet solve_level_set(const HBModel& model, double alpha, double lo, double hi, double tol = 1e-13) {
  const double pi = std::numbers::pi;
  if (!(alpha >= 0 && alpha < pi)) throw Error(ErrorKind::invalid_input, "alpha must lie in [0, pi)");
  if (!(lo < hi)) throw Error(ErrorKind::invalid_input, "level-set window needs lo < hi");
  model.validate();
  LevelSet ls;
  ls.alpha = alpha;
  ls.window_lo = lo;
  ls.window_hi = hi;
  const double plo = phase(model, lo), phi = phase(model, hi);
  const long k0 = static_cast<long>(std::ceil((plo - alpha) / pi));
  const long k1 = static_cast<long>(std::floor((phi - alpha) / pi));
  for (long k = k0; k <= k1; ++k) {
    const double level = alpha + static_cast<double>(k) * pi;
    double a = lo, b = hi;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (phase(model, mid) < level)
        a = mid;
      else
        b = mid;
    }
    const double x = std::abs(phase(model, a) - level) <= std::abs(phase(model, b) - level) ? a : b;
    if (ls.points.empty() || x > ls.points.back()) ls.points.push_back(x);
  }
  return ls;
}

// ---------------------------------------------------------------------------
// Separation, Carleson, generating product, density

enum class Metric { euclidean, pseudo };

/// rho(z, w) = |z - w| / (1 + |z - conj w|).
inline double pseudo_distance(cplx z, cplx w) { return std::abs(z - w) / (1 + std::abs(z - std::conj(w))); }

struct SeparationResult {
  double min_gap = std::numeric_limits<double>::infinity();
  bool pass = false;
  cplx witness_a{}, witness_b{};
};

inline SeparationResult check_separation(const std::vector<cplx>& pts, Metric metric, double threshold) {
  if (pts.size() < 2) throw Error(ErrorKind::invalid_input, "separation needs at least two points");
  SeparationResult r;
  auto dist = [&](cplx a, cplx b) { return metric == Metric::euclidean ? std::abs(a - b) : pseudo_distance(a, b); };
  bool real = std::all_of(pts.begin(), pts.end(), [](cplx p) { return p.imag() == 0; });
  if (real) {
    std::vector<cplx> s = pts;
    std::sort(s.begin(), s.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (size_t i = 1; i < s.size(); ++i) {
      const double d = dist(s[i - 1], s[i]);
      if (d < r.min_gap) {
        r.min_gap = d;
        r.witness_a = s[i - 1];
        r.witness_b = s[i];
      }
    }
  } else {
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) {
        const double d = dist(pts[i], pts[j]);
        if (d < r.min_gap) {
          r.min_gap = d;
          r.witness_a = pts[i];
          r.witness_b = pts[j];
        }
      }
  }
  r.pass = r.min_gap >= threshold;
  return r;
}

inline SeparationResult check_separation(const std::vector<double>& pts, Metric metric, double threshold) {
  std::vector<cplx> c(pts.begin(), pts.end());
  return check_separation(c, metric, threshold);
}

struct CarlesonResult {
  double sup_estimate = 0;
  bool pass = false;
  double witness_x = 0, witness_R = 0;
  std::vector<double> per_radius;  // max over x for each R
};

/// max over x in the grid and R of (1/R) sum_{|lambda - x| <= R} |Im lambda|. The default
/// x-grid spans the real parts with step 0.5.
inline CarlesonResult check_carleson(const std::vector<cplx>& pts, const std::vector<double>& radii,
                                     double threshold = 10.0, std::vector<double> xs = {}) {
  if (radii.empty()) throw Error(ErrorKind::invalid_input, "Carleson check needs at least one radius");
  CarlesonResult out;
  if (xs.empty() && !pts.empty()) {
    double lo = pts.front().real(), hi = lo;
    for (cplx p : pts) {
      lo = std::min(lo, p.real());
      hi = std::max(hi, p.real());
    }
    for (double x = lo; x <= hi + 1e-12; x += 0.5) xs.push_back(x);
  }
  for (double R : radii) {
    if (!(R > 0)) throw Error(ErrorKind::invalid_input, "Carleson radii must be positive");
    double best = 0;
    for (double x : xs) {
      double s = 0;
      for (cplx p : pts)
        if (std::abs(p - x) <= R) s += std::abs(p.imag());
      if (s / R > best) best = s / R;
      if (s / R > out.sup_estimate) {
        out.sup_estimate = s / R;
        out.witness_x = x;
        out.witness_R = R;
      }
    }
    out.per_radius.push_back(best);
  }
  out.pass = out.sup_estimate <= threshold;
  return out;
}

/// log of prod' over |lambda| <= R of (1 - z / lambda), a lambda = 0 factor replaced by z;
/// factors are summed in order of increasing |lambda|. Returns -inf at a point of the set.
inline cplx log_generating_product(std::vector<cplx> pts, double R, cplx z) {
  std::stable_sort(pts.begin(), pts.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  cplx acc = 0;
  for (cplx l : pts) {
    if (std::abs(l) > R) break;
    if (z == l) return {-std::numeric_limits<double>::infinity(), 0};
    acc += l == cplx(0, 0) ? std::log(z) : std::log(1.0 - z / l);
  }
  return acc;
}

inline cplx generating_product(const std::vector<cplx>& pts, double R, cplx z) {
  const cplx l = log_generating_product(pts, R, z);
  if (std::isinf(l.real()) && l.real() < 0) return 0;
  if (l.real() > 709) throw Error(ErrorKind::overflow, "generating product overflows; use log_generating_product");
  return std::exp(l);
}

inline cplx generating_product(const std::vector<double>& pts, double R, cplx z) {
  return generating_product(std::vector<cplx>(pts.begin(), pts.end()), R, z);
}

struct DensityResult {
  std::vector<double> r;
  std::vector<double> value;  // max count in [a, a + r) divided by r
  double estimate = 0;        // value at the largest r
};

/// Upper density over half-open windows [a, a + r) along the r-ladder.
inline DensityResult upper_density(std::vector<double> pts, const std::vector<double>& ladder) {
  if (ladder.empty()) throw Error(ErrorKind::invalid_input, "density needs a radius ladder");
  std::sort(pts.begin(), pts.end());
  DensityResult out;
  for (double r : ladder) {
    if (!(r > 0)) throw Error(ErrorKind::invalid_input, "density radii must be positive");
    size_t best = 0, j = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (j < i) j = i;
      while (j < pts.size() && pts[j] - pts[i] < r) ++j;
      best = std::max(best, j - i);
    }
    out.r.push_back(r);
    out.value.push_back(static_cast<double>(best) / r);
  }
  out.estimate = out.value.back();
  return out;
}

/// 1, 2, 4, ... up to half the span of the points (at least {1}).
inline std::vector<double> default_density_ladder(const std::vector<double>& pts) {
  std::vector<double> l{1};
  if (pts.size() < 2) return l;
  const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
  while (2 * l.back() <= (*hi - *lo) / 2) l.push_back(2 * l.back());
  return l;
}

// ---------------------------------------------------------------------------
// Muckenhoupt A2

struct A2Weight {
  std::function<double(double)> v;
  std::vector<double> singular;  // isolated points where v or 1/v may blow up
  std::vector<double> kinks;     // points where v is not smooth
};

struct A2Family {
  double center_lo = -10, center_hi = 10, center_step = 0.5;
  double h_min = 1e-3, h_max = 1e2;
  double clip_lo = -std::numeric_limits<double>::infinity();
  double clip_hi = std::numeric_limits<double>::infinity();
  bool anchor_singular = true;  // add [s, s+h], [s-h, s] at each singular point

  void validate() const {
    if (!(center_lo <= center_hi) || !(center_step > 0))
      throw Error(ErrorKind::invalid_input, "A2 family: bad center grid");
    if (!(h_min > 0) || !(h_min <= h_max)) throw Error(ErrorKind::invalid_input, "A2 family: need 0 < h_min <= h_max");
  }
};

struct A2Result {
  double sup_product = 0;
  bool pass = false;
  bool divergent = false;
  double witness_a = 0, witness_b = 0;
  size_t intervals = 0;
  std::string notes;
};

namespace detail {

struct Average {
  double value = 0;
  bool divergent = false;
};

/// (1/|I|) int_I f with divergence probing at declared singular points inside I.
inline Average interval_average(const std::function<double(double)>& f, double a, double b,
                                const std::vector<double>& singular, const std::vector<double>& kinks,
                                const QuadratureConfig& cfg) {
  std::vector<double> sing;
  for (double s : singular)
    if (s >= a && s <= b) sing.push_back(s);
  LinePoints pts;
  for (double k : kinks)
    if (k > a && k < b) pts.kinks.push_back(k);
  auto excised = [&](double eps) {
    std::vector<double> cuts{a};
    for (double s : sing) {
      cuts.push_back(std::max(a, s - eps));
      cuts.push_back(std::min(b, s + eps));
    }
    cuts.push_back(b);
    double total = 0;
    for (size_t i = 0; i + 1 < cuts.size(); i += 2) {
      if (!(cuts[i] < cuts[i + 1])) continue;
      LinePoints p = pts;
      for (double s : sing) p.singular.push_back(s);
      total += integrate_interval(f, cuts[i], cuts[i + 1], cfg, p).value;
    }
    return total;
  };
  Average out;
  try {
    if (sing.empty()) {
      out.value = integrate_interval(f, a, b, cfg, pts).value / (b - a);
    } else {
      const double i9 = excised(1e-9), i11 = excised(1e-11);
      out.divergent = !std::isfinite(i11) || (i11 - i9) > 1e-3 * std::max(1.0, std::abs(i9));
      out.value = i11 / (b - a);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::quadrature_failure && e.kind() != ErrorKind::pv_divergence) throw;
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(out.value)) out.divergent = true;
  return out;
}

}  // namespace detail

/// Dyadic intervals [k h, (k+1) h] containing each grid center, for h = 2^j in [h_min, h_max],
/// plus [s, s+h] and [s-h, s] at declared singular points.
inline std::vector<std::pair<double, double>> a2_intervals(const A2Weight& w, const A2Family& fam) {
  fam.validate();
  std::vector<double> hs;
  for (int j = static_cast<int>(std::ceil(std::log2(fam.h_min) - 1e-9));
       std::ldexp(1.0, j) <= fam.h_max * (1 + 1e-12); ++j)
    hs.push_back(std::ldexp(1.0, j));
  if (hs.empty()) throw Error(ErrorKind::invalid_input, "A2 family: no power of two in [h_min, h_max]");
  std::vector<std::pair<double, double>> out;
  auto add = [&](double a, double b) {
    if (a >= fam.clip_lo && b <= fam.clip_hi && a < b) out.emplace_back(a, b);
  };
  const long nc = static_cast<long>(std::floor((fam.center_hi - fam.center_lo) / fam.center_step + 1e-9));
  for (double h : hs)
    for (long i = 0; i <= nc; ++i) {
      const double c = fam.center_lo + static_cast<double>(i) * fam.center_step;
      const double k = std::floor(c / h);
      add(k * h, (k + 1) * h);
    }
  if (fam.anchor_singular)
    for (double s : w.singular)
      for (double h : hs) {
        add(s, s + h);
        add(s - h, s);
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// sup over the interval family of (avg v)(avg 1/v); a divergent average is a failing verdict.
inline A2Result check_a2(const A2Weight& w, const A2Family& fam, double threshold = 10.0,
                         const QuadratureConfig& cfg = {1e-10, 1e-8, 20000, 8.0}) {
  const auto ivs = a2_intervals(w, fam);
  if (ivs.empty()) throw Error(ErrorKind::invalid_input, "A2 family is empty after clipping");
  std::function<double(double)> inv = [&](double x) { return 1.0 / w.v(x); };
  struct Row {
    double product;
    bool divergent;
  };
  auto rows = parallel_map<Row>(ivs.size(), [&](size_t i) {
    const auto [a, b] = ivs[i];
    const auto av = detail::interval_average(w.v, a, b, w.singular, w.kinks, cfg);
    const auto ai = detail::interval_average(inv, a, b, w.singular, w.kinks, cfg);
    const bool div = av.divergent || ai.divergent;
    return Row{div ? std::numeric_limits<double>::infinity() : av.value * ai.value, div};
  });
  A2Result out;
  out.intervals = ivs.size();
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].divergent && !out.divergent) {
      out.divergent = true;
      out.witness_a = ivs[i].first;
      out.witness_b = ivs[i].second;
      out.sup_product = std::numeric_limits<double>::infinity();
    }
    if (!out.divergent && rows[i].product > out.sup_product) {
      out.sup_product = rows[i].product;
      out.witness_a = ivs[i].first;
      out.witness_b = ivs[i].second;
    }
  }
  out.pass = !out.divergent && out.sup_product <= threshold;
  std::ostringstream os;
  os << out.intervals << " intervals, h in [" << fam.h_min << ", " << fam.h_max << "]";
  if (out.divergent) os << "; divergent average on [" << out.witness_a << ", " << out.witness_b << "]";
  out.notes = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Lifting to classical Paley-Wiener data

/// tau - m as a weight.
inline Weight complement_weight(const Weight& m, double tau) {
  if (!(tau > m.m_hi())) throw Error(ErrorKind::invalid_input, "lifting needs tau > sup m");
  Weight w = m;
  for (auto& p : w.pieces) p.value = tau - p.value;
  w.outside_value = tau - m.outside_value;
  w.validate();
  return w;
}

struct LiftReport {
  double tau = 0;
  double lifted_norm = 0;    // || f e^{-g} E_{tau-m} ||_2 on the grid span
  double weighted_norm = 0;  // || f e^{-g} e^{-omega_m} ||_2 on the grid span
  double ratio = 0;          // lifted / weighted (NaN when both vanish)
  TypeEstimate lift_type;
  bool type_pass = false;    // lift type <= pi tau (1 + type_tolerance)
  double sigma_max_abs = 0;  // max |lift| over zeros of E_{tau-m} inside the grid span
  std::string notes;
};

/// f -> f e^{-g} E_{tau-m}. `log_abs_f` returns log|f| (-inf where f vanishes).
inline LiftReport lift_to_classical(const std::function<double(cplx)>& log_abs_f, const Weight& m, const RealPoly& g,
                                    double tau, const Grid& grid, double R = 1000, double type_tolerance = 0.05,
                                    const QuadratureConfig& cfg = {}) {
  grid.validate();
  if (!grid.is_real() || grid.size() < 2) throw Error(ErrorKind::invalid_grid, "lift norms need a real grid");
  const Weight comp = complement_weight(m, tau);
  const HBModel Et = build_multiplier(comp, R);
  LiftReport out;
  out.tau = tau;
  const GaussLegendre gl(4);
  struct Cell {
    double lifted, weighted;
  };
  auto cells = parallel_map<Cell>(grid.size() - 1, [&](size_t i) {
    const double a = grid.points[i].real(), b = grid.points[i + 1].real();
    Cell c{0, 0};
    for (int j = 0; j < 4; ++j) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[j];
      const double l = log_abs_f(x);
      if (!std::isfinite(l)) continue;
      c.lifted += gl.weights[j] * std::exp(2 * (l - g(x) + log_abs_E(Et, x)));
      c.weighted += gl.weights[j] * std::exp(2 * (l - g(x) - eval_omega(m, x, cfg)));
    }
    c.lifted *= 0.5 * (b - a);
    c.weighted *= 0.5 * (b - a);
    return c;
  });
  for (const auto& c : cells) {
    out.lifted_norm += c.lifted;
    out.weighted_norm += c.weighted;
  }
  out.lifted_norm = std::sqrt(out.lifted_norm);
  out.weighted_norm = std::sqrt(out.weighted_norm);
  out.ratio = out.weighted_norm > 0 ? out.lifted_norm / out.weighted_norm : std::numeric_limits<double>::quiet_NaN();
  auto log_lift = [&](cplx z) { return log_abs_f(z) - g(z).real() + log_abs_E(Et, z); };
  out.lift_type = exponential_type_estimate(log_lift, default_rays(), {8, 12, 16, 24, 32});
  out.type_pass = !(out.lift_type.value > std::numbers::pi * tau * (1 + type_tolerance));
  const double lo = grid.points.front().real(), hi = grid.points.back().real();
  for (cplx s : Et.zeros)
    if (s.real() >= lo && s.real() <= hi) {
      const double l = log_lift(s);
      out.sigma_max_abs = std::max(out.sigma_max_abs, std::isfinite(l) ? std::exp(l) : 0.0);
    }
  std::ostringstream os;
  os << "E_{tau-m} truncated at R = " << R << " with " << Et.zeros.size() << " zeros";
  out.notes = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation battery

struct PavlovConfig {
  double window_lo = -20, window_hi = 20;
  double separation_threshold = 0.1;
  double carleson_threshold = 10.0;
  double a2_threshold = 10.0;
  double type_tolerance = 0.1;
  double log_plus_bound = 10.0;
  double log_plus_step = 0.05;
  double center_step = 1.0;
  double h_min = 1e-3, h_max = 1e2;
  std::vector<double> radii{8, 12, 16, 24, 32};
  QuadratureConfig quad{1e-9, 1e-9, 20000, 8.0};
  QuadratureConfig a2_quad{1e-12, 1e-6, 20000, 8.0};
};

struct PavlovVerdict {
  bool pass = false;
  double value = 0;
  std::string detail;
};

struct PavlovReport {
  double alpha = 0;
  double tau = 0;
  LevelSet level_set;
  PavlovVerdict separation;
  PavlovVerdict carleson;
  PavlovVerdict type_estimate;  // type of e^{-g} e^{-omega_m} E vs pi tau, with the log+ integral
  double log_plus_integral = 0;
  A2Result a2;
  bool overall = false;
  std::string verdict;
};

/// v(x) = sin^2(phi(x) - alpha) / (phi'(x) dist(x, Lambda)^2), equal to phi'(x) in the limit
/// at a point of Lambda.
inline double pavlov_weight(const HBModel& E, const LevelSet& ls, double x) {
  const double lam = ls.nearest(x);
  const double d = std::abs(x - lam);
  const double dp = phase_derivative(E, x);
  if (d < 1e-7 * (1 + std::abs(x))) return dp;
  const double s = std::sin(phase(E, x) - ls.alpha);
  return s * s / (dp * d * d);
}

inline PavlovReport pavlov_diagnostics(const HBModel& E, double alpha, const MajorantRepresentation& rep, double tau,
                                       const PavlovConfig& cfg = {}) {
  const double pi = std::numbers::pi;
  const double lo = cfg.window_lo, hi = cfg.window_hi;
  if (!(lo < hi)) throw Error(ErrorKind::invalid_input, "window needs lo < hi");
  if (!(tau > 0)) throw Error(ErrorKind::invalid_input, "tau must be positive");
  PavlovReport out;
  out.alpha = alpha;
  out.tau = tau;

  const auto core = solve_level_set(E, alpha, lo, hi);
  const double pad = 2 * std::max(1.0, core.max_gap());
  out.level_set = solve_level_set(E, alpha, lo - pad, hi + pad);
  std::vector<double> inside;
  for (double p : out.level_set.points)
    if (p >= lo && p <= hi) inside.push_back(p);

  if (inside.size() < 2) {
    out.separation = {false, 0, "fewer than two level-set points in the window"};
  } else {
    const auto sep = check_separation(inside, Metric::euclidean, cfg.separation_threshold);
    std::ostringstream os;
    os << "min gap " << sep.min_gap << " between " << sep.witness_a.real() << " and " << sep.witness_b.real();
    out.separation = {sep.pass, sep.min_gap, os.str()};
  }

  {
    std::vector<cplx> c(inside.begin(), inside.end());
    const auto car = check_carleson(c, {1, 4, 16}, cfg.carleson_threshold, {lo, 0.5 * (lo + hi), hi});
    out.carleson = {car.pass, car.sup_estimate, "real level set"};
  }

  {
    auto log_h = [&](cplx z) { return log_abs_E(E, z) - rep.g(z).real() - eval_omega(rep.m, z, cfg.quad); };
    const auto t = exponential_type_estimate(log_h, default_rays(), cfg.radii);
    // log+ has a kink at every sign change, so a fixed two-point rule per cell is used
    const GaussLegendre gl(2);
    const size_t ncell = static_cast<size_t>(std::ceil((hi - lo) / cfg.log_plus_step));
    const double w = (hi - lo) / static_cast<double>(ncell);
    const auto cells = parallel_map<double>(ncell, [&](size_t i) {
      double acc = 0;
      for (int j = 0; j < 2; ++j) {
        const double x = lo + (static_cast<double>(i) + 0.5 * (1 + gl.nodes[j])) * w;
        acc += gl.weights[j] * std::max(0.0, log_h(x)) / (x * x + 1);
      }
      return 0.5 * w * acc;
    });
    out.log_plus_integral = 0;
    for (double c : cells) out.log_plus_integral += c;
    const bool type_ok = !(t.value > pi * tau + cfg.type_tolerance);
    const bool lp_ok = std::isfinite(out.log_plus_integral) && out.log_plus_integral <= cfg.log_plus_bound;
    std::ostringstream os;
    os << "type " << t.value << " vs pi tau " << pi * tau << " (worst ray " << t.worst_angle * 180 / pi
       << " deg); log+ integral over window " << out.log_plus_integral;
    out.type_estimate = {type_ok && lp_ok, t.value, os.str()};
  }

  {
    A2Weight w;
    const LevelSet& ls = out.level_set;
    w.v = [&E, &ls](double x) { return pavlov_weight(E, ls, x); };
    for (size_t i = 1; i < ls.points.size(); ++i) w.kinks.push_back(0.5 * (ls.points[i - 1] + ls.points[i]));
    A2Family fam;
    fam.center_lo = lo;
    fam.center_hi = hi;
    fam.center_step = cfg.center_step;
    fam.h_min = cfg.h_min;
    fam.h_max = std::min(cfg.h_max, hi - lo);
    fam.clip_lo = lo;
    fam.clip_hi = hi;
    out.a2 = check_a2(w, fam, cfg.a2_threshold, cfg.a2_quad);
  }

  out.overall = out.separation.pass && out.carleson.pass && out.type_estimate.pass && out.a2.pass;
  std::string failed;
  if (!out.separation.pass) failed += " separation";
  if (!out.carleson.pass) failed += " carleson";
  if (!out.type_estimate.pass) failed += " type";
  if (!out.a2.pass) failed += " a2";
  out.verdict = out.overall ? "all conditions consistent on the window" : "failed:" + failed;
  return out;
}

/// Default alpha pair: {0, pi/2} moved off phi(0) mod pi when they coincide with it.
inline std::pair<double, double> default_alpha_pair(const HBModel& E) {
  const double pi = std::numbers::pi;
  double p0 = std::fmod(phase(E, 0.0), pi);
  if (p0 < 0) p0 += pi;
  auto shift = [&](double a) { return std::abs(a - p0) < 1e-3 ? std::fmod(a + 0.3, pi) : a; };
  return {shift(0.0), shift(pi / 2)};
}

// ---------------------------------------------------------------------------
// Exceptional alpha

struct ExceptionalRow {
  double T = 0;
  double sine_integral = 0;   // int_{-T}^{T} sin^2(phi - alpha)
  double sigma_integral = 0;  // int_{-T}^{T} sigma
};

struct ExceptionalReport {
  double alpha = 0;
  std::vector<ExceptionalRow> rows;
  bool sine_grows = false;
  bool sigma_grows = false;
  bool counterexample = false;  // sigma grows while the sine integral does not
  std::string verdict;
};

/// Paired ladders of the truncated integrals of sin^2(phi - alpha) and sigma; "grows" means
/// the last window holds at least half the mass of linear growth from the first.
inline ExceptionalReport exceptional_alpha_diagnostic(const HBModel& E, double alpha, const StripParams& sp = {},
                                                      std::vector<double> ladder = {5, 10, 20, 40},
                                                      const QuadratureConfig& cfg = {1e-9, 1e-9, 20000, 8.0}) {
  if (ladder.size() < 2) throw Error(ErrorKind::invalid_input, "exceptional-alpha ladder needs >= 2 windows");
  std::sort(ladder.begin(), ladder.end());
  ExceptionalReport out;
  out.alpha = alpha;
  for (double T : ladder) {
    LinePoints pts;
    for (cplx l : E.zeros)
      if (std::abs(l.real()) < T) pts.kinks.push_back(l.real());
    ExceptionalRow row;
    row.T = T;
    row.sine_integral = integrate_interval(
                            [&](double x) {
                              const double s = std::sin(phase(E, x) - alpha);
                              return s * s;
                            },
                            -T, T, cfg, pts)
                            .value;
    // sigma is piecewise constant between nearest-zero switch points; a fine midpoint sum suffices
    const int n = static_cast<int>(std::ceil(2 * T / 0.01));
    const double h = 2 * T / n;
    double s = 0;
    for (int i = 0; i < n; ++i) {
      const auto nz = nearest_zero(E, -T + (i + 0.5) * h, sp);
      s += std::min(1.0, -nz.zero.imag());
    }
    row.sigma_integral = s * h;
    out.rows.push_back(row);
  }
  const auto& a = out.rows.front();
  const auto& b = out.rows.back();
  const double lin = b.T / a.T;
  out.sine_grows = a.sine_integral > 0 && b.sine_integral / a.sine_integral >= 0.5 * lin;
  out.sigma_grows = a.sigma_integral > 0 && b.sigma_integral / a.sigma_integral >= 0.5 * lin;
  out.counterexample = out.sigma_grows && !out.sine_grows;
  if (out.sine_grows)
    out.verdict = "sine integral grows linearly: alpha not exceptional at this level";
  else if (out.counterexample)
    out.verdict = "sigma integral grows while the sine integral does not: inconsistent on this window";
  else
    out.verdict = "sine integral does not grow on this window: inconclusive";
  return out;
}

}  // namespace pwlab
