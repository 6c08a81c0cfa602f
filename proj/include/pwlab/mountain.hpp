#pragma once

// Nearest-zero geometry, the mountain-chain profile gamma_delta, segmentation into mountains
// and plateaux, axiom checks, the shift-down construction and related certificates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pwlab/hb_model.hpp"
#include "pwlab/numerics.hpp"

namespace pwlab {

struct StripParams {
  double delta = 0.5;
  double epsilon_growth = 0.3;
  double growth_constant = 0.25;

  void validate() const {
    if (!(delta > 0 && delta <= 1)) throw Error(ErrorKind::invalid_input, "delta must lie in (0, 1]");
    if (!(epsilon_growth > 0 && epsilon_growth < 1))
      throw Error(ErrorKind::invalid_input, "epsilon must lie in (0, 1)");
    if (!(growth_constant > 0)) throw Error(ErrorKind::invalid_input, "growth constant must be positive");
  }
};

enum class Region { I, II, III };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
  }
  return "?";
}

struct NearestZero {
  cplx zero;
  size_t index = 0;
  Region region = Region::III;
};

/// Euclidean-nearest zero to the real point x; ties go to the smaller real part.
inline NearestZero nearest_zero(const HBModel& model, double x, const StripParams& sp) {
  if (model.zeros.empty()) throw Error(ErrorKind::invalid_input, "model has no zeros");
  size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < model.zeros.size(); ++i) {
    const cplx l = model.zeros[i];
    const double d = std::norm(l - x);
    const double tie = 1e-12 * std::min(d, best_d);
    if (d < best_d - tie || (std::abs(d - best_d) <= tie && l.real() < model.zeros[best].real())) {
      best = i;
      best_d = d;
    }
  }
  NearestZero out;
  out.index = best;
  out.zero = model.zeros[best];
  const double eta = -out.zero.imag();
  if (std::sqrt(best_d) < sp.delta)
    out.region = Region::I;
  else if (eta < sp.delta)
    out.region = Region::II;
  else
    out.region = Region::III;
  return out;
}

inline bool in_strip(cplx l, double delta) { return -l.imag() < delta; }

/// eta / |x - lambda|^2 when the nearest zero lies in the strip, 1 otherwise.
inline double gamma_delta(const HBModel& model, double x, const StripParams& sp) {
  const auto nz = nearest_zero(model, x, sp);
  if (!in_strip(nz.zero, sp.delta)) return 1.0;
  return -nz.zero.imag() / std::norm(x - nz.zero);
}

struct Mountain {
  double a = 0, b = 0;  // base (a, b]
  double summit_x = 0;
  double summit_height = 0;  // 1 / eta
  cplx zero;
  bool clipped = false;  // base cut by the analysis window
};

struct MountainChain {
  double delta = 0.5;
  double window_lo = 0, window_hi = 0;
  std::vector<Mountain> mountains;
  std::vector<std::pair<double, double>> plateaux;

  /// Index of the mountain whose base contains x, if any.
  std::optional<size_t> mountain_at(double x) const {
    auto it = std::lower_bound(mountains.begin(), mountains.end(), x,
                               [](const Mountain& m, double v) { return m.b < v; });
    if (it != mountains.end() && x > it->a && x <= it->b) return static_cast<size_t>(it - mountains.begin());
    if (it != mountains.end() && x == it->a && x == window_lo && it->a == window_lo)
      return static_cast<size_t>(it - mountains.begin());
    return std::nullopt;
  }

  double gamma(double x) const {
    if (auto i = mountain_at(x)) {
      const cplx l = mountains[*i].zero;
      return -l.imag() / std::norm(x - l);
    }
    return 1.0;
  }

  /// sigma(x) = min(1, eta) under mountains, 1 on plateaux.
  double sigma(double x) const {
    if (auto i = mountain_at(x)) return std::min(1.0, -mountains[*i].zero.imag());
    return 1.0;
  }

  /// Segment boundaries inside the window (excluding the window ends).
  std::vector<double> boundaries() const {
    std::vector<double> b;
    for (const auto& m : mountains) {
      if (m.a > window_lo) b.push_back(m.a);
      if (m.b < window_hi) b.push_back(m.b);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }
};

namespace detail {

struct EnvelopePiece {
  size_t zero;
  double lo, hi;  // (lo, hi]
};

/// Lower envelope of x -> |x - lambda|^2 over all zeros: a partition of the real line into
/// cells (lo, hi] owned by the nearest zero (ties to the smaller real part).
inline std::vector<EnvelopePiece> nearest_zero_cells(const HBModel& model) {
  std::vector<size_t> order(model.zeros.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  // |x - l|^2 = x^2 - 2 xi x + |l|^2: lines with slope -2 xi, intercept |l|^2.
  std::stable_sort(order.begin(), order.end(), [&](size_t p, size_t q) {
    const cplx a = model.zeros[p], b = model.zeros[q];
    if (a.real() != b.real()) return a.real() < b.real();
    return std::norm(a) < std::norm(b);
  });
  std::vector<size_t> lines;
  for (size_t idx : order)
    if (lines.empty() || model.zeros[lines.back()].real() != model.zeros[idx].real()) lines.push_back(idx);
  auto cross = [&](size_t i, size_t j) {
    const cplx li = model.zeros[i], lj = model.zeros[j];
    return (std::norm(lj) - std::norm(li)) / (2 * (lj.real() - li.real()));
  };
  std::vector<size_t> hull;
  std::vector<double> starts;  // hull[k] owns (starts[k], starts[k+1]]
  for (size_t idx : lines) {
    while (!hull.empty()) {
      const double x = cross(hull.back(), idx);
      if (x <= starts.back()) {
        hull.pop_back();
        starts.pop_back();
      } else {
        hull.push_back(idx);
        starts.push_back(x);
        break;
      }
    }
    if (hull.empty()) {
      hull.push_back(idx);
      starts.push_back(-std::numeric_limits<double>::infinity());
    }
  }
  std::vector<EnvelopePiece> out;
  for (size_t k = 0; k < hull.size(); ++k)
    out.push_back({hull[k], starts[k], k + 1 < hull.size() ? starts[k + 1] : std::numeric_limits<double>::infinity()});
  return out;
}

}  // namespace detail

/// Mountains are the cells of strip zeros, plateaux the merged remainder, within the window.
inline MountainChain segment_chain(const HBModel& model, const StripParams& sp, double window_lo, double window_hi) {
  sp.validate();
  if (!(window_lo < window_hi)) throw Error(ErrorKind::invalid_input, "window must satisfy lo < hi");
  MountainChain chain;
  chain.delta = sp.delta;
  chain.window_lo = window_lo;
  chain.window_hi = window_hi;
  if (model.zeros.empty()) {
    chain.plateaux.push_back({window_lo, window_hi});
    return chain;
  }
  for (const auto& cell : detail::nearest_zero_cells(model)) {
    const double lo = std::max(cell.lo, window_lo), hi = std::min(cell.hi, window_hi);
    if (!(lo < hi)) continue;
    const cplx l = model.zeros[cell.zero];
    if (in_strip(l, sp.delta)) {
      Mountain m;
      m.a = lo;
      m.b = hi;
      m.summit_x = l.real();
      m.summit_height = -1.0 / l.imag();
      m.zero = l;
      m.clipped = cell.lo < window_lo || cell.hi > window_hi;
      chain.mountains.push_back(m);
    } else if (!chain.plateaux.empty() && chain.plateaux.back().second == lo) {
      chain.plateaux.back().second = hi;
    } else {
      chain.plateaux.push_back({lo, hi});
    }
  }
  return chain;
}

struct AxiomConfig {
  Band axiom1_band{0.1, 10.0};
  double base_lo = 0.5;
  double base_hi = 2.0;
  double summit_margin = 0.25;
  double separation_threshold = 0.25;
  double grid_step = 0.05;
};

struct AxiomReport {
  struct {
    bool pass = false;
    ComparabilityCertificate certificate;
  } axiom1;
  struct {
    bool pass = true;
    int duplicates = 0;
    cplx witness{};
  } axiom2;
  struct {
    bool pass = true;
    double max_ratio = 0;
    double constant = 0;
    cplx witness_k{}, witness_l{};
  } axiom3;
  struct {
    bool pass = true;
    double min_distance = std::numeric_limits<double>::infinity();
    cplx witness_a{}, witness_b{};
  } separation;
  struct {
    bool pass = true;
    double min_base = std::numeric_limits<double>::infinity();
    double max_base = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    cplx witness{};
  } shape;
  MountainChain chain;
  bool overall = false;
};

/// Real grid over the window at `step`, with the summits and segment boundaries added.
inline Grid chain_grid(const MountainChain& chain, double step) {
  std::vector<double> xs;
  for (double x = chain.window_lo; x <= chain.window_hi + 1e-12; x += step) xs.push_back(x);
  for (const auto& m : chain.mountains)
    if (m.summit_x >= chain.window_lo && m.summit_x <= chain.window_hi) xs.push_back(m.summit_x);
  for (double b : chain.boundaries()) xs.push_back(b);
  std::sort(xs.begin(), xs.end());
  std::vector<double> uniq;
  for (double x : xs)
    if (uniq.empty() || x > uniq.back() + 1e-12) uniq.push_back(x);
  std::ostringstream os;
  os << "window [" << chain.window_lo << ", " << chain.window_hi << "] step " << step << " + summits + boundaries";
  return Grid::from_reals(uniq, os.str());
}

inline AxiomReport check_axioms(const HBModel& model, const StripParams& sp, double window_lo, double window_hi,
                                const AxiomConfig& cfg = {}) {
  sp.validate();
  AxiomReport rep;
  rep.chain = segment_chain(model, sp, window_lo, window_hi);
  const auto& chain = rep.chain;

  const Grid grid = chain_grid(chain, cfg.grid_step);
  rep.axiom1.certificate = certify_comparable([&](cplx z) { return phase_derivative(model, z.real()); },
                                              [&](cplx z) { return chain.gamma(z.real()); }, grid, cfg.axiom1_band);
  rep.axiom1.certificate.notes = "phi' over gamma_delta; " + rep.axiom1.certificate.notes;
  rep.axiom1.pass = rep.axiom1.certificate.pass;

  std::vector<cplx> strip;
  for (cplx l : model.zeros)
    if (in_strip(l, sp.delta) && l.real() >= window_lo && l.real() <= window_hi) strip.push_back(l);

  for (size_t i = 0; i < strip.size(); ++i)
    for (size_t j = i + 1; j < strip.size(); ++j)
      if (std::abs(strip[i] - strip[j]) <= 1e-12 * std::max(1.0, std::abs(strip[i]))) {
        ++rep.axiom2.duplicates;
        rep.axiom2.witness = strip[i];
      }
  rep.axiom2.pass = rep.axiom2.duplicates == 0;

  rep.axiom3.constant = sp.growth_constant;
  const double expo = 1 - sp.epsilon_growth;
  const auto& ms = chain.mountains;
  for (size_t i = 0; i < ms.size(); ++i)
    for (size_t j = i + 1; j < ms.size(); ++j) {
      const double dx = std::abs(ms[i].summit_x - ms[j].summit_x);
      if (dx == 0) continue;
      const double r = std::abs(std::log(-ms[i].zero.imag()) - std::log(-ms[j].zero.imag())) / std::pow(dx, expo);
      if (r > rep.axiom3.max_ratio) {
        rep.axiom3.max_ratio = r;
        rep.axiom3.witness_k = ms[i].zero;
        rep.axiom3.witness_l = ms[j].zero;
      }
    }
  rep.axiom3.pass = rep.axiom3.max_ratio <= sp.growth_constant;

  for (cplx l : strip) {
    bool skipped_self = false;
    for (cplx o : model.zeros) {
      if (o == l && !skipped_self) {
        skipped_self = true;
        continue;
      }
      const double d = std::abs(o - l);
      if (d < rep.separation.min_distance) {
        rep.separation.min_distance = d;
        rep.separation.witness_a = l;
        rep.separation.witness_b = o;
      }
    }
  }
  rep.separation.pass = rep.separation.min_distance >= cfg.separation_threshold;

  for (const auto& m : ms) {
    if (m.clipped) continue;
    const double len = m.b - m.a;
    const double margin = std::min(m.summit_x - m.a, m.b - m.summit_x);
    const bool bad = len < cfg.base_lo || len > cfg.base_hi || margin < cfg.summit_margin;
    if (bad && rep.shape.pass) rep.shape.witness = m.zero;
    rep.shape.pass = rep.shape.pass && !bad;
    rep.shape.min_base = std::min(rep.shape.min_base, len);
    rep.shape.max_base = std::max(rep.shape.max_base, len);
    rep.shape.min_margin = std::min(rep.shape.min_margin, margin);
  }

  rep.overall = rep.axiom1.pass && rep.axiom2.pass && rep.axiom3.pass && rep.separation.pass && rep.shape.pass;
  return rep;
}

struct DeltaLadderEntry {
  double delta;
  bool pass;
};

/// check_axioms over a ladder of delta values; reports every verdict and the largest pass.
inline std::pair<std::vector<DeltaLadderEntry>, std::optional<double>> delta_ladder(
    const HBModel& model, StripParams sp, double window_lo, double window_hi, const std::vector<double>& deltas,
    const AxiomConfig& cfg = {}) {
  std::vector<DeltaLadderEntry> entries;
  std::optional<double> best;
  for (double d : deltas) {
    sp.delta = d;
    const bool pass = check_axioms(model, sp, window_lo, window_hi, cfg).overall;
    entries.push_back({d, pass});
    if (pass && (!best || d > *best)) best = d;
  }
  return {entries, best};
}

/// phi'(x) minus the Poisson term of the nearest zero; x must lie under a mountain.
inline double poisson_remainder(const HBModel& model, double x, const StripParams& sp) {
  const auto nz = nearest_zero(model, x, sp);
  if (!in_strip(nz.zero, sp.delta)) throw Error(ErrorKind::invalid_input, "x is not under a mountain");
  const double eta = -nz.zero.imag();
  return phase_derivative(model, x) - eta / std::norm(x - nz.zero);
}

struct RemainderSweep {
  double max_remainder = 0;
  double witness_x = 0;
  std::vector<double> summit_eta;        // eta of each unclipped mountain, in order
  std::vector<double> summit_remainder;  // remainder at its summit
};

inline RemainderSweep poisson_remainder_sweep(const HBModel& model, const MountainChain& chain, const StripParams& sp,
                                              int samples_per_mountain = 21) {
  RemainderSweep out;
  for (const auto& m : chain.mountains) {
    for (int i = 0; i < samples_per_mountain; ++i) {
      const double x = m.a + (m.b - m.a) * (i + 0.5) / samples_per_mountain;
      const double r = std::abs(poisson_remainder(model, x, sp));
      if (r > out.max_remainder) {
        out.max_remainder = r;
        out.witness_x = x;
      }
    }
    if (!m.clipped) {
      out.summit_eta.push_back(-m.zero.imag());
      out.summit_remainder.push_back(poisson_remainder(model, m.summit_x, sp));
    }
  }
  return out;
}

/// Moves every strip zero to depth delta. With genus factors the drift absorbs the change of
/// convergence factors, so that F = E prod (1 - z/lambda~) / (1 - z/lambda) exactly.
inline HBModel shift_down(const HBModel& model, const StripParams& sp) {
  sp.validate();
  HBModel f = model;
  for (cplx& l : f.zeros) {
    if (!in_strip(l, sp.delta)) continue;
    const cplx moved(l.real(), -sp.delta);
    if (model.genus_factors) f.drift += (1.0 / l).real() - (1.0 / moved).real();
    l = moved;
  }
  return f;
}

struct ShiftRatioCheck {
  ComparabilityCertificate complex_grid;  // |F| min(1, dist(z, strip zeros)) / |E|
  ComparabilityCertificate real_axis;     // |F/E|^2 over phi'/sigma
};

inline double distance_to_strip_zeros(const HBModel& model, cplx z, double delta) {
  double d = std::numeric_limits<double>::infinity();
  for (cplx l : model.zeros)
    if (in_strip(l, delta)) d = std::min(d, std::abs(z - l));
  return d;
}

/// Certificates for the shift-down ratio relations. `grid` lies in the closed upper
/// half-plane; the real-axis certificate uses the real points of `real_grid`.
inline ShiftRatioCheck verify_shift_ratio(const HBModel& E, const HBModel& F, const StripParams& sp, const Grid& grid,
                                          const Grid& real_grid, Band band) {
  for (cplx z : grid.points)
    if (z.imag() < 0) throw Error(ErrorKind::invalid_grid, "shift ratio grid must lie in the closed upper half-plane");
  if (!real_grid.is_real()) throw Error(ErrorKind::invalid_grid, "real-axis certificate needs a real grid");
  ShiftRatioCheck out;
  out.complex_grid = certify_comparable_log(
      [&](cplx z) {
        return log_abs_E(F, z) + std::log(std::min(1.0, distance_to_strip_zeros(E, z, sp.delta)));
      },
      [&](cplx z) { return log_abs_E(E, z); }, grid, band);
  out.complex_grid.notes = "|F| min(1, dist) over |E|; " + out.complex_grid.notes;
  auto sigma = [&](double x) {
    const auto nz = nearest_zero(E, x, sp);
    return in_strip(nz.zero, sp.delta) ? std::min(1.0, -nz.zero.imag()) : 1.0;
  };
  out.real_axis = certify_comparable_log(
      [&](cplx z) { return 2 * (log_abs_E(F, z) - log_abs_E(E, z)); },
      [&](cplx z) { return std::log(phase_derivative(E, z.real()) / sigma(z.real())); }, real_grid, band);
  out.real_axis.notes = "|F/E|^2 over phi'/sigma; " + out.real_axis.notes;
  return out;
}

struct MountainIntegralReport {
  std::vector<double> mountain_integrals;  // int over each unclipped base of gamma_delta
  double integral_min = 0, integral_max = 0;
  bool mountains_in_band = true;  // max / min <= mountain_band_factor
  double lhs = 0;                 // int_window |f|^p gamma_delta
  double rhs = 0;                 // sup_{|y| < eps} int |f(t + iy)|^p dt
  double constant = 0;            // lhs / rhs (0 when both vanish)
  bool pass = false;              // lhs <= c_max rhs
};

/// Mountain integral inequality for a test function analytic on |Im z| < eps.
inline MountainIntegralReport mountain_integral_check(const MountainChain& chain, const std::function<cplx(cplx)>& f,
                                                      double p, double eps, const QuadratureConfig& cfg = {},
                                                      double mountain_band_factor = 4.0, double c_max = 10.0) {
  if (!(p > 1)) throw Error(ErrorKind::invalid_input, "p must exceed 1");
  if (!(eps > 0)) throw Error(ErrorKind::invalid_input, "eps must be positive");
  MountainIntegralReport out;
  for (const auto& m : chain.mountains) {
    if (m.clipped) continue;
    const double eta = -m.zero.imag(), xi = m.zero.real();
    out.mountain_integrals.push_back(std::atan((m.b - xi) / eta) - std::atan((m.a - xi) / eta));
  }
  if (!out.mountain_integrals.empty()) {
    out.integral_min = *std::min_element(out.mountain_integrals.begin(), out.mountain_integrals.end());
    out.integral_max = *std::max_element(out.mountain_integrals.begin(), out.mountain_integrals.end());
    out.mountains_in_band = out.integral_max <= mountain_band_factor * out.integral_min;
  }
  LinePoints pts;
  pts.kinks = chain.boundaries();
  for (const auto& m : chain.mountains) {
    const double eta = -m.zero.imag();
    for (double k : {-10.0, -1.0, 0.0, 1.0, 10.0}) pts.kinks.push_back(m.summit_x + k * eta);
  }
  out.lhs = integrate_interval([&](double t) { return std::pow(std::abs(f(t)), p) * chain.gamma(t); },
                               chain.window_lo, chain.window_hi, cfg, pts)
                .value;
  for (int j = -4; j <= 4; ++j) {
    const double y = eps * j / 5.0;
    const double v = integrate_line([&](double t) { return std::pow(std::abs(f(cplx(t, y))), p); }, cfg,
                                    LinePoints{{}, {chain.window_lo, chain.window_hi}})
                         .value;
    out.rhs = std::max(out.rhs, v);
  }
  out.constant = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
  out.pass = out.lhs <= c_max * out.rhs || (out.lhs == 0 && out.rhs == 0);
  return out;
}

}  // namespace pwlab
