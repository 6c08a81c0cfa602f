#pragma once

// sigma-profile, polygonal interpolation of (1/2) log sigma, mollification, the Hilbert
// transform of the smoothed derivative with its a-priori bound, and the majorant
// representation M ~ e^g e^{omega_m}.

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
#include "pwlab/numerics.hpp"
#include "pwlab/potential.hpp"
#include "pwlab/weight.hpp"

namespace pwlab {

/// sigma as a step function over the chain window: breaks[i] < x <= breaks[i+1] -> values[i].
struct SigmaProfile {
  std::vector<double> breaks;
  std::vector<double> values;

  double window_lo() const { return breaks.front(); }
  double window_hi() const { return breaks.back(); }

  double operator()(double x) const {
    if (x <= breaks.front()) return values.front();
    if (x > breaks.back()) return values.back();
    auto it = std::lower_bound(breaks.begin() + 1, breaks.end(), x);
    return values[static_cast<size_t>(it - breaks.begin()) - 1];
  }
};

inline SigmaProfile build_sigma(const MountainChain& chain) {
  struct Seg {
    double a, b, v;
  };
  std::vector<Seg> segs;
  for (const auto& p : chain.plateaux) segs.push_back({p.first, p.second, 1.0});
  for (const auto& m : chain.mountains) segs.push_back({m.a, m.b, std::min(1.0, -m.zero.imag())});
  std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
  SigmaProfile s;
  s.breaks.push_back(chain.window_lo);
  for (const auto& g : segs) {
    s.breaks.push_back(g.b);
    s.values.push_back(g.v);
  }
  return s;
}

/// Piecewise-linear interpolant of (jL, (1/2) log sigma(jL)), constant beyond the end vertices.
struct Polygon {
  double L = 1;
  std::vector<double> vx, vy;  // vertices
  std::vector<double> slopes;  // slopes[i] on [vx[i], vx[i+1]]

  double operator()(double x) const {
    if (x <= vx.front()) return vy.front();
    if (x >= vx.back()) return vy.back();
    const size_t i = static_cast<size_t>(std::upper_bound(vx.begin(), vx.end(), x) - vx.begin()) - 1;
    return vy[i] + slopes[i] * (x - vx[i]);
  }

  double max_abs_slope() const {
    double s = 0;
    for (double v : slopes) s = std::max(s, std::abs(v));
    return s;
  }
};

inline Polygon build_polygon(const SigmaProfile& sigma, int L) {
  if (L < 1) throw Error(ErrorKind::invalid_input, "L must be >= 1");
  Polygon p;
  p.L = L;
  const long j0 = static_cast<long>(std::ceil(sigma.window_lo() / L));
  const long j1 = static_cast<long>(std::floor(sigma.window_hi() / L));
  if (j1 - j0 < 1) throw Error(ErrorKind::invalid_input, "window too small for two polygon vertices at this L");
  for (long j = j0; j <= j1; ++j) {
    const double x = static_cast<double>(j) * L;
    p.vx.push_back(x);
    p.vy.push_back(0.5 * std::log(sigma(x)));
  }
  for (size_t i = 0; i + 1 < p.vx.size(); ++i) p.slopes.push_back((p.vy[i + 1] - p.vy[i]) / L);
  return p;
}

/// Unit-mass bump rho(t) = exp(-1/(1 - (t/h)^2)) / (h Z) on |t| < h, with its primitive R and
/// second primitive Phi1 tabulated on a fine grid and interpolated by cubic Hermite.
class Mollifier {
 public:
  explicit Mollifier(double half_width) : h_(half_width) {
    if (!(half_width > 0)) throw Error(ErrorKind::invalid_input, "mollifier half width must be positive");
  }

  double half_width() const { return h_; }

  double rho(double t) const { return table().density(t / h_) / h_; }
  double cdf(double t) const { return table().cdf(t / h_); }
  double second_primitive(double t) const { return h_ * table().phi1(t / h_); }
  double sup() const { return rho(0.0); }
  static double normalizer() { return table().Z; }

 private:
  struct Table {
    static constexpr int n = 4000;
    double Z = 0;
    std::vector<double> s, r, phi;

    static double raw(double s) { return std::abs(s) < 1 ? std::exp(-1 / (1 - s * s)) : 0.0; }

    Table() {
      const GaussLegendre gl(10);
      auto cell_integral = [&](double a, double b) {
        double acc = 0;
        for (size_t k = 0; k < gl.nodes.size(); ++k) acc += gl.weights[k] * raw(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[k]);
        return 0.5 * (b - a) * acc;
      };
      const double w = 2.0 / n;
      Z = 0;
      for (int i = 0; i < n; ++i) Z += cell_integral(-1 + i * w, -1 + (i + 1) * w);
      s.resize(n + 1);
      r.resize(n + 1);
      phi.resize(n + 1);
      for (int i = 0; i <= n; ++i) s[i] = -1 + i * w;
      s[n] = 1;
      r[0] = 0;
      phi[0] = 0;
      for (int i = 0; i < n; ++i) {
        const double cell = cell_integral(s[i], s[i + 1]) / Z;
        r[i + 1] = r[i] + cell;
        // exact integral of the cubic Hermite interpolant of R over the cell
        phi[i + 1] = phi[i] + w / 2 * (r[i] + r[i + 1]) + w * w / 12 * (density(s[i]) - density(s[i + 1]));
      }
    }

    double density(double u) const { return raw(u) / Z; }

    static double hermite(double y0, double y1, double d0, double d1, double w, double t) {
      const double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * w * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * w * d1;
    }

    size_t cell_of(double u) const {
      const double pos = (u + 1) / 2 * n;
      return std::min<size_t>(n - 1, static_cast<size_t>(std::max(0.0, std::floor(pos))));
    }

    double cdf(double u) const {
      if (u <= -1) return 0;
      if (u >= 1) return 1;
      const size_t i = cell_of(u);
      const double w = s[i + 1] - s[i];
      return hermite(r[i], r[i + 1], density(s[i]), density(s[i + 1]), w, (u - s[i]) / w);
    }

    double phi1(double u) const {
      if (u <= -1) return 0;
      if (u >= 1) return u;
      const size_t i = cell_of(u);
      const double w = s[i + 1] - s[i];
      return hermite(phi[i], phi[i + 1], r[i], r[i + 1], w, (u - s[i]) / w);
    }
  };

  static const Table& table() {
    static const Table t;
    return t;
  }

  double h_;
};

/// f_L = rho * p_L with derivatives; f_L = p_L away from the vertices.
struct SmoothedProfile {
  Polygon polygon;
  Mollifier rho{0.1};
  std::vector<double> jumps;  // slope change at each vertex

  double f(double x) const {
    double v = polygon.vy.front();
    for (size_t j = 0; j < jumps.size(); ++j) v += jumps[j] * rho.second_primitive(x - polygon.vx[j]);
    return v;
  }
  double df(double x) const {
    double v = 0;
    for (size_t j = 0; j < jumps.size(); ++j) v += jumps[j] * rho.cdf(x - polygon.vx[j]);
    return v;
  }
  double d2f(double x) const {
    double v = 0;
    for (size_t j = 0; j < jumps.size(); ++j) v += jumps[j] * rho.rho(x - polygon.vx[j]);
    return v;
  }
  /// Exact sup norms: f' is a convex combination of adjacent slopes; f'' has disjoint bumps.
  double sup_df() const { return polygon.max_abs_slope(); }
  double sup_d2f() const {
    double m = 0;
    for (double j : jumps) m = std::max(m, std::abs(j));
    return rho.sup() * m;
  }
  std::vector<double> knots() const {
    std::vector<double> k;
    for (double v : polygon.vx) {
      k.push_back(v - rho.half_width());
      k.push_back(v + rho.half_width());
    }
    return k;
  }
};

inline SmoothedProfile mollify(const Polygon& p, const Mollifier& rho) {
  if (!(2 * rho.half_width() < p.L))
    throw Error(ErrorKind::invalid_input, "mollifier support must be shorter than the vertex spacing");
  SmoothedProfile s;
  s.polygon = p;
  s.rho = rho;
  for (size_t j = 0; j < p.vx.size(); ++j) {
    const double left = j == 0 ? 0.0 : p.slopes[j - 1];
    const double right = j + 1 < p.vx.size() ? p.slopes[j] : 0.0;
    s.jumps.push_back(right - left);
  }
  return s;
}

/// Mollifier half width: a sixth of the shortest unclipped mountain base (support under a
/// third of it), capped by L/3.
inline double default_half_width(const MountainChain& chain, int L) {
  double base = 1.0;
  for (const auto& m : chain.mountains)
    if (!m.clipped) base = std::min(base, m.b - m.a);
  return std::min(base / 6, L / 3.0);
}

struct ConditionVerdict {
  bool pass = false;
  double value = 0;
  double bound = 0;
  double witness_x = 0, witness_x2 = 0;
};

struct SmoothingReport {
  ConditionVerdict approximation;  // sup |(1/2) log sigma - f_L|
  ConditionVerdict decay;          // max |f_L(x) - f_L(x')| / (4 C |x - x'|^{1-eps}) over |x - x'| >= 3L
  ConditionVerdict second_derivative;
  ConditionVerdict first_derivative;
  bool all_pass() const {
    return approximation.pass && decay.pass && second_derivative.pass && first_derivative.pass;
  }
};

inline SmoothingReport verify_smoothing_conditions(const SmoothedProfile& f, const SigmaProfile& sigma, double C,
                                                   double eps, double approximation_bound = 1.0,
                                                   double step = 0.05, double pair_step = 0.5) {
  if (!(C > 0) || !(eps > 0 && eps < 1)) throw Error(ErrorKind::invalid_input, "need C > 0 and eps in (0, 1)");
  SmoothingReport rep;
  const double lo = sigma.window_lo(), hi = sigma.window_hi();
  const double L = f.polygon.L;
  rep.approximation.bound = approximation_bound;
  for (double x = lo; x <= hi + 1e-12; x += step) {
    const double d = std::abs(0.5 * std::log(sigma(x)) - f.f(x));
    if (d > rep.approximation.value) {
      rep.approximation.value = d;
      rep.approximation.witness_x = x;
    }
  }
  rep.approximation.pass = rep.approximation.value <= approximation_bound;

  std::vector<double> xs, fs;
  for (double x = lo; x <= hi + 1e-12; x += pair_step) {
    xs.push_back(x);
    fs.push_back(f.f(x));
  }
  rep.decay.bound = 1.0;
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j) {
      const double d = xs[j] - xs[i];
      if (d < 3 * L) continue;
      const double r = std::abs(fs[j] - fs[i]) / (4 * C * std::pow(d, 1 - eps));
      if (r > rep.decay.value) {
        rep.decay.value = r;
        rep.decay.witness_x = xs[i];
        rep.decay.witness_x2 = xs[j];
      }
    }
  rep.decay.pass = rep.decay.value <= 1.0;

  rep.second_derivative.value = f.sup_d2f();
  rep.second_derivative.bound = 4 * f.rho.sup() * C * std::pow(L, -eps);
  rep.second_derivative.pass = rep.second_derivative.value <= rep.second_derivative.bound;
  rep.first_derivative.value = f.sup_df();
  rep.first_derivative.bound = 2 * C * std::pow(L, -eps);
  rep.first_derivative.pass = rep.first_derivative.value <= rep.first_derivative.bound;
  return rep;
}

/// A twice differentiable f with its derivatives, sup norms and breakpoints for quadrature.
struct DerivProfile {
  std::function<double(double)> f, df, d2f;
  double sup_df = 0;
  double sup_d2f = 0;
  std::vector<double> knots;
};

inline DerivProfile to_deriv_profile(const SmoothedProfile& s) {
  DerivProfile p;
  p.f = [s](double x) { return s.f(x); };
  p.df = [s](double x) { return s.df(x); };
  p.d2f = [s](double x) { return s.d2f(x); };
  p.sup_df = s.sup_df();
  p.sup_d2f = s.sup_d2f();
  p.knots = s.knots();
  return p;
}

struct HilbertResult {
  std::vector<double> x;
  std::vector<double> H;
  double sup = 0;
  double bound = 0;
};

/// (1/pi) pv int f'(t) / (x - t) dt at one point, split into [0,1], [1,R] and the tails
/// integrated by parts.
inline double hilbert_at(const DerivProfile& p, double x, double R, const QuadratureConfig& cfg = {}) {
  auto paired = [&](double t) {
    if (t < 1e-6) return -2 * p.d2f(x);
    return (p.df(x - t) - p.df(x + t)) / t;
  };
  LinePoints pts;
  for (double k : p.knots) pts.kinks.push_back(std::abs(k - x));
  const double near = integrate_interval(paired, 0.0, 1.0, cfg, pts).value;
  const double mid = integrate_interval(paired, 1.0, R, cfg, pts).value;
  const double fx = p.f(x);
  LinePoints left_pts, right_pts;
  for (double k : p.knots) {
    if (x - k > R) left_pts.kinks.push_back(x - k);
    if (k - x > R) right_pts.kinks.push_back(k - x);
  }
  const double t1 = integrate_half_line([&](double t) { return (fx - p.f(x - t)) / (t * t); }, R, cfg, left_pts).value -
                    (fx - p.f(x - R)) / R;
  const double t2 = integrate_half_line([&](double t) { return (p.f(x + t) - fx) / (t * t); }, R, cfg, right_pts).value -
                    (p.f(x + R) - fx) / R;
  return (near + mid + t1 - t2) / std::numbers::pi;
}

/// (1/pi)(2 ||f''|| + 2 log R ||f'|| + (2A / R^eps)(1 + 1/eps)).
inline double hilbert_bound(double sup_df, double sup_d2f, double R, double A, double eps) {
  return (2 * sup_d2f + 2 * std::log(R) * sup_df + 2 * A / std::pow(R, eps) * (1 + 1 / eps)) / std::numbers::pi;
}

inline HilbertResult hilbert_of_derivative(const DerivProfile& p, const std::vector<double>& xs, double R, double A,
                                           double eps, const QuadratureConfig& cfg = {}) {
  if (!(R > 1)) throw Error(ErrorKind::invalid_input, "split radius R must exceed 1");
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::invalid_input, "eps must lie in (0, 1)");
  if (!(A >= 0) || !std::isfinite(p.sup_df) || !std::isfinite(p.sup_d2f))
    throw Error(ErrorKind::invalid_input, "derivative sup norms must be finite and A >= 0");
  HilbertResult out;
  out.x = xs;
  out.H = parallel_map<double>(xs.size(), [&](size_t i) { return hilbert_at(p, xs[i], R, cfg); });
  for (double h : out.H) out.sup = std::max(out.sup, std::abs(h));
  out.bound = hilbert_bound(p.sup_df, p.sup_d2f, R, A, eps);
  return out;
}

// ---------------------------------------------------------------------------
// Majorant representation

struct MajorantRepresentation {
  RealPoly g;
  double a = 0;
  double c = 0;
  Weight m;
  std::string branch;  // "easy" or "general"
  int L = 0;
  RealPoly h;
  double hilbert_sup = 0;
  double hilbert_bound = 0;
  double window_lo = 0, window_hi = 0;
};

struct BatteryEntry {
  std::string name;
  double de_branges_norm2 = 0;  // int |f|^2 / |E|^2 over the window
  double weighted_norm2 = 0;    // int |f|^2 e^{-2g} e^{-2 omega_m} over the window
  double ratio = 0;
};

struct RepresentationResult {
  MajorantRepresentation rep;
  ComparabilityCertificate certificate;  // M(x) over e^{g(x)} e^{omega_m(x)}
  std::vector<BatteryEntry> battery;
  double battery_min = 0, battery_max = 0;
};

struct RepresentationConfig {
  double window_lo = -40;
  double window_hi = 40;
  int g_degree = 2;
  double sample_step = 0.05;
  double cert_step = 0.25;
  Band band{0.1, 10};
  bool battery = true;
  std::string branch = "auto";  // "auto", "easy" (m = phi'/pi even with strip zeros) or "general"
  QuadratureConfig quad{1e-9, 1e-9, 20000, 8.0};
};

namespace detail {

/// Cell-sampled weight on the window, padded by the boundary values over one window width,
/// then 1.
inline Weight sampled_weight(double lo, double hi, double step, const std::function<double(double)>& value) {
  std::vector<double> edges, vals;
  const long n = std::max(1L, static_cast<long>(std::round((hi - lo) / step)));
  const double w = (hi - lo) / n;
  const double pad = hi - lo;
  edges.push_back(lo - pad);
  vals.push_back(value(lo + 0.5 * w));
  for (long i = 0; i < n; ++i) {
    edges.push_back(lo + i * w);
    vals.push_back(value(lo + (i + 0.5) * w));
  }
  edges.push_back(hi);
  vals.push_back(vals.back());
  edges.push_back(hi + pad);
  return Weight::from_cells(edges, vals, 1.0);
}

inline std::vector<double> cell_midpoints(double lo, double hi, double step) {
  const long n = std::max(1L, static_cast<long>(std::round((hi - lo) / step)));
  const double w = (hi - lo) / n;
  std::vector<double> xs;
  for (long i = 0; i < n; ++i) xs.push_back(lo + (i + 0.5) * w);
  return xs;
}

inline RealPoly add_poly(RealPoly p, const std::vector<double>& q) {
  if (p.coeffs.size() < q.size()) p.coeffs.resize(q.size(), 0.0);
  for (size_t i = 0; i < q.size(); ++i) p.coeffs[i] += q[i];
  return p;
}

/// Linear interpolation on a uniform grid.
inline double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const size_t i = static_cast<size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] * (1 - t) + ys[i + 1] * t;
}

inline void run_battery(const HBModel& E, RepresentationResult& res, const std::vector<double>& xs,
                        const std::vector<double>& log_weight, const QuadratureConfig& cfg) {
  const double lo = res.rep.window_lo, hi = res.rep.window_hi;
  struct Item {
    std::string name;
    std::function<double(double)> log_f_over_E;  // log |f(x) / E(x)|
    std::vector<double> kinks;
  };
  std::vector<Item> items;
  std::vector<cplx> zs = E.zeros;
  std::sort(zs.begin(), zs.end(), [](cplx p, cplx q) { return std::abs(p.real()) < std::abs(q.real()); });
  for (size_t i = 0; i < std::min<size_t>(4, zs.size()); ++i) {
    const cplx l = zs[i];
    std::ostringstream os;
    os << "E/(z-(" << l.real() << (l.imag() < 0 ? "" : "+") << l.imag() << "i))";
    items.push_back({os.str(), [l](double x) { return -std::log(std::abs(x - l)); },
                     {l.real() + l.imag(), l.real(), l.real() - l.imag()}});
  }
  for (double w : {-5.0, 0.0, 5.0}) {
    if (w < lo || w > hi) continue;
    items.push_back({"k_" + std::to_string(static_cast<int>(w)),
                     [&E, w](double x) {
                       const cplx k = reproducing_kernel(E, w, x);
                       return std::log(std::abs(k)) - log_abs_E(E, x);
                     },
                     {w}});
  }
  LinePoints base;
  for (const auto& m : E.zeros)
    if (m.real() > lo && m.real() < hi) base.kinks.push_back(m.real());
  for (const auto& it : items) {
    LinePoints pts = base;
    pts.kinks.insert(pts.kinks.end(), it.kinks.begin(), it.kinks.end());
    BatteryEntry b;
    b.name = it.name;
    b.de_branges_norm2 =
        integrate_interval([&](double x) { return std::exp(2 * it.log_f_over_E(x)); }, lo, hi, cfg, pts).value;
    b.weighted_norm2 = integrate_interval(
                           [&](double x) {
                             return std::exp(2 * (it.log_f_over_E(x) + log_abs_E(E, x) - interp(xs, log_weight, x)));
                           },
                           lo, hi, cfg, pts)
                           .value;
    b.ratio = b.de_branges_norm2 / b.weighted_norm2;
    res.battery.push_back(b);
  }
  if (!res.battery.empty()) {
    res.battery_min = res.battery_max = res.battery.front().ratio;
    for (const auto& b : res.battery) {
      res.battery_min = std::min(res.battery_min, b.ratio);
      res.battery_max = std::max(res.battery_max, b.ratio);
    }
  }
}

}  // namespace detail

/// Builds (g, a, c, m) with M(x) comparable to e^{g(x)} e^{omega_m(x)} on the window and
/// certifies it on a real grid. Throws positivity_failure when psi' - H f_L' is not
/// positive (retry with a larger L).
inline RepresentationResult build_majorant_representation(const HBModel& E, const StripParams& sp, int L,
                                                          const RepresentationConfig& cfg = {}) {
  sp.validate();
  const double lo = cfg.window_lo, hi = cfg.window_hi;
  const auto chain = segment_chain(E, sp, lo, hi);
  RepresentationResult res;
  auto& rep = res.rep;
  rep.L = L;
  rep.window_lo = lo;
  rep.window_hi = hi;

  std::vector<double> xs;
  for (double x = lo; x <= hi + 1e-9; x += cfg.cert_step) xs.push_back(x);
  std::vector<double> log_m_target(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) log_m_target[i] = log_majorant(E, xs[i]);

  auto omega_on = [&](const Weight& w) {
    return parallel_map<double>(xs.size(), [&](size_t i) { return eval_omega(w, xs[i], cfg.quad); });
  };

  if (cfg.branch != "auto" && cfg.branch != "easy" && cfg.branch != "general")
    throw Error(ErrorKind::invalid_input, "branch must be auto, easy or general");
  if (cfg.branch == "general" && chain.mountains.empty())
    throw Error(ErrorKind::invalid_input, "general branch needs strip zeros in the window");
  std::vector<double> omega_m;
  if (cfg.branch == "easy" || (cfg.branch == "auto" && chain.mountains.empty())) {
    rep.branch = "easy";
    rep.m = detail::sampled_weight(lo, hi, cfg.sample_step,
                                   [&](double x) { return phase_derivative(E, x) / std::numbers::pi; });
    omega_m = omega_on(rep.m);
    std::vector<double> resid(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) resid[i] = log_m_target[i] - omega_m[i];
    rep.h.coeffs = polyfit(xs, resid, cfg.g_degree);
    rep.g = rep.h;
  } else {
    rep.branch = "general";
    const auto sigma = build_sigma(chain);
    const auto poly = build_polygon(sigma, L);
    const auto fl = mollify(poly, Mollifier(default_half_width(chain, L)));
    const HBModel F = shift_down(E, sp);
    const auto mids = detail::cell_midpoints(lo, hi, cfg.sample_step);
    const auto hil = hilbert_of_derivative(to_deriv_profile(fl), mids, 3.0 * L, 4 * sp.growth_constant,
                                           sp.epsilon_growth, cfg.quad);
    rep.hilbert_sup = hil.sup;
    rep.hilbert_bound = hil.bound;
    double inf_psi = std::numeric_limits<double>::infinity();
    std::vector<double> psi(mids.size());
    for (size_t i = 0; i < mids.size(); ++i) {
      psi[i] = phase_derivative(F, mids[i]);
      inf_psi = std::min(inf_psi, psi[i]);
    }
    if (!(hil.sup < inf_psi)) {
      std::ostringstream os;
      os << "sup |H f_L'| = " << hil.sup << " >= inf psi' = " << inf_psi << " at L = " << L << "; retry with larger L";
      throw Error(ErrorKind::positivity_failure, os.str());
    }
    auto cell_index = [&](double x) {
      const double w = (hi - lo) / static_cast<double>(mids.size());
      return std::min(mids.size() - 1, static_cast<size_t>(std::max(0.0, std::floor((x - lo) / w))));
    };
    rep.m = detail::sampled_weight(lo, hi, cfg.sample_step, [&](double x) {
      const size_t i = cell_index(x);
      return (psi[i] - hil.H[i]) / std::numbers::pi;
    });
    const Weight mpsi = detail::sampled_weight(lo, hi, cfg.sample_step,
                                               [&](double x) { return psi[cell_index(x)] / std::numbers::pi; });
    omega_m = omega_on(rep.m);
    const auto omega_psi = omega_on(mpsi);
    std::vector<double> resid_h(xs.size()), resid_ac(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      resid_h[i] = log_abs_E(F, xs[i]) - omega_psi[i];
      resid_ac[i] = fl.f(xs[i]) - (omega_m[i] - omega_psi[i]);
    }
    rep.h.coeffs = polyfit(xs, resid_h, cfg.g_degree);
    const auto ac = polyfit(xs, resid_ac, 1);
    rep.c = ac[0];
    rep.a = ac.size() > 1 ? ac[1] : 0.0;
    rep.g = detail::add_poly(rep.h, {rep.c, rep.a});
  }

  std::vector<double> log_rep(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) log_rep[i] = rep.g(xs[i]) + omega_m[i];
  Grid grid = Grid::from_reals(xs, "");
  {
    std::ostringstream os;
    os << "window [" << lo << ", " << hi << "] step " << cfg.cert_step;
    grid.description = os.str();
  }
  res.certificate = certify_comparable_log([&](cplx z) { return log_m_target[static_cast<size_t>(std::round((z.real() - lo) / cfg.cert_step))]; },
                                           [&](cplx z) { return log_rep[static_cast<size_t>(std::round((z.real() - lo) / cfg.cert_step))]; },
                                           grid, cfg.band);
  res.certificate.notes = "M over e^g e^omega_m (" + rep.branch + " branch); " + res.certificate.notes;
  if (cfg.battery) detail::run_battery(E, res, xs, log_rep, cfg.quad);
  return res;
}

/// Doubles L from `L` up to `L_max` until the positivity requirement holds.
inline RepresentationResult build_majorant_representation_auto(const HBModel& E, const StripParams& sp, int L,
                                                               int L_max, const RepresentationConfig& cfg = {}) {
  for (;; L *= 2) {
    try {
      return build_majorant_representation(E, sp, L, cfg);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::positivity_failure || 2 * L > L_max) throw;
    }
  }
}

}  // namespace pwlab
