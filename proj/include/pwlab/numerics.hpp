#pragma once

// Quadrature and certification substrate: adaptive Gauss-Kronrod integration over
// compact intervals, half-lines and the whole real line (with graded meshes toward
// declared log singularities), symmetric principal values, Gauss-Legendre rules, and
// comparability certificates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pwlab/error.hpp"

namespace pwlab {

using cplx = std::complex<double>;

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 20000;
  // |t| beyond which tails are mapped to compact intervals by u = 1/t.
  double tail_cut = 8.0;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || !(tail_cut >= 1) || max_subdivisions < 1)
      throw Error(ErrorKind::invalid_input, "quadrature config: need abs_tol>0, rel_tol>0, tail_cut>=1");
  }
};

struct QuadratureResult {
  double value = 0;
  double err_est = 0;
};

/// Points handed to the line integrator. Singular points get a geometric mesh graded
/// toward them; kinks are plain breakpoints (discontinuities, peaks).
struct LinePoints {
  std::vector<double> singular;
  std::vector<double> kinks;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21 constants).
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067574881, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

enum class Channel { direct, tail_pos, tail_neg };

struct Segment {
  double a, b, value, error;
  Channel channel;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
double eval_channel(F& f, Channel ch, double u) {
  switch (ch) {
    case Channel::direct: return f(u);
    case Channel::tail_pos: return f(1.0 / u) / (u * u);
    case Channel::tail_neg: return f(-1.0 / u) / (u * u);
  }
  return 0;
}

template <class F>
Segment gk21(F& f, Channel ch, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = eval_channel(f, ch, center);
  double resg = 0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  double fv1[10], fv2[10];
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = eval_channel(f, ch, center - dx);
    const double f2 = eval_channel(f, ch, center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = eval_channel(f, ch, center - dx);
    const double f2 = eval_channel(f, ch, center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  const double scale = std::abs(half);
  resk *= half;
  resg *= half;
  resabs *= scale;
  resasc *= scale;
  double err = std::abs(resk - resg);
  if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
  if (!std::isfinite(resk)) err = std::numeric_limits<double>::infinity();
  return {a, b, resk, err, ch};
}

/// Geometric mesh between s (singular) and b: s + (b - s) r^k, k = K..1, returned in
/// the order that walks from s toward b.
inline std::vector<double> graded_points(double s, double b, double ratio = 0.15) {
  std::vector<double> pts;
  const double len = b - s;
  const double floor_width = 1e-11 * std::max(1.0, std::abs(s));
  double w = std::abs(len);
  while (w * ratio > floor_width) {
    w *= ratio;
    pts.push_back(s + std::copysign(w, len));
  }
  std::reverse(pts.begin(), pts.end());
  return pts;
}

struct Piece {
  double a, b;
  Channel channel;
  bool singular_a = false;
  bool singular_b = false;
};

inline void expand_graded(const Piece& p, std::vector<Piece>& out) {
  if (!p.singular_a && !p.singular_b) {
    out.push_back(p);
    return;
  }
  double a = p.a, b = p.b;
  if (p.singular_a && p.singular_b) {
    const double mid = 0.5 * (a + b);
    expand_graded({a, mid, p.channel, true, false}, out);
    expand_graded({mid, b, p.channel, false, true}, out);
    return;
  }
  const double s = p.singular_a ? a : b;
  const double other = p.singular_a ? b : a;
  std::vector<double> pts = graded_points(s, other);
  // pts walk from near s toward other.
  std::vector<double> all;
  all.push_back(s);
  all.insert(all.end(), pts.begin(), pts.end());
  all.push_back(other);
  if (!p.singular_a) std::reverse(all.begin(), all.end());
  for (size_t i = 0; i + 1 < all.size(); ++i) {
    const double lo = std::min(all[i], all[i + 1]);
    const double hi = std::max(all[i], all[i + 1]);
    if (hi > lo) out.push_back({lo, hi, p.channel});
  }
}

template <class F>
QuadratureResult adaptive(F& f, const std::vector<Piece>& pieces, const QuadratureConfig& cfg) {
  std::vector<Piece> expanded;
  for (const auto& p : pieces) expand_graded(p, expanded);
  std::priority_queue<Segment> queue;
  std::vector<Segment> frozen;
  double total = 0, total_err = 0;
  for (const auto& p : expanded) {
    Segment s = gk21(f, p.channel, p.a, p.b);
    total += s.value;
    total_err += s.error;
    queue.push(s);
  }
  int subdivisions = 0;
  while (!queue.empty()) {
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double width_floor = 1e-12 * std::max({1.0, std::abs(worst.a), std::abs(worst.b)});
    if (worst.b - worst.a <= width_floor || mid <= worst.a || mid >= worst.b) {
      frozen.push_back(worst);
      continue;
    }
    if (++subdivisions > cfg.max_subdivisions) {
      std::ostringstream os;
      os << "no convergence after " << cfg.max_subdivisions << " subdivisions; worst subinterval ["
         << worst.a << ", " << worst.b << "] err " << worst.error;
      throw Error(ErrorKind::quadrature_failure, os.str());
    }
    Segment left = gk21(f, worst.channel, worst.a, mid);
    Segment right = gk21(f, worst.channel, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Deterministic final summation in channel/position order.
  std::vector<Segment> all = std::move(frozen);
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) {
    if (x.channel != y.channel) return x.channel < y.channel;
    return x.a < y.a;
  });
  QuadratureResult r;
  for (const auto& s : all) {
    r.value += s.value;
    r.err_est += s.error;
  }
  if (!std::isfinite(r.value))
    throw Error(ErrorKind::quadrature_failure, "non-finite integrand value");
  return r;
}

inline std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline bool contains(const std::vector<double>& sorted, double x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

/// Pieces between sorted cuts. Interior cuts closer than a relative 1e-11 to a kept cut are
/// merged into it; a merged singular point marks the surviving cut singular. `lo` and `hi`
/// always survive.
inline std::vector<Piece> make_pieces(double lo, double hi, const std::vector<double>& singular,
                                      const std::vector<double>& kinks) {
  struct Cut {
    double x;
    bool singular;
  };
  std::vector<Cut> raw;
  for (double s : singular)
    if (s >= lo && s <= hi) raw.push_back({s, true});
  for (double k : kinks)
    if (k > lo && k < hi) raw.push_back({k, false});
  std::sort(raw.begin(), raw.end(), [](const Cut& a, const Cut& b) { return a.x < b.x; });
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-11 * std::max({1.0, std::abs(a), std::abs(b)}); };
  std::vector<Cut> cuts{{lo, false}};
  for (const auto& c : raw) {
    if (close(c.x, cuts.back().x)) {
      cuts.back().singular = cuts.back().singular || c.singular;
      continue;
    }
    if (close(c.x, hi)) continue;
    cuts.push_back(c);
  }
  bool hi_singular = false;
  for (const auto& c : raw)
    if (c.singular && close(c.x, hi)) hi_singular = true;
  if (close(cuts.back().x, hi) && cuts.size() > 1) {
    hi_singular = hi_singular || cuts.back().singular;
    cuts.pop_back();
  }
  cuts.push_back({hi, hi_singular});
  std::vector<Piece> pieces;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i].x < cuts[i + 1].x)
      pieces.push_back({cuts[i].x, cuts[i + 1].x, Channel::direct, cuts[i].singular, cuts[i + 1].singular});
  return pieces;
}

}  // namespace detail

/// Adaptive integral over [a, b]. Interior singular points are split out and graded.
template <class F>
QuadratureResult integrate_interval(F&& f, double a, double b, const QuadratureConfig& cfg,
                                    const LinePoints& pts = {}) {
  cfg.validate();
  if (a == b) return {};
  if (b < a) {
    QuadratureResult r = integrate_interval(f, b, a, cfg, pts);
    return {-r.value, r.err_est};
  }
  const auto pieces = detail::make_pieces(a, b, pts.singular, pts.kinks);
  auto& fn = f;
  return detail::adaptive(fn, pieces, cfg);
}

/// Integral over the whole real line. Tails beyond max(tail_cut, 1 + 2 max|point|) are
/// mapped to (0, 1/T] by u = 1/t; the integrand must decay at least like 1/|t|^(1+s).
template <class F>
QuadratureResult integrate_line(F&& f, const QuadratureConfig& cfg, const LinePoints& pts = {}) {
  cfg.validate();
  double reach = 0;
  for (double s : pts.singular) reach = std::max(reach, std::abs(s));
  for (double k : pts.kinks) reach = std::max(reach, std::abs(k));
  const double T = std::max(cfg.tail_cut, 1.0 + 2.0 * reach);
  auto pieces = detail::make_pieces(-T, T, pts.singular, pts.kinks);
  pieces.push_back({0.0, 1.0 / T, detail::Channel::tail_pos, true, false});
  pieces.push_back({0.0, 1.0 / T, detail::Channel::tail_neg, true, false});
  auto& fn = f;
  return detail::adaptive(fn, pieces, cfg);
}

/// Integral over [a, +inf) (or (-inf, a] with to_minus_infinity), tails mapped by u = 1/t.
template <class F>
QuadratureResult integrate_half_line(F&& f, double a, const QuadratureConfig& cfg, const LinePoints& pts = {},
                                     bool to_minus_infinity = false) {
  cfg.validate();
  auto mirrored = [&](double t) { return to_minus_infinity ? f(-t) : f(t); };
  const double start = to_minus_infinity ? -a : a;
  LinePoints local;
  for (double s : pts.singular) local.singular.push_back(to_minus_infinity ? -s : s);
  for (double k : pts.kinks) local.kinks.push_back(to_minus_infinity ? -k : k);
  double reach = std::abs(start);
  for (double s : local.singular) reach = std::max(reach, std::abs(s));
  for (double k : local.kinks) reach = std::max(reach, std::abs(k));
  const double T = std::max({cfg.tail_cut, 1.0 + 2.0 * reach, start + 1.0});
  auto pieces = detail::make_pieces(start, T, local.singular, local.kinks);
  pieces.push_back({0.0, 1.0 / T, detail::Channel::tail_pos, true, false});
  return detail::adaptive(mirrored, pieces, cfg);
}

/// Symmetric principal value  lim_{e->0} int_{|t-pole|>e} f(t) dt, computed as
/// int_0^inf (f(pole - t) + f(pole + t)) dt. `kinks` are absolute positions.
template <class F>
double integrate_pv(F&& f, double pole, const QuadratureConfig& cfg, const std::vector<double>& kinks = {}) {
  cfg.validate();
  auto paired = [&](double t) { return f(pole - t) + f(pole + t); };
  // A surviving 1/t component means the odd parts did not cancel.
  // Rounding in pole -+ t leaves noise of order eps*|pole|/t, far below the threshold.
  const double near = std::abs(paired(1e-4)) * 1e-4;
  const double nearer = std::abs(paired(1e-6)) * 1e-6;
  if (!std::isfinite(nearer) || (nearer > 0.5 * near && nearer > 1e-8 * std::max(1.0, std::abs(pole))))
    throw Error(ErrorKind::pv_divergence, "paired integrand behaves like 1/t at the pole");
  LinePoints pts;
  for (double k : kinks) pts.kinks.push_back(std::abs(k - pole));
  pts.kinks.push_back(1.0);
  try {
    return integrate_half_line(paired, 0.0, cfg, pts).value;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::quadrature_failure)
      throw Error(ErrorKind::pv_divergence, std::string("paired integrand not integrable: ") + e.what());
    throw;
  }
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
struct GaussLegendre {
  std::vector<double> nodes, weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    const double pi = std::numbers::pi;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1, p1 = x;
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = weights[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
    }
  }
};

/// Number of worker threads for grid sweeps (env PWLAB_THREADS caps it).
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PWLAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Evaluates fn(i) for i in [0, n) into a vector; order of results is index order, so
/// reductions over the output are reproducible regardless of thread count.
template <class T, class Fn>
std::vector<T> parallel_map(size_t n, Fn&& fn) {
  std::vector<T> out(n);
  const unsigned workers = std::min<size_t>(worker_count(), std::max<size_t>(n, 1));
  if (workers <= 1 || n < 4) {
    for (size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------
// Grids, bands and comparability certificates

struct Grid {
  std::vector<cplx> points;
  std::string description;

  bool empty() const { return points.empty(); }
  size_t size() const { return points.size(); }

  bool is_real() const {
    return std::all_of(points.begin(), points.end(), [](cplx z) { return z.imag() == 0; });
  }

  /// Real grids must be strictly increasing; every grid must be nonempty.
  void validate() const {
    if (points.empty()) throw Error(ErrorKind::invalid_grid, "empty grid");
    if (is_real())
      for (size_t i = 1; i < points.size(); ++i)
        if (!(points[i].real() > points[i - 1].real()))
          throw Error(ErrorKind::invalid_grid, "real grid not strictly increasing");
  }

  /// lo, lo+step, ..., up to hi (inclusive within rounding), all at height `imag`.
  static Grid line(double lo, double hi, double step, double imag = 0.0) {
    if (!(step > 0) || !(hi >= lo)) throw Error(ErrorKind::invalid_grid, "grid needs lo <= hi and step > 0");
    Grid g;
    const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) g.points.emplace_back(lo + i * step, imag);
    std::ostringstream os;
    os << lo << ":" << hi << ":" << step;
    if (imag != 0) os << "," << imag;
    g.description = os.str();
    return g;
  }

  /// nx-by-ny tensor grid over [xlo, xhi] x [ylo, yhi] (endpoints included).
  static Grid rect(double xlo, double xhi, int nx, double ylo, double yhi, int ny) {
    if (nx < 1 || ny < 1) throw Error(ErrorKind::invalid_grid, "rect grid needs nx, ny >= 1");
    Grid g;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double x = nx == 1 ? xlo : xlo + (xhi - xlo) * i / (nx - 1);
        const double y = ny == 1 ? ylo : ylo + (yhi - ylo) * j / (ny - 1);
        g.points.emplace_back(x, y);
      }
    std::ostringstream os;
    os << "rect[" << xlo << "," << xhi << "]x[" << ylo << "," << yhi << "] " << nx << "x" << ny;
    g.description = os.str();
    return g;
  }

  static Grid from_points(std::vector<cplx> pts, std::string description) {
    Grid g;
    g.points = std::move(pts);
    g.description = std::move(description);
    return g;
  }

  static Grid from_reals(const std::vector<double>& xs, std::string description) {
    Grid g;
    for (double x : xs) g.points.emplace_back(x, 0.0);
    g.description = std::move(description);
    return g;
  }
};

struct Band {
  double lo = 0;
  double hi = std::numeric_limits<double>::infinity();

  void validate() const {
    if (!(lo <= hi)) throw Error(ErrorKind::invalid_input, "band must satisfy lo <= hi");
  }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct ComparabilityCertificate {
  Grid grid;
  double ratio_min = 0;
  double ratio_max = 0;
  Band band;
  bool pass = false;
  std::string notes;
  cplx argmin{};
  cplx argmax{};
};

namespace detail {

inline ComparabilityCertificate finish_certificate(const Grid& grid, Band band, const std::vector<double>& ratios) {
  ComparabilityCertificate c;
  c.grid = grid;
  c.band = band;
  size_t imin = 0, imax = 0;
  for (size_t i = 1; i < ratios.size(); ++i) {
    if (ratios[i] < ratios[imin]) imin = i;
    if (ratios[i] > ratios[imax]) imax = i;
  }
  c.ratio_min = ratios[imin];
  c.ratio_max = ratios[imax];
  c.argmin = grid.points[imin];
  c.argmax = grid.points[imax];
  c.pass = std::isfinite(c.ratio_min) && std::isfinite(c.ratio_max) && band.contains(c.ratio_min) &&
           band.contains(c.ratio_max);
  c.notes = "empirical: ratios within band on this grid";
  return c;
}

}  // namespace detail

/// Certificate for f/g over the grid; f and g take a complex point.
template <class F, class G>
ComparabilityCertificate certify_comparable(F&& f, G&& g, const Grid& grid, Band band) {
  grid.validate();
  band.validate();
  auto ratios = parallel_map<double>(grid.size(), [&](size_t i) {
    const cplx z = grid.points[i];
    const double den = g(z);
    if (den == 0 || !std::isfinite(den)) {
      std::ostringstream os;
      os << "denominator vanishes or is not finite at " << z;
      throw Error(ErrorKind::invalid_grid, os.str());
    }
    return static_cast<double>(f(z)) / den;
  });
  return detail::finish_certificate(grid, band, ratios);
}

/// Same as certify_comparable but from log-moduli: ratio = exp(log_f - log_g).
template <class F, class G>
ComparabilityCertificate certify_comparable_log(F&& log_f, G&& log_g, const Grid& grid, Band band) {
  grid.validate();
  band.validate();
  auto ratios = parallel_map<double>(grid.size(), [&](size_t i) {
    const cplx z = grid.points[i];
    const double lg = log_g(z);
    if (!std::isfinite(lg)) {
      std::ostringstream os;
      os << "log-denominator not finite at " << z;
      throw Error(ErrorKind::invalid_grid, os.str());
    }
    return std::exp(static_cast<double>(log_f(z)) - lg);
  });
  return detail::finish_certificate(grid, band, ratios);
}

/// Least-squares polynomial fit of degree `degree` (normal equations on a scaled
/// abscissa); returns coefficients c0 + c1 x + ... in the original variable.
inline std::vector<double> polyfit(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
  if (xs.size() != ys.size() || xs.empty()) throw Error(ErrorKind::invalid_input, "polyfit: bad sample sizes");
  degree = std::min<int>(degree, static_cast<int>(xs.size()) - 1);
  const int n = degree + 1;
  double scale = 0;
  for (double x : xs) scale = std::max(scale, std::abs(x));
  if (scale == 0) scale = 1;
  std::vector<double> ata(n * n, 0.0), aty(n, 0.0);
  for (size_t k = 0; k < xs.size(); ++k) {
    std::vector<double> pw(n);
    pw[0] = 1;
    for (int j = 1; j < n; ++j) pw[j] = pw[j - 1] * (xs[k] / scale);
    for (int i = 0; i < n; ++i) {
      aty[i] += pw[i] * ys[k];
      for (int j = 0; j < n; ++j) ata[i * n + j] += pw[i] * pw[j];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(ata[r * n + col]) > std::abs(ata[piv * n + col])) piv = r;
    if (ata[piv * n + col] == 0) throw Error(ErrorKind::invalid_input, "polyfit: singular system");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(ata[col * n + j], ata[piv * n + j]);
      std::swap(aty[col], aty[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double fct = ata[r * n + col] / ata[col * n + col];
      for (int j = col; j < n; ++j) ata[r * n + j] -= fct * ata[col * n + j];
      aty[r] -= fct * aty[col];
    }
  }
  std::vector<double> c(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = aty[i];
    for (int j = i + 1; j < n; ++j) s -= ata[i * n + j] * c[j];
    c[i] = s / ata[i * n + i];
  }
  double p = 1;
  for (int j = 0; j < n; ++j) {
    c[j] /= p;
    p *= scale;
  }
  return c;
}

/// Real-coefficient polynomial c0 + c1 z + ... (the entire function g of a representation).
struct RealPoly {
  std::vector<double> coeffs;

  double operator()(double x) const {
    double v = 0;
    for (size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
    return v;
  }
  cplx operator()(cplx z) const {
    cplx v = 0;
    for (size_t i = coeffs.size(); i-- > 0;) v = v * z + coeffs[i];
    return v;
  }
};

struct TypeEstimate {
  double value = 0;  // max over rays of the fitted slope
  double worst_angle = 0;
  std::vector<double> per_ray;
};

/// Least-squares slope of log|f(r e^{i theta})| against r over the radii ladder, maximized
/// over rays. Points where log|f| is -inf (zeros) are skipped; a ray with fewer than two
/// usable points reports -inf.
template <class LogAbsF>
TypeEstimate exponential_type_estimate(LogAbsF&& log_abs_f, const std::vector<double>& angles,
                                       const std::vector<double>& radii) {
  if (angles.empty() || radii.size() < 2) throw Error(ErrorKind::invalid_input, "type estimate needs rays and >= 2 radii");
  TypeEstimate out;
  out.value = -std::numeric_limits<double>::infinity();
  for (double th : angles) {
    std::vector<double> rs, ls;
    for (double r : radii) {
      const double l = log_abs_f(std::polar(r, th));
      if (std::isfinite(l)) {
        rs.push_back(r);
        ls.push_back(l);
      }
    }
    double slope = -std::numeric_limits<double>::infinity();
    if (rs.size() >= 2) slope = polyfit(rs, ls, 1)[1];
    out.per_ray.push_back(slope);
    if (slope > out.value) {
      out.value = slope;
      out.worst_angle = th;
    }
  }
  return out;
}

/// Rays used for type estimates: +-60, +-90, +-120 degrees (away from the real axis).
inline std::vector<double> default_rays() {
  const double d = std::numbers::pi / 180;
  return {60 * d, 90 * d, 120 * d, -60 * d, -90 * d, -120 * d};
}

}  // namespace pwlab
