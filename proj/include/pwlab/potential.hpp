#pragma once

// log*-potential of a weight, its Poisson transform, the x-derivative transform used as
// the conjugate, and checks of the derivative and distributional Laplacian identities.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>

#include "pwlab/numerics.hpp"
#include "pwlab/weight.hpp"

namespace pwlab {

/// chi(t) = 0 on [-1, 1], 1 elsewhere.
inline double cutoff_chi(double t) { return std::abs(t) > 1.0 ? 1.0 : 0.0; }

/// log*|1 - z/t| = log|1 - z/t| + chi(t) x / t, evaluated without cancellation for large |t|.
inline double log_star(cplx z, double t) {
  if (t == 0) return 0;
  const double x = z.real(), y = z.imag();
  const cplx w = z / t;
  const double comp = cutoff_chi(t) * w.real();
  if (std::abs(w) < 0.1) {
    // log|1 - w| = -Re(w) - Re sum_{n>=2} w^n / n
    cplx term = w * w;
    cplx sum = 0;
    for (int n = 2; n < 60; ++n) {
      const cplx add = term / static_cast<double>(n);
      sum += add;
      if (std::abs(add) < 1e-18 * std::max(1e-300, std::abs(sum))) break;
      term *= w;
    }
    return -w.real() - sum.real() + comp;
  }
  const double dx = t - x;
  return 0.5 * std::log((dx * dx + y * y) / (t * t)) + comp;
}

namespace detail {

inline LinePoints potential_points(const Weight& m, cplx z) {
  LinePoints pts;
  pts.singular = {0.0, z.real()};
  pts.kinks = m.breakpoints();
  pts.kinks.push_back(-1.0);
  pts.kinks.push_back(1.0);
  return pts;
}

inline LinePoints peak_points(const Weight& m, cplx z) {
  LinePoints pts;
  const double x = z.real(), y = std::abs(z.imag());
  pts.kinks = m.breakpoints();
  pts.kinks.push_back(-1.0);
  pts.kinks.push_back(1.0);
  for (double k : {0.0, 1.0, 10.0, 100.0}) {
    pts.kinks.push_back(x - k * y);
    pts.kinks.push_back(x + k * y);
  }
  return pts;
}

}  // namespace detail

/// omega_m(z) = int log*|1 - z/t| m(t) dt.
inline double eval_omega(const Weight& m, cplx z, const QuadratureConfig& cfg = {}) {
  if (z == cplx(0, 0)) return 0;
  auto f = [&](double t) { return m(t) * log_star(z, t); };
  return integrate_line(f, cfg, detail::potential_points(m, z)).value;
}

/// P_m(z) = (1/pi) int y / ((x-t)^2 + y^2) m(t) dt, Im z != 0.
inline double eval_poisson(const Weight& m, cplx z, const QuadratureConfig& cfg = {}) {
  const double x = z.real(), y = z.imag();
  if (y == 0) throw Error(ErrorKind::invalid_input, "Poisson transform needs Im z != 0");
  auto f = [&](double t) {
    const double d = x - t;
    return m(t) * y / (d * d + y * y);
  };
  return integrate_line(f, cfg, detail::peak_points(m, z)).value / std::numbers::pi;
}

namespace detail {

inline double conjugate_kernel_integral(const Weight& m, cplx z, const QuadratureConfig& cfg) {
  const double x = z.real(), y = z.imag();
  auto f = [&](double t) {
    const double d = x - t;
    const double q = d * d + y * y;
    if (std::abs(t) > 1) return m(t) * (x * d + y * y) / (t * q);
    return m(t) * d / q;
  };
  return integrate_line(f, cfg, peak_points(m, z)).value;
}

}  // namespace detail

/// Conjugate transform int [(x-t)/((x-t)^2+y^2) + chi(t)/t] m(t) dt, normalized to vanish
/// at z = i. Requires Im z > 0.
inline double eval_conjugate_omega(const Weight& m, cplx z, const QuadratureConfig& cfg = {}) {
  if (!(z.imag() > 0)) throw Error(ErrorKind::invalid_input, "conjugate transform needs Im z > 0");
  return detail::conjugate_kernel_integral(m, z, cfg) - detail::conjugate_kernel_integral(m, cplx(0, 1), cfg);
}

/// Central difference of omega_m in y compared with pi P_m on a grid off the real axis.
inline ComparabilityCertificate verify_poisson_derivative(const Weight& m, const Grid& grid, double h, Band band,
                                                          const QuadratureConfig& cfg = {}) {
  if (!(h > 0)) throw Error(ErrorKind::invalid_input, "step h must be positive");
  grid.validate();
  for (cplx z : grid.points)
    if (!(std::abs(z.imag()) > 2 * h)) throw Error(ErrorKind::invalid_grid, "grid point within 2h of the real axis");
  const cplx ih(0, h);
  auto fd = [&](cplx z) { return (eval_omega(m, z + ih, cfg) - eval_omega(m, z - ih, cfg)) / (2 * h); };
  auto pp = [&](cplx z) { return std::numbers::pi * eval_poisson(m, z, cfg); };
  auto cert = certify_comparable(fd, pp, grid, band);
  cert.notes = "finite-difference d/dy omega_m over pi P_m; " + cert.notes;
  return cert;
}

/// Smooth compactly supported bump exp(-1/(1 - r^2/R^2)) centred at (cx, cy).
struct Bump {
  double cx = 0, cy = 0, radius = 1;

  double value(double x, double y) const {
    const double s = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (radius * radius);
    if (s >= 1) return 0;
    return std::exp(-1 / (1 - s));
  }

  double laplacian(double x, double y) const {
    const double s = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (radius * radius);
    if (s >= 1) return 0;
    const double u = 1 - s;
    const double q = -1 / u;
    const double dq = -1 / (u * u);
    const double d2q = -2 / (u * u * u);
    return 4 / (radius * radius) * std::exp(q) * (s * (d2q + dq * dq) + dq);
  }
};

struct LaplacianCheck {
  double lhs = 0;
  double rhs = 0;
  double rel_err = 0;
  std::string notes;
};

struct Box {
  double x_lo, x_hi, y_lo, y_hi;
};

/// Compares int omega_m Lap(psi) dA with 2 pi int psi(x, 0) m(x) dx over `box` (the
/// support of psi). `panels` x `nodes` Gauss-Legendre per axis and per half-plane.
inline LaplacianCheck verify_laplacian(const Weight& m, const std::function<double(double, double)>& psi,
                                       const std::function<double(double, double)>& lap_psi, Box box,
                                       const QuadratureConfig& cfg = {}, int panels = 8, int nodes = 8) {
  if (!(box.x_lo < box.x_hi) || !(box.y_lo < box.y_hi)) throw Error(ErrorKind::invalid_input, "degenerate box");
  LaplacianCheck out;
  const GaussLegendre gl(nodes);
  auto axis = [&](double a, double b) {
    std::vector<std::pair<double, double>> q;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
      for (int i = 0; i < nodes; ++i)
        q.emplace_back(a + w * (p + 0.5 * (gl.nodes[i] + 1)), 0.5 * w * gl.weights[i]);
    return q;
  };
  std::vector<std::pair<double, double>> ys;
  if (box.y_lo < 0 && box.y_hi > 0) {
    ys = axis(box.y_lo, 0.0);
    auto upper = axis(0.0, box.y_hi);
    ys.insert(ys.end(), upper.begin(), upper.end());
  } else {
    ys = axis(box.y_lo, box.y_hi);
  }
  const auto xs = axis(box.x_lo, box.x_hi);
  auto rows = parallel_map<double>(ys.size(), [&](size_t j) {
    double row = 0;
    for (const auto& [x, wx] : xs) {
      const double l = lap_psi(x, ys[j].first);
      if (l != 0) row += wx * l * eval_omega(m, cplx(x, ys[j].first), cfg);
    }
    return row * ys[j].second;
  });
  for (double r : rows) out.lhs += r;
  if (box.y_lo <= 0 && box.y_hi >= 0) {
    LinePoints pts;
    pts.kinks = m.breakpoints();
    out.rhs = 2 * std::numbers::pi *
              integrate_interval([&](double x) { return psi(x, 0.0) * m(x); }, box.x_lo, box.x_hi, cfg, pts).value;
  }
  const double scale = std::max(std::abs(out.rhs), 1e-12);
  out.rel_err = std::abs(out.lhs - out.rhs) / scale;
  if (box.x_lo < m.window_lo || box.x_hi > m.window_hi)
    out.notes = "support box extends beyond the weight window; outside value used there";
  return out;
}

}  // namespace pwlab
