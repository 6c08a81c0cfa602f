#pragma once

// Unit-mass partition of a weight, centroid zeros, the multiplier E_m and its checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pwlab/hb_model.hpp"
#include "pwlab/numerics.hpp"
#include "pwlab/potential.hpp"
#include "pwlab/weight.hpp"

namespace pwlab {

/// Points x_k, k = k_min..k_max, with x_0 = 0 and unit m-mass between neighbours.
struct Partition {
  std::vector<double> x;
  int k_min = 0;
  int k_max = 0;

  double at(int k) const { return x.at(static_cast<size_t>(k - k_min)); }
};

/// xi[i] is the centroid of cell [x_k, x_{k+1}] with k = k_min + i.
struct CentroidSequence {
  std::vector<double> xi;
  int k_min = 0;

  double at(int k) const { return xi.at(static_cast<size_t>(k - k_min)); }
};

namespace detail {

/// Point b > a (or b < a when backward) with |int_a^b m| = 1, found exactly by walking the
/// constant stretches of m and solving the final linear piece.
inline double unit_mass_step(const Weight& m, double a, bool forward) {
  const double reach = 1.0 / m.m_lo() * (1 + 1e-9) + 1e-9;
  double remaining = 1.0;
  double result = std::numeric_limits<double>::quiet_NaN();
  auto visit = [&](double lo, double hi, double v) {
    if (!std::isnan(result)) return;
    const double cap = v * (hi - lo);
    if (cap >= remaining) {
      result = forward ? lo + remaining / v : hi - remaining / v;
      return;
    }
    remaining -= cap;
  };
  if (forward) {
    m.for_each_segment(a, a + reach, visit);
  } else {
    std::vector<std::array<double, 3>> segs;
    m.for_each_segment(a - reach, a, [&](double lo, double hi, double v) { segs.push_back({lo, hi, v}); });
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) visit((*it)[0], (*it)[1], (*it)[2]);
  }
  if (std::isnan(result)) throw Error(ErrorKind::invalid_input, "unit mass not reached; weight bounds inconsistent");
  return result;
}

}  // namespace detail

/// Partition with `count` cells on each side of 0.
inline Partition build_partition(const Weight& m, int count) {
  if (count < 1) throw Error(ErrorKind::invalid_input, "partition count must be >= 1");
  m.validate();
  Partition p;
  p.k_min = -count;
  p.k_max = count;
  p.x.assign(2 * static_cast<size_t>(count) + 1, 0.0);
  for (int k = 1; k <= count; ++k) p.x[count + k] = detail::unit_mass_step(m, p.x[count + k - 1], true);
  for (int k = 1; k <= count; ++k) p.x[count - k] = detail::unit_mass_step(m, p.x[count - k + 1], false);
  return p;
}

inline CentroidSequence build_centroids(const Weight& m, const Partition& p) {
  CentroidSequence c;
  c.k_min = p.k_min;
  for (size_t i = 0; i + 1 < p.x.size(); ++i) c.xi.push_back(m.first_moment(p.x[i], p.x[i + 1]));
  return c;
}

/// E_m truncated to centroids with |xi_k| < R, drift int_{-R}^{R} chi m / t, E_m(0) = 1.
inline HBModel build_multiplier(const Weight& m, double R) {
  if (!(R > 0)) throw Error(ErrorKind::invalid_input, "truncation radius must be positive");
  m.validate();
  const int count = static_cast<int>(std::ceil(R * m.m_hi())) + 2;
  const auto part = build_partition(m, count);
  const auto cent = build_centroids(m, part);
  HBModel model;
  for (double xi : cent.xi)
    if (std::abs(xi) < R) model.zeros.emplace_back(xi, -1.0);
  model.drift = m.compensator(R);
  model.genus_factors = false;
  model.constant = 1.0;
  model.truncation_radius = R;
  return model;
}

/// |E_1(z)| / |E_1(0)| = |cos(pi (z + i))| / cosh(pi), in log form.
inline double log_abs_cosine_multiplier(cplx z) {
  const double pi = std::numbers::pi;
  const cplx w = pi * (z + cplx(0, 1));
  // |cos(a + ib)|^2 = cos^2 a + sinh^2 b
  const double a = w.real(), b = w.imag();
  const double c = std::cos(a), sh = std::sinh(b);
  return 0.5 * std::log(c * c + sh * sh) - std::log(std::cosh(pi));
}

struct MultiplierCheck {
  ComparabilityCertificate certificate;
  double symmetry_max_dev = 0;  // max | log|E(conj z)| - log|E(z - 2i)| |
};

/// |E_m(z)| against e^{omega_m(z)} on the grid, plus the conj z / z - 2i symmetry.
inline MultiplierCheck verify_multiplier_lemma(const HBModel& model, const Weight& m, const Grid& grid, Band band,
                                               const QuadratureConfig& cfg = {}) {
  grid.validate();
  for (cplx z : grid.points) {
    if (std::abs(z.real()) > model.truncation_radius / 2)
      throw Error(ErrorKind::invalid_grid, "grid leaves the reliable range |Re z| <= R/2");
    if (z.imag() < -0.5) throw Error(ErrorKind::invalid_grid, "grid needs Im z >= -0.5");
  }
  MultiplierCheck out;
  out.certificate = certify_comparable_log([&](cplx z) { return log_abs_E(model, z); },
                                           [&](cplx z) { return eval_omega(m, z, cfg); }, grid, band);
  out.certificate.notes = "|E_m| over exp(omega_m); " + out.certificate.notes;
  auto devs = parallel_map<double>(grid.size(), [&](size_t i) {
    const cplx z = grid.points[i];
    return std::abs(log_abs_E(model, std::conj(z)) - log_abs_E(model, z - cplx(0, 2)));
  });
  for (double d : devs) out.symmetry_max_dev = std::max(out.symmetry_max_dev, d);
  return out;
}

/// sqrt(k_z(z)) against e^{omega_m(z)} / sqrt(Im z) for Im z >= 2.
inline ComparabilityCertificate halfplane_majorant_check(const HBModel& model, const Weight& m, const Grid& grid,
                                                         Band band, const QuadratureConfig& cfg = {}) {
  grid.validate();
  for (cplx z : grid.points)
    if (z.imag() < 2) throw Error(ErrorKind::invalid_grid, "half-plane majorant check needs Im z >= 2");
  auto cert = certify_comparable_log([&](cplx z) { return log_kernel_norm(model, z); },
                                     [&](cplx z) { return eval_omega(m, z, cfg) - 0.5 * std::log(z.imag()); },
                                     grid, band);
  cert.notes = "kernel-diagonal majorant over exp(omega_m)/sqrt(y); " + cert.notes;
  return cert;
}

struct MembershipReport {
  double norm = 0;
  TypeEstimate type;
  bool consistent = false;
  std::string verdict;
  std::string notes;
};

/// Evidence for f in e^g PW(m): the weighted L2 norm on the grid's span of the real line
/// (4-point Gauss-Legendre per grid cell) and the ray type of log|f| - Re g - omega_m.
/// `log_abs_f` returns log|f(z)| (-inf where f vanishes).
inline MembershipReport pw_membership_diagnostic(const std::function<double(cplx)>& log_abs_f, const Weight& m,
                                                 const RealPoly& g, const Grid& grid,
                                                 const QuadratureConfig& cfg = {}, double type_tolerance = 0.1,
                                                 std::vector<double> radii = {8, 12, 16, 24, 32}) {
  grid.validate();
  if (!grid.is_real() || grid.size() < 2) throw Error(ErrorKind::invalid_grid, "membership norm needs a real grid");
  const GaussLegendre gl(4);
  auto cells = parallel_map<double>(grid.size() - 1, [&](size_t i) {
    const double a = grid.points[i].real(), b = grid.points[i + 1].real();
    double s = 0;
    for (int j = 0; j < 4; ++j) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[j];
      const double l = log_abs_f(x);
      if (!std::isfinite(l)) continue;
      s += gl.weights[j] * std::exp(2 * (l - g(x) - eval_omega(m, x, cfg)));
    }
    return 0.5 * (b - a) * s;
  });
  double sq = 0;
  for (double c : cells) sq += c;
  MembershipReport out;
  out.norm = std::sqrt(sq);
  if (!std::isfinite(out.norm)) throw Error(ErrorKind::quadrature_failure, "membership norm is not finite");
  out.type = exponential_type_estimate(
      [&](cplx z) { return log_abs_f(z) - g(z).real() - eval_omega(m, z, cfg); }, default_rays(), radii);
  out.consistent = !(out.type.value > type_tolerance);
  out.verdict = out.consistent ? "consistent with membership" : "type too large";
  out.notes = "norm over [" + std::to_string(grid.points.front().real()) + ", " +
              std::to_string(grid.points.back().real()) + "]; type from ray regression (grid proxy for mean type)";
  return out;
}

}  // namespace pwlab
