#pragma once

// Hermite-Biehler models: finite canonical products with an exponential drift, and the
// derived phase, reproducing kernel and majorant.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "pwlab/numerics.hpp"

namespace pwlab {

/// E(z) = C exp(drift z) prod (1 - z/lambda) [exp(z Re(1/lambda)) if genus_factors].
struct HBModel {
  std::vector<cplx> zeros;
  cplx constant{1, 0};
  double drift = 0;
  bool genus_factors = false;
  double truncation_radius = std::numeric_limits<double>::infinity();

  void validate() const {
    if (constant == cplx(0, 0) || !std::isfinite(constant.real()) || !std::isfinite(constant.imag()))
      throw Error(ErrorKind::invalid_input, "model constant must be finite and nonzero");
    if (!std::isfinite(drift)) throw Error(ErrorKind::invalid_input, "model drift must be finite");
    for (cplx l : zeros)
      if (!(l.imag() < 0) || !std::isfinite(l.real())) {
        std::ostringstream os;
        os << "zero " << l << " is not in the open lower half-plane";
        throw Error(ErrorKind::invalid_input, os.str());
      }
  }

  static HBModel from_zeros(std::vector<cplx> zeros, bool genus = false) {
    HBModel m;
    m.zeros = std::move(zeros);
    m.genus_factors = genus;
    m.validate();
    return m;
  }
};

/// log E(z) on a continuous-by-factor branch; the real part is log|E(z)| (-inf at a zero).
inline cplx log_E(const HBModel& model, cplx z) {
  cplx acc = std::log(model.constant) + model.drift * z;
  for (cplx l : model.zeros) {
    const cplx w = z / l;
    if (w == cplx(1, 0)) return {-std::numeric_limits<double>::infinity(), 0};
    acc += std::log(1.0 - w);
    if (model.genus_factors) acc += z * (1.0 / l).real();
  }
  return acc;
}

inline double log_abs_E(const HBModel& model, cplx z) { return log_E(model, z).real(); }

/// E(z); throws overflow when |E(z)| is not representable (use log_E instead).
inline cplx eval_E(const HBModel& model, cplx z) {
  const cplx l = log_E(model, z);
  if (l.real() > 709.0) {
    std::ostringstream os;
    os << "|E(" << z << ")| = exp(" << l.real() << ") overflows; use log_E";
    throw Error(ErrorKind::overflow, os.str());
  }
  return std::exp(l);
}

/// E*(z) = conj(E(conj z)).
inline cplx eval_E_star(const HBModel& model, cplx z) { return std::conj(eval_E(model, std::conj(z))); }

/// E'(z)/E(z).
inline cplx dlog_E(const HBModel& model, cplx z) {
  cplx acc = model.drift;
  for (cplx l : model.zeros) {
    acc += 1.0 / (z - l);
    if (model.genus_factors) acc += (1.0 / l).real();
  }
  return acc;
}

/// phi'(x) = sum over zeros xi - i eta of eta / ((x - xi)^2 + eta^2).
inline double phase_derivative(const HBModel& model, double x) {
  double s = 0;
  for (cplx l : model.zeros) {
    const double d = x - l.real(), eta = -l.imag();
    s += eta / (d * d + eta * eta);
  }
  return s;
}

/// phi(x) = -arg C + int_0^x phi', summed zero by zero in closed form.
inline double phase(const HBModel& model, double x) {
  double s = -std::arg(model.constant);
  for (cplx l : model.zeros) {
    const double xi = l.real(), eta = -l.imag();
    s += std::atan((x - xi) / eta) - std::atan(-xi / eta);
  }
  return s;
}

/// phi(0) + adaptive quadrature of phi' over [0, x]; a cross-check of `phase`.
inline double phase_by_quadrature(const HBModel& model, double x, const QuadratureConfig& cfg = {}) {
  LinePoints pts;
  for (cplx l : model.zeros)
    if ((l.real() - 0) * (l.real() - x) < 0) pts.kinks.push_back(l.real());
  return -std::arg(model.constant) +
         integrate_interval([&](double t) { return phase_derivative(model, t); }, 0.0, x, cfg, pts).value;
}

/// k_zeta(z) = (E*(z) conj E*(zeta) - E(z) conj E(zeta)) / (2 pi i (z - conj zeta)); the
/// removable point z = conj zeta is handled by the derivative of the numerator.
inline cplx reproducing_kernel(const HBModel& model, cplx zeta, cplx z) {
  const double pi = std::numbers::pi;
  const cplx i(0, 1);
  const cplx gap = z - std::conj(zeta);
  if (std::abs(gap) < 1e-7 * (1 + std::abs(z))) {
    const cplx z0 = std::conj(zeta);
    const cplx e_zeta = eval_E(model, zeta), e_z0 = eval_E(model, z0);
    const cplx deriv = std::conj(e_zeta) * e_z0 * (std::conj(dlog_E(model, zeta)) - dlog_E(model, z0));
    return deriv / (2 * pi * i);
  }
  const cplx num = eval_E_star(model, z) * std::conj(eval_E_star(model, zeta)) -
                   eval_E(model, z) * std::conj(eval_E(model, zeta));
  return num / (2 * pi * i * gap);
}

/// M(x) = sqrt(phi'(x) / pi) |E(x)| on the real line.
inline double majorant(const HBModel& model, double x) {
  return std::sqrt(phase_derivative(model, x) / std::numbers::pi) * std::exp(log_abs_E(model, x));
}

inline double log_majorant(const HBModel& model, double x) {
  return 0.5 * std::log(phase_derivative(model, x) / std::numbers::pi) + log_abs_E(model, x);
}

/// log sqrt(k_z(z)) for Im z > 0, from (|E(z)|^2 - |E(conj z)|^2) / (4 pi y) in log form.
inline double log_kernel_norm(const HBModel& model, cplx z) {
  if (!(z.imag() > 0)) throw Error(ErrorKind::invalid_input, "kernel norm formula needs Im z > 0");
  const double le = log_abs_E(model, z), ls = log_abs_E(model, std::conj(z));
  const double d = std::exp(2 * (ls - le));
  if (!(d < 1)) throw Error(ErrorKind::invalid_input, "|E(z)| <= |E(conj z)|: not Hermite-Biehler at this point");
  return le + 0.5 * std::log1p(-d) - 0.5 * std::log(4 * std::numbers::pi * z.imag());
}

struct HBCheck {
  bool pass = false;
  double min_margin = 0;  // min over the grid of log|E(z)| - log|E(conj z)|
  cplx worst{};
};

inline HBCheck check_hb_property(const HBModel& model, const Grid& grid) {
  grid.validate();
  for (cplx z : grid.points)
    if (!(z.imag() > 0)) throw Error(ErrorKind::invalid_grid, "HB check needs grid points with Im z > 0");
  auto margins = parallel_map<double>(grid.size(), [&](size_t i) {
    const cplx z = grid.points[i];
    return log_abs_E(model, z) - log_abs_E(model, std::conj(z));
  });
  HBCheck out;
  size_t w = 0;
  for (size_t i = 1; i < margins.size(); ++i)
    if (margins[i] < margins[w] || std::isnan(margins[i])) w = i;
  out.min_margin = margins[w];
  out.worst = grid.points[w];
  out.pass = out.min_margin > 0;
  return out;
}

}  // namespace pwlab
