#pragma once

// Reference models used by the tests and the CLI.

#include <algorithm>
#include <cmath>
#include <string>

#include "pwlab/hb_model.hpp"
#include "pwlab/multiplier.hpp"

namespace pwlab::fixtures {

/// Zeros k - i min(1, (1 + |k|)^{-1/2}) for |k| <= n, with genus-one factors.
inline HBModel stair(int n = 200) {
  HBModel m;
  for (int k = -n; k <= n; ++k) m.zeros.emplace_back(k, -std::min(1.0, 1.0 / std::sqrt(1.0 + std::abs(k))));
  m.genus_factors = true;
  m.truncation_radius = n;
  return m;
}

/// Zeros k - i e^{-|k|} for |k| <= n: summits grow too fast for the growth axiom.
inline HBModel bad_stair(int n = 40) {
  HBModel m;
  for (int k = -n; k <= n; ++k) m.zeros.emplace_back(k, -std::exp(-static_cast<double>(std::abs(k))));
  m.genus_factors = true;
  m.truncation_radius = n;
  return m;
}

inline HBModel single_zero() { return HBModel::from_zeros({{0, -1}}); }

/// Multiplier of the constant weight 1 truncated at R.
inline HBModel unit_multiplier(double R = 1000) { return build_multiplier(Weight::constant(1), R); }

/// Builds a named fixture: "stair", "bad", "single", "unit".
inline HBModel by_name(const std::string& name) {
  if (name == "stair") return stair();
  if (name == "bad") return bad_stair();
  if (name == "single") return single_zero();
  if (name == "unit") return unit_multiplier();
  throw Error(ErrorKind::invalid_input, "unknown fixture '" + name + "' (stair, bad, single, unit)");
}

}  // namespace pwlab::fixtures
