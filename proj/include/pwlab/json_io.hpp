#pragma once

// JSON serialization of weights, models, chains, representations, certificates and
// reports, plus file reading and atomic writes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "pwlab/hb_model.hpp"
#include "pwlab/interpolation.hpp"
#include "pwlab/mountain.hpp"
#include "pwlab/numerics.hpp"
#include "pwlab/smoothing.hpp"
#include "pwlab/weight.hpp"

namespace pwlab::io {

using json = nlohmann::ordered_json;

/// Finite doubles as numbers; inf, -inf and nan as strings.
inline json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double to_double(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorKind::invalid_input, what + ": expected a number");
}

inline json complex_json(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

inline cplx complex_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::invalid_input, what + ": expected [re, im]");
  return {to_double(j[0], what), to_double(j[1], what)};
}

inline const json& require(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::invalid_input, what + ": missing field '" + key + "'");
  return j.at(key);
}

// ---------------------------------------------------------------------------
// Weight

inline json to_json(const Weight& w) {
  json j;
  j["window"] = json::array({w.window_lo, w.window_hi});
  json pieces = json::array();
  for (const auto& p : w.pieces) pieces.push_back(json{{"from", p.from}, {"to", p.to}, {"value", p.value}});
  j["pieces"] = pieces;
  if (w.outside_value != 1.0) j["outside_value"] = w.outside_value;
  return j;
}

inline Weight weight_from_json(const json& j) {
  const std::string what = "weight";
  Weight w;
  const auto& win = require(j, "window", what);
  if (!win.is_array() || win.size() != 2) throw Error(ErrorKind::invalid_input, "weight: window must be [lo, hi]");
  w.window_lo = to_double(win[0], what);
  w.window_hi = to_double(win[1], what);
  const auto& pieces = require(j, "pieces", what);
  if (!pieces.is_array()) throw Error(ErrorKind::invalid_input, "weight: pieces must be an array");
  for (const auto& p : pieces)
    w.pieces.push_back({to_double(require(p, "from", what), what), to_double(require(p, "to", what), what),
                        to_double(require(p, "value", what), what)});
  if (j.contains("outside_value")) w.outside_value = to_double(j["outside_value"], what);
  w.validate();
  return w;
}

// ---------------------------------------------------------------------------
// HBModel

inline json to_json(const HBModel& m) {
  json j;
  j["constant_re"] = m.constant.real();
  j["constant_im"] = m.constant.imag();
  j["drift"] = m.drift;
  j["genus_factors"] = m.genus_factors;
  json zs = json::array();
  for (cplx z : m.zeros) zs.push_back(json::array({z.real(), z.imag()}));
  j["zeros"] = zs;
  if (std::isfinite(m.truncation_radius)) j["truncation_radius"] = m.truncation_radius;
  return j;
}

inline HBModel model_from_json(const json& j) {
  const std::string what = "model";
  if (!j.is_object()) throw Error(ErrorKind::invalid_input, "model: expected an object");
  HBModel m;
  m.constant = {j.contains("constant_re") ? to_double(j["constant_re"], what) : 1.0,
                j.contains("constant_im") ? to_double(j["constant_im"], what) : 0.0};
  if (j.contains("drift")) m.drift = to_double(j["drift"], what);
  if (j.contains("genus_factors")) {
    if (!j["genus_factors"].is_boolean()) throw Error(ErrorKind::invalid_input, "model: genus_factors must be boolean");
    m.genus_factors = j["genus_factors"].get<bool>();
  }
  const auto& zs = require(j, "zeros", what);
  if (!zs.is_array()) throw Error(ErrorKind::invalid_input, "model: zeros must be an array");
  for (const auto& z : zs) m.zeros.push_back(complex_from(z, "model zero"));
  if (j.contains("truncation_radius")) m.truncation_radius = to_double(j["truncation_radius"], what);
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Chains, certificates, reports

inline json to_json(const MountainChain& c) {
  json j;
  j["delta"] = c.delta;
  json ms = json::array();
  for (const auto& m : c.mountains) {
    json e;
    e["base"] = json::array({m.a, m.b});
    e["summit_x"] = m.summit_x;
    e["summit_height"] = m.summit_height;
    e["zero"] = complex_json(m.zero);
    if (m.clipped) e["clipped"] = true;
    ms.push_back(e);
  }
  j["mountains"] = ms;
  json ps = json::array();
  for (const auto& p : c.plateaux) ps.push_back(json::array({p.first, p.second}));
  j["plateaux"] = ps;
  j["window"] = json::array({c.window_lo, c.window_hi});
  return j;
}

inline json to_json(const ComparabilityCertificate& c) {
  json j;
  j["grid"] = c.grid.description;
  j["grid_size"] = c.grid.size();
  j["ratio_min"] = num(c.ratio_min);
  j["ratio_max"] = num(c.ratio_max);
  j["band"] = json::array({num(c.band.lo), num(c.band.hi)});
  j["pass"] = c.pass;
  j["argmin"] = complex_json(c.argmin);
  j["argmax"] = complex_json(c.argmax);
  j["notes"] = c.notes;
  return j;
}

inline json to_json(const AxiomReport& r) {
  json j;
  j["axiom1"] = {{"pass", r.axiom1.pass}, {"certificate", to_json(r.axiom1.certificate)}};
  j["axiom2"] = {{"pass", r.axiom2.pass}, {"duplicates", r.axiom2.duplicates}, {"witness", complex_json(r.axiom2.witness)}};
  j["axiom3"] = {{"pass", r.axiom3.pass},
                 {"max_ratio", num(r.axiom3.max_ratio)},
                 {"constant", num(r.axiom3.constant)},
                 {"witness", json::array({complex_json(r.axiom3.witness_k), complex_json(r.axiom3.witness_l)})}};
  j["separation"] = {{"pass", r.separation.pass},
                     {"min_distance", num(r.separation.min_distance)},
                     {"witness", json::array({complex_json(r.separation.witness_a), complex_json(r.separation.witness_b)})}};
  j["shape"] = {{"pass", r.shape.pass},
                {"min_base", num(r.shape.min_base)},
                {"max_base", num(r.shape.max_base)},
                {"min_margin", num(r.shape.min_margin)},
                {"witness", complex_json(r.shape.witness)}};
  j["chain"] = to_json(r.chain);
  j["overall"] = r.overall;
  return j;
}

inline json to_json(const MajorantRepresentation& r) {
  json j;
  j["g_coeffs"] = r.g.coeffs;
  j["a"] = r.a;
  j["c"] = r.c;
  j["m"] = to_json(r.m);
  j["branch"] = r.branch;
  j["L"] = r.L;
  j["h_coeffs"] = r.h.coeffs;
  j["window"] = json::array({r.window_lo, r.window_hi});
  j["hilbert_sup"] = num(r.hilbert_sup);
  j["hilbert_bound"] = num(r.hilbert_bound);
  return j;
}

inline MajorantRepresentation representation_from_json(const json& j) {
  const std::string what = "representation";
  MajorantRepresentation r;
  const auto& g = require(j, "g_coeffs", what);
  if (!g.is_array()) throw Error(ErrorKind::invalid_input, "representation: g_coeffs must be an array");
  for (const auto& c : g) r.g.coeffs.push_back(to_double(c, what));
  r.a = to_double(require(j, "a", what), what);
  r.c = to_double(require(j, "c", what), what);
  r.m = weight_from_json(require(j, "m", what));
  r.branch = require(j, "branch", what).get<std::string>();
  if (r.branch != "easy" && r.branch != "general")
    throw Error(ErrorKind::invalid_input, "representation: branch must be easy or general");
  r.L = require(j, "L", what).get<int>();
  if (j.contains("h_coeffs"))
    for (const auto& c : j["h_coeffs"]) r.h.coeffs.push_back(to_double(c, what));
  if (j.contains("window")) {
    r.window_lo = to_double(j["window"][0], what);
    r.window_hi = to_double(j["window"][1], what);
  }
  if (j.contains("hilbert_sup")) r.hilbert_sup = to_double(j["hilbert_sup"], what);
  if (j.contains("hilbert_bound")) r.hilbert_bound = to_double(j["hilbert_bound"], what);
  return r;
}

inline json to_json(const RepresentationResult& res) {
  json j;
  j["representation"] = to_json(res.rep);
  j["certificate"] = to_json(res.certificate);
  json b = json::array();
  for (const auto& e : res.battery)
    b.push_back({{"function", e.name},
                 {"de_branges_norm2", num(e.de_branges_norm2)},
                 {"weighted_norm2", num(e.weighted_norm2)},
                 {"ratio", num(e.ratio)}});
  j["battery"] = b;
  if (!res.battery.empty()) j["battery_band"] = json::array({num(res.battery_min), num(res.battery_max)});
  return j;
}

inline json to_json(const LevelSet& ls) {
  return {{"alpha", ls.alpha}, {"window", json::array({ls.window_lo, ls.window_hi})}, {"points", ls.points}};
}

inline json to_json(const PavlovReport& r) {
  json j;
  j["alpha"] = r.alpha;
  j["tau"] = r.tau;
  j["separation"] = {{"value", num(r.separation.value)}, {"pass", r.separation.pass}, {"detail", r.separation.detail}};
  j["carleson"] = {{"sup_estimate", num(r.carleson.value)}, {"pass", r.carleson.pass}, {"detail", r.carleson.detail}};
  j["type_estimate"] = {{"value", num(r.type_estimate.value)},
                        {"pass", r.type_estimate.pass},
                        {"log_plus_integral", num(r.log_plus_integral)},
                        {"detail", r.type_estimate.detail}};
  j["a2"] = {{"sup_product", num(r.a2.sup_product)},
             {"pass", r.a2.pass},
             {"divergent", r.a2.divergent},
             {"witness", json::array({r.a2.witness_a, r.a2.witness_b})},
             {"intervals", r.a2.intervals},
             {"notes", r.a2.notes}};
  j["overall"] = r.overall;
  j["verdict"] = r.verdict;
  j["level_set"] = to_json(r.level_set);
  return j;
}

// ---------------------------------------------------------------------------
// Files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_input, "'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Writes through a temporary file in the same directory, then renames over `path`.
inline void write_atomic(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::io_error, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::io_error, "cannot rename onto '" + path + "'");
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace pwlab::io
