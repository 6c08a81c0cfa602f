#pragma once

// Command-line front end: fixture I/O, pipeline commands and report bundling.
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 input or usage error,
// 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pwlab/fixtures.hpp"
#include "pwlab/interpolation.hpp"
#include "pwlab/json_io.hpp"
#include "pwlab/mountain.hpp"
#include "pwlab/multiplier.hpp"
#include "pwlab/potential.hpp"
#include "pwlab/smoothing.hpp"

namespace pwlab::cli {

enum ExitCode : int { ok = 0, verdict_failed = 1, usage_error = 2, numerical_failure = 3 };

struct GridSpec {
  double lo = 0, hi = 0, step = 0, imag = 0;
  bool has_step = false;
};

/// "lo:hi[:step][,imag]".
inline GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  std::string body = s;
  const auto comma = s.find(',');
  try {
    if (comma != std::string::npos) {
      g.imag = std::stod(s.substr(comma + 1));
      body = s.substr(0, comma);
    }
    std::vector<std::string> parts;
    std::stringstream ss(body);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("parts");
    g.lo = std::stod(parts[0]);
    g.hi = std::stod(parts[1]);
    if (parts.size() == 3) {
      g.step = std::stod(parts[2]);
      g.has_step = true;
    }
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_grid, "grid spec '" + s + "' must look like lo:hi:step[,imag]");
  }
  if (!(g.lo < g.hi) || (g.has_step && !(g.step > 0)))
    throw Error(ErrorKind::invalid_grid, "grid spec '" + s + "' needs lo < hi and step > 0");
  return g;
}

/// "lo:hi".
inline Band parse_band(const std::string& s) {
  const auto colon = s.find(':');
  Band b;
  try {
    if (colon == std::string::npos) throw std::invalid_argument("colon");
    b.lo = std::stod(s.substr(0, colon));
    b.hi = std::stod(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_input, "band spec '" + s + "' must look like lo:hi");
  }
  if (!(b.lo > 0) || !(b.lo <= b.hi)) throw Error(ErrorKind::invalid_input, "band needs 0 < lo <= hi");
  return b;
}

/// "x,y" or "x".
inline cplx parse_point(const std::string& s) {
  try {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_input, "point '" + s + "' must look like x,y");
  }
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  try {
    for (std::string p; std::getline(ss, p, ',');) out.push_back(std::stod(p));
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_input, "list '" + s + "' must be comma-separated numbers");
  }
  return out;
}

inline std::string sidecar_path(const std::string& out) {
  const std::string ext = ".json";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
    return out.substr(0, out.size() - ext.size()) + ".cert.json";
  return out + ".cert.json";
}

struct Options {
  std::string weight, model, rep, out, dir, name, z, alpha, branch = "auto";
  std::string grid, band;
  double delta = 0.5, epsilon = 0.3, radius = 1000;
  double tau = std::numeric_limits<double>::quiet_NaN();
  int L = 4, L_max = 64, spot = 0;
  long long seed = 0;
  double quad_abs = std::numeric_limits<double>::quiet_NaN();
  double quad_rel = std::numeric_limits<double>::quiet_NaN();
  int quad_max = 0;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int potential(const Options& o) {
    const Weight m = io::weight_from_json(io::read_json_file(need(o.weight, "--weight")));
    const auto cfg = quad(o, {});
    if (!o.z.empty()) {
      const cplx z = parse_point(o.z);
      out_ << std::setprecision(15) << eval_omega(m, z, cfg) << "\n";
      return ok;
    }
    Grid grid = Grid::line(0, 0, 1);
    const GridSpec g = parse_grid(o.grid.empty() ? "-10:10:0.5" : o.grid);
    grid = Grid::line(g.lo, g.hi, g.has_step ? g.step : 0.5, g.imag);
    add_spots(grid, g, o);
    auto rows = parallel_map<std::string>(grid.size(), [&](size_t i) {
      const cplx z = grid.points[i];
      char buf[160];
      if (z.imag() != 0)
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", z.real(), z.imag(), eval_omega(m, z, cfg),
                      eval_poisson(m, z, cfg));
      else
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,\n", z.real(), z.imag(), eval_omega(m, z, cfg));
      return std::string(buf);
    });
    std::string csv = "re,im,omega,poisson\n";
    for (const auto& r : rows) csv += r;
    emit(o.out, csv);
    return ok;
  }

  int multiplier(const Options& o) {
    const Weight m = io::weight_from_json(io::read_json_file(need(o.weight, "--weight")));
    const auto cfg = quad(o, {});
    const HBModel E = build_multiplier(m, o.radius);
    const GridSpec g = parse_grid(o.grid.empty() ? "-10:10:0.5" : o.grid);
    Grid grid = Grid::line(g.lo, g.hi, g.has_step ? g.step : 0.5, g.imag);
    add_spots(grid, g, o);
    const Band band = parse_band(o.band.empty() ? "0.1:10" : o.band);
    const auto check = verify_multiplier_lemma(E, m, grid, band, cfg);
    io::json config = base_config("multiplier", o);
    config["radius"] = o.radius;
    config["grid"] = grid.description;
    config["band"] = io::json::array({band.lo, band.hi});
    io::json cert;
    cert["config"] = config;
    cert["certificate"] = io::to_json(check.certificate);
    cert["symmetry_max_dev"] = io::num(check.symmetry_max_dev);
    cert["zero_count"] = E.zeros.size();
    if (o.out.empty()) {
      io::json all;
      all["model"] = io::to_json(E);
      all["check"] = cert;
      out_ << io::dump(all);
    } else {
      io::write_atomic(o.out, io::dump(io::to_json(E)));
      io::write_atomic(sidecar_path(o.out), io::dump(cert));
    }
    return check.certificate.pass ? ok : verdict_failed;
  }

  int axioms(const Options& o) {
    const HBModel E = load_model(o);
    const StripParams sp = strip(o);
    const GridSpec g = parse_grid(o.grid.empty() ? "-40:40:0.05" : o.grid);
    AxiomConfig ac;
    if (g.has_step) ac.grid_step = g.step;
    if (!o.band.empty()) ac.axiom1_band = parse_band(o.band);
    const auto rep = check_axioms(E, sp, g.lo, g.hi, ac);
    io::json j;
    io::json config = base_config("axioms", o);
    config["delta"] = sp.delta;
    config["epsilon"] = sp.epsilon_growth;
    config["window"] = io::json::array({g.lo, g.hi});
    config["grid_step"] = ac.grid_step;
    config["band"] = io::json::array({ac.axiom1_band.lo, ac.axiom1_band.hi});
    j["config"] = config;
    j["report"] = io::to_json(rep);
    j["overall"] = rep.overall;
    emit(o.out, io::dump(j));
    return rep.overall ? ok : verdict_failed;
  }

  int smooth(const Options& o) {
    const HBModel E = load_model(o);
    const StripParams sp = strip(o);
    const GridSpec g = parse_grid(o.grid.empty() ? "-40:40:0.25" : o.grid);
    RepresentationConfig rc;
    rc.window_lo = g.lo;
    rc.window_hi = g.hi;
    if (g.has_step) rc.cert_step = g.step;
    if (!o.band.empty()) rc.band = parse_band(o.band);
    rc.branch = o.branch;
    rc.quad = quad(o, rc.quad);
    if (o.L < 1 || o.L_max < o.L) throw Error(ErrorKind::invalid_input, "need 1 <= --L <= --L-max");
    const auto res = build_majorant_representation_auto(E, sp, o.L, o.L_max, rc);
    io::json config = base_config("smooth", o);
    config["delta"] = sp.delta;
    config["epsilon"] = sp.epsilon_growth;
    config["L_requested"] = o.L;
    config["L"] = res.rep.L;
    config["window"] = io::json::array({g.lo, g.hi});
    config["cert_step"] = rc.cert_step;
    config["band"] = io::json::array({rc.band.lo, rc.band.hi});
    io::json full = io::to_json(res);
    io::json cert;
    cert["config"] = config;
    cert["certificate"] = full["certificate"];
    cert["battery"] = full["battery"];
    if (full.contains("battery_band")) cert["battery_band"] = full["battery_band"];
    cert["pass"] = res.certificate.pass;
    if (o.out.empty()) {
      io::json all;
      all["representation"] = full["representation"];
      all["check"] = cert;
      out_ << io::dump(all);
    } else {
      io::write_atomic(o.out, io::dump(full["representation"]));
      io::write_atomic(sidecar_path(o.out), io::dump(cert));
    }
    return res.certificate.pass ? ok : verdict_failed;
  }

  int pavlov(const Options& o) {
    const HBModel E = load_model(o);
    const StripParams sp = strip(o);
    const GridSpec g = parse_grid(o.grid.empty() ? "-20:20" : o.grid);
    MajorantRepresentation rep;
    if (!o.rep.empty()) {
      rep = io::representation_from_json(io::read_json_file(o.rep));
    } else {
      RepresentationConfig rc;
      rc.window_lo = g.lo;
      rc.window_hi = g.hi;
      rc.battery = false;
      rc.branch = o.branch;
      rc.quad = quad(o, rc.quad);
      rep = build_majorant_representation_auto(E, sp, o.L, o.L_max, rc).rep;
    }
    std::vector<double> alphas;
    if (o.alpha.empty()) {
      const auto p = default_alpha_pair(E);
      alphas = {p.first, p.second};
    } else {
      alphas = parse_list(o.alpha);
    }
    const double tau = std::isnan(o.tau) ? rep.m.m_hi() + 1 : o.tau;
    PavlovConfig pc;
    pc.window_lo = g.lo;
    pc.window_hi = g.hi;
    pc.quad = quad(o, pc.quad);
    io::json config = base_config("pavlov", o);
    config["alpha"] = alphas;
    config["tau"] = tau;
    config["window"] = io::json::array({g.lo, g.hi});
    config["representation_branch"] = rep.branch;
    config["L"] = rep.L;
    io::json reports = io::json::array();
    bool all = true;
    for (double a : alphas) {
      const auto r = pavlov_diagnostics(E, a, rep, tau, pc);
      all = all && r.overall;
      reports.push_back(io::to_json(r));
    }
    io::json j;
    j["config"] = config;
    j["reports"] = reports;
    j["overall"] = all;
    emit(o.out, io::dump(j));
    return all ? ok : verdict_failed;
  }

  int report(const Options& o) {
    namespace fs = std::filesystem;
    const fs::path dir(need(o.dir, "--dir"));
    if (!fs::is_directory(dir)) throw Error(ErrorKind::io_error, "'" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    io::json artifacts = io::json::object(), summary = io::json::object();
    bool all = true;
    for (const auto& f : files) {
      if (!o.out.empty() && fs::weakly_canonical(f) == fs::weakly_canonical(fs::path(o.out))) continue;
      const io::json j = io::read_json_file(f.string());
      const std::string key = f.filename().string();
      artifacts[key] = j;
      io::json verdict = nullptr;
      if (j.is_object()) {
        if (j.contains("overall") && j["overall"].is_boolean())
          verdict = j["overall"];
        else if (j.contains("pass") && j["pass"].is_boolean())
          verdict = j["pass"];
        else if (j.contains("certificate") && j["certificate"].is_object() && j["certificate"].contains("pass"))
          verdict = j["certificate"]["pass"];
      }
      if (verdict.is_boolean() && !verdict.get<bool>()) all = false;
      summary[key] = verdict;
    }
    io::json j;
    j["config"] = base_config("report", o);
    j["summary"] = summary;
    j["overall"] = all;
    j["artifacts"] = artifacts;
    emit(o.out, io::dump(j));
    return all ? ok : verdict_failed;
  }

  int fixture(const Options& o) {
    const std::string name = need(o.name, "--name");
    io::json j;
    if (name == "const1")
      j = io::to_json(Weight::constant(1));
    else if (name == "const2")
      j = io::to_json(Weight::constant(2));
    else if (name == "step")
      j = io::to_json(Weight::step(0, 1, 2));
    else if (name == "unit")
      j = io::to_json(fixtures::unit_multiplier(o.radius));
    else
      j = io::to_json(fixtures::by_name(name));
    emit(o.out, io::dump(j));
    return ok;
  }

 private:
  static std::string need(const std::string& v, const char* flag) {
    if (v.empty()) throw Error(ErrorKind::invalid_input, std::string(flag) + " is required");
    return v;
  }

  static QuadratureConfig quad(const Options& o, QuadratureConfig base) {
    if (!std::isnan(o.quad_abs)) base.abs_tol = o.quad_abs;
    if (!std::isnan(o.quad_rel)) base.rel_tol = o.quad_rel;
    if (o.quad_max > 0) base.max_subdivisions = o.quad_max;
    base.validate();
    return base;
  }

  static StripParams strip(const Options& o) {
    StripParams sp;
    sp.delta = o.delta;
    sp.epsilon_growth = o.epsilon;
    sp.validate();
    return sp;
  }

  static HBModel load_model(const Options& o) { return io::model_from_json(io::read_json_file(need(o.model, "--model"))); }

  static io::json base_config(const std::string& command, const Options& o) {
    io::json c;
    c["command"] = command;
    if (!o.weight.empty()) c["weight"] = o.weight;
    if (!o.model.empty()) c["model"] = o.model;
    if (!o.rep.empty()) c["rep"] = o.rep;
    c["seed"] = o.seed;
    if (o.spot > 0) c["spot"] = o.spot;
    io::json q = io::json::object();
    if (!std::isnan(o.quad_abs)) q["abs_tol"] = o.quad_abs;
    if (!std::isnan(o.quad_rel)) q["rel_tol"] = o.quad_rel;
    if (o.quad_max > 0) q["max_subdivisions"] = o.quad_max;
    c["quadrature_overrides"] = q;
    return c;
  }

  /// Appends `spot` seeded random points on the grid's line.
  static void add_spots(Grid& grid, const GridSpec& g, const Options& o) {
    if (o.spot <= 0) return;
    std::mt19937_64 rng(static_cast<unsigned long long>(o.seed));
    std::uniform_real_distribution<double> ux(g.lo, g.hi);
    std::vector<double> xs;
    for (cplx z : grid.points) xs.push_back(z.real());
    for (int i = 0; i < o.spot; ++i) xs.push_back(ux(rng));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    grid.points.clear();
    for (double x : xs) grid.points.emplace_back(x, g.imag);
    grid.description += " + " + std::to_string(o.spot) + " spot points (seed " + std::to_string(o.seed) + ")";
  }

  void emit(const std::string& path, const std::string& text) {
    if (path.empty())
      out_ << text;
    else
      io::write_atomic(path, text);
  }

  std::ostream& out_;
  std::ostream& err_;
};

/// Parses argv and runs one command.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"pwlab: weighted Paley-Wiener and de Branges space diagnostics"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "output path (stdout when omitted)");
    c->add_option("--seed", o.seed, "seed for spot-check points");
    c->add_option("--quad-abs", o.quad_abs, "quadrature absolute tolerance");
    c->add_option("--quad-rel", o.quad_rel, "quadrature relative tolerance");
    c->add_option("--quad-max-subdivisions", o.quad_max, "quadrature subdivision cap");
  };
  auto strip_opts = [&](CLI::App* c) {
    c->add_option("--delta", o.delta, "strip half-width delta");
    c->add_option("--epsilon", o.epsilon, "summit growth exponent epsilon");
  };

  auto* pot = app.add_subcommand("potential", "evaluate omega_m (and P_m off the axis)");
  pot->add_option("--weight", o.weight, "weight JSON");
  pot->add_option("--z", o.z, "single point x,y");
  pot->add_option("--grid", o.grid, "lo:hi:step[,imag]");
  pot->add_option("--spot", o.spot, "extra seeded random points");
  common(pot);

  auto* mul = app.add_subcommand("multiplier", "build E_m and certify |E_m| ~ exp(omega_m)");
  mul->add_option("--weight", o.weight, "weight JSON");
  mul->add_option("--radius", o.radius, "truncation radius R");
  mul->add_option("--grid", o.grid, "lo:hi:step[,imag]");
  mul->add_option("--band", o.band, "lo:hi");
  mul->add_option("--spot", o.spot, "extra seeded random points");
  common(mul);

  auto* ax = app.add_subcommand("axioms", "check the mountain-chain axioms");
  ax->add_option("--model", o.model, "model JSON");
  ax->add_option("--grid", o.grid, "window lo:hi[:step]");
  ax->add_option("--band", o.band, "axiom-1 band lo:hi");
  strip_opts(ax);
  common(ax);

  auto* sm = app.add_subcommand("smooth", "build the majorant representation");
  sm->add_option("--model", o.model, "model JSON");
  sm->add_option("--L", o.L, "polygon spacing L");
  sm->add_option("--L-max", o.L_max, "largest L tried when positivity fails");
  sm->add_option("--grid", o.grid, "window lo:hi[:certificate step]");
  sm->add_option("--band", o.band, "certificate band lo:hi");
  sm->add_option("--branch", o.branch, "auto, easy or general");
  strip_opts(sm);
  common(sm);

  auto* pv = app.add_subcommand("pavlov", "interpolation battery for an alpha pair");
  pv->add_option("--model", o.model, "model JSON");
  pv->add_option("--rep", o.rep, "representation JSON (built when omitted)");
  pv->add_option("--alpha", o.alpha, "alpha or comma-separated alphas in [0, pi)");
  pv->add_option("--tau", o.tau, "classical type parameter tau > sup m");
  pv->add_option("--grid", o.grid, "window lo:hi");
  pv->add_option("--L", o.L, "polygon spacing L when building the representation");
  pv->add_option("--L-max", o.L_max, "largest L tried");
  pv->add_option("--branch", o.branch, "auto, easy or general");
  strip_opts(pv);
  common(pv);

  auto* rp = app.add_subcommand("report", "bundle the JSON artifacts of a directory");
  rp->add_option("--dir", o.dir, "artifact directory");
  common(rp);

  auto* fx = app.add_subcommand("fixture", "write a reference model or weight");
  fx->add_option("--name", o.name, "stair, bad, single, unit, const1, const2 or step");
  fx->add_option("--radius", o.radius, "truncation radius for unit");
  common(fx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage_error;
  }

  Runner r(out, err);
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "potential") return r.potential(o);
    if (cmd == "multiplier") return r.multiplier(o);
    if (cmd == "axioms") return r.axioms(o);
    if (cmd == "smooth") return r.smooth(o);
    if (cmd == "pavlov") return r.pavlov(o);
    if (cmd == "report") return r.report(o);
    if (cmd == "fixture") return r.fixture(o);
  } catch (const Error& e) {
    err << cmd << ": " << e.what() << "\n";
    return e.is_usage_error() ? usage_error : numerical_failure;
  } catch (const nlohmann::json::exception& e) {
    err << cmd << ": invalid-input: " << e.what() << "\n";
    return usage_error;
  } catch (const std::exception& e) {
    err << cmd << ": " << e.what() << "\n";
    return numerical_failure;
  }
  return usage_error;
}

}  // namespace pwlab::cli
