#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "onsager/budget.hpp"
#include "onsager/channel.hpp"
#include "onsager/csv.hpp"
#include "onsager/error.hpp"
#include "onsager/field_io.hpp"
#include "onsager/flux.hpp"
#include "onsager/holder.hpp"
#include "onsager/kernels.hpp"
#include "onsager/mollify.hpp"
#include "onsager/solver.hpp"
#include "onsager/synthesis.hpp"

namespace fs = std::filesystem;

namespace onsager::cli {
namespace {

const std::vector<std::string> kCommands{"synth",   "simulate",      "mollify-check", "flux-sweep",
                                         "budget",  "channel-check", "report"};

Json dyadic_eps(int first, int last) {
  Json a = Json::array();
  for (int j = first; j <= last; ++j) a.push_back(std::ldexp(1.0, -j));
  return a;
}

// ---- config access ----

const Json& lookup(const Json& config, const std::string& dotted) {
  const Json* node = &config;
  std::istringstream parts(dotted);
  std::string key;
  while (std::getline(parts, key, '.')) {
    if (!node->is_object() || !node->contains(key)) throw ValidationError("config: missing field '" + dotted + "'");
    node = &(*node)[key];
  }
  return *node;
}

double get_double(const Json& c, const std::string& key) {
  const Json& v = lookup(c, key);
  if (!v.is_number()) throw ValidationError("config field '" + key + "': expected a number");
  return v.get<double>();
}

long get_int(const Json& c, const std::string& key) {
  const Json& v = lookup(c, key);
  if (!v.is_number_integer()) throw ValidationError("config field '" + key + "': expected an integer");
  return v.get<long>();
}

std::string get_string(const Json& c, const std::string& key) {
  const Json& v = lookup(c, key);
  if (!v.is_string()) throw ValidationError("config field '" + key + "': expected a string");
  return v.get<std::string>();
}

bool get_bool(const Json& c, const std::string& key) {
  const Json& v = lookup(c, key);
  if (!v.is_boolean()) throw ValidationError("config field '" + key + "': expected true or false");
  return v.get<bool>();
}

std::vector<double> get_doubles(const Json& c, const std::string& key) {
  const Json& v = lookup(c, key);
  std::vector<double> out;
  if (!v.is_array()) throw ValidationError("config field '" + key + "': expected an array of numbers");
  for (const Json& x : v) {
    if (!x.is_number()) throw ValidationError("config field '" + key + "': expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Dims get_dims(const Json& c, const std::string& key) {
  const std::vector<double> d = get_doubles(c, key);
  if (d.size() != 3) throw ValidationError("config field '" + key + "': expected three grid sizes");
  for (double x : d) {
    if (x != std::floor(x) || x < 1) throw ValidationError("config field '" + key + "': sizes must be positive integers");
  }
  return {static_cast<int>(d[0]), static_cast<int>(d[1]), static_cast<int>(d[2])};
}

void check_against(const Json& value, const Json& reference, const std::string& path) {
  const auto fail = [&](const std::string& what) {
    throw ValidationError("config field '" + path + "': " + what);
  };
  if (reference.is_object()) {
    if (!value.is_object()) fail("expected an object");
    for (const auto& [key, v] : value.items()) {
      const std::string sub = path.empty() ? key : path + "." + key;
      if (!reference.contains(key)) throw ValidationError("config: unknown field '" + sub + "'");
      check_against(v, reference[key], sub);
    }
  } else if (reference.is_boolean()) {
    if (!value.is_boolean()) fail("expected true or false");
  } else if (reference.is_number_integer()) {
    if (!value.is_number_integer()) fail("expected an integer");
  } else if (reference.is_number()) {
    if (!value.is_number()) fail("expected a number");
  } else if (reference.is_string()) {
    if (!value.is_string()) fail("expected a string");
  } else if (reference.is_array()) {
    if (!value.is_array()) fail("expected an array");
    if (!reference.empty()) {
      for (const Json& x : value) check_against(x, reference.front(), path + "[]");
    }
  }
}

void merge(Json& base, const Json& patch) {
  for (const auto& [key, v] : patch.items()) {
    if (v.is_object() && base.contains(key) && base[key].is_object()) {
      merge(base[key], v);
    } else {
      base[key] = v;
    }
  }
}

// ---- io helpers ----

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read " + path.string());
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json dims_json(Dims d) { return Json::array({d.n1, d.n2, d.n3}); }

std::string input_path(const Invocation& inv) {
  if (!inv.inputs.empty()) return inv.inputs.front();
  return get_string(inv.config, "input");
}

SynthesisSpec synthesis_spec(const Json& c, const std::string& block) {
  SynthesisSpec s;
  s.target_alpha = get_double(c, block + ".alpha");
  s.seed = static_cast<std::uint64_t>(get_int(c, "seed"));
  s.k_min = static_cast<int>(get_int(c, block + ".k_min"));
  s.k_max = static_cast<int>(get_int(c, block + ".k_max"));
  return s;
}

Geometry parse_geometry(const std::string& g) {
  if (g == "periodic3") return Geometry::kPeriodic3;
  if (g == "channel") return Geometry::kChannel;
  throw ValidationError("config field 'synth.geometry': expected \"periodic3\" or \"channel\"");
}

GridField synthesize_from(const Json& c) {
  const SynthesisSpec spec = synthesis_spec(c, "synth");
  const Dims dims = get_dims(c, "synth.dims");
  if (parse_geometry(get_string(c, "synth.geometry")) == Geometry::kChannel) {
    return synthesize_channel_field(spec, dims);
  }
  return synthesize_holder_field(spec, dims);
}

GridField field_input(const Invocation& inv) {
  const std::string path = input_path(inv);
  if (path.empty()) return synthesize_from(inv.config);
  if (!fs::is_regular_file(path)) throw ValidationError("input file not found: " + path);
  return read_ofx1(path);
}

RemainderRoute parse_route(const std::string& r, const std::string& key) {
  if (r == "spectral") return RemainderRoute::kSpectral;
  if (r == "quadrature") return RemainderRoute::kQuadrature;
  throw ValidationError("config field '" + key + "': expected \"spectral\" or \"quadrature\"");
}

// ---- trajectories on disk ----

void save_trajectory(const Trajectory& traj, const fs::path& dir) {
  fs::create_directories(dir / "snapshots");
  Json snaps = Json::array();
  for (std::size_t n = 0; n < traj.snapshots.size(); ++n) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.ofx1", n);
    write_ofx1(dir / "snapshots" / name, traj.snapshots[n].field);
    snaps.push_back({{"t", traj.snapshots[n].t}, {"file", std::string("snapshots/") + name}});
  }
  {
    std::ofstream f(dir / "log.csv", std::ios::binary);
    csv::Writer w(f, {"t", "energy", "grad_norm_sq"});
    for (const StepRecord& r : traj.log) w.row({r.t, r.energy, r.grad_norm_sq});
  }
  const SolverConfig& c = traj.config;
  Json j;
  j["nu"] = c.nu;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["dims"] = dims_json(c.dims);
  j["dealias"] = c.dealias;
  j["snapshot_stride"] = c.snapshot_stride;
  j["cfl_limit"] = c.cfl_limit;
  j["snapshots"] = snaps;
  j["notes"] = traj.notes;
  write_json(dir / "trajectory.json", j);
}

std::vector<double> split_doubles(const std::string& line) {
  std::vector<double> out;
  std::istringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

Trajectory load_trajectory(const fs::path& dir, bool with_fields = true) {
  const Json j = read_json(dir / "trajectory.json");
  Trajectory t;
  try {
    t.config.nu = j.at("nu").get<double>();
    t.config.dt = j.at("dt").get<double>();
    t.config.t_end = j.at("t_end").get<double>();
    const auto d = j.at("dims");
    t.config.dims = {d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>()};
    t.config.dealias = j.at("dealias").get<bool>();
    t.config.snapshot_stride = j.at("snapshot_stride").get<int>();
    for (const Json& s : j.at("snapshots")) {
      Snapshot snap;
      snap.t = s.at("t").get<double>();
      if (with_fields) snap.field = read_ofx1(dir / s.at("file").get<std::string>());
      t.snapshots.push_back(std::move(snap));
    }
  } catch (const Json::exception& e) {
    throw ValidationError((dir / "trajectory.json").string() + ": " + e.what());
  }
  std::ifstream f(dir / "log.csv");
  std::string line;
  if (f && std::getline(f, line)) {
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      const std::vector<double> v = split_doubles(line);
      if (v.size() != 3) throw ValidationError((dir / "log.csv").string() + ": malformed row");
      t.log.push_back({v[0], v[1], v[2]});
    }
  }
  return t;
}

bool is_run_dir(const std::string& path) {
  return !path.empty() && fs::is_directory(path) && fs::exists(fs::path(path) / "trajectory.json");
}

SolverConfig solver_config(const Json& c) {
  SolverConfig s;
  s.nu = get_double(c, "solver.nu");
  s.dt = get_double(c, "solver.dt");
  s.t_end = get_double(c, "solver.t_end");
  s.dims = get_dims(c, "solver.dims");
  s.dealias = get_bool(c, "solver.dealias");
  s.snapshot_stride = static_cast<int>(get_int(c, "solver.snapshot_stride"));
  s.cfl_limit = get_double(c, "solver.cfl_limit");
  s.validate();
  return s;
}

GridField initial_condition(const Json& c, Dims dims) {
  const std::string init = get_string(c, "solver.initial");
  if (init == "taylor-green") return taylor_green(dims);
  if (init == "shear") return shear_mode(dims);
  if (init == "synth") {
    SynthesisSpec s = synthesis_spec(c, "synth");
    return synthesize_holder_field(s, dims);
  }
  if (fs::is_regular_file(init)) return read_ofx1(init);
  throw ValidationError("config field 'solver.initial': expected taylor-green, shear, synth, or an OFX1 path");
}

// ---- report serialization ----

Json to_json(const FluxTerms& t) {
  return {{"eps", t.epsilon},         {"pi_total", t.pi_total},   {"pi_smooth", t.pi_smooth},
          {"pi_remainder", t.pi_remainder}, {"pi_rough", t.pi_rough}, {"residual", t.residual},
          {"scale", t.scale},         {"route", t.route},         {"quadrature_nodes", t.quadrature_nodes}};
}

Json to_json(const FluxSweepReport& r) {
  Json j;
  j["alpha"] = r.alpha;
  j["eta"] = r.eta;
  j["gamma_theory"] = r.gamma_theory;
  j["eta_forced"] = r.eta_forced;
  j["warnings"] = r.warnings;
  j["modulus"] = r.modulus;
  j["scale"] = r.scale;
  j["slopes"] = {{"pi_total", number_or_null(r.slopes.total)},
                 {"pi_remainder", number_or_null(r.slopes.remainder)},
                 {"pi_rough", number_or_null(r.slopes.rough)},
                 {"points", r.slopes.points},
                 {"weights", "1/eps"}};
  j["verdict"] = {{"conserving", r.verdict.conserving},
                  {"slope_positive", r.verdict.slope_positive},
                  {"slope_threshold", r.verdict.slope_threshold},
                  {"below_floor", r.verdict.below_floor},
                  {"floor_rel", r.verdict.floor_rel},
                  {"terminal_rel", r.verdict.terminal_rel},
                  {"fit_skipped", r.verdict.fit_skipped}};
  if (!r.omega_ratio.empty()) {
    j["omega_ratio"] = r.omega_ratio;
    j["omega_ratio_slope"] = number_or_null(r.omega_ratio_slope);
    j["omega_ratio_bounded"] = r.omega_ratio_bounded;
    j["ratio_tolerance"] = r.ratio_tolerance;
  }
  Json rows = Json::array();
  for (const FluxTerms& t : r.rows) rows.push_back(to_json(t));
  j["rows"] = rows;
  return j;
}

Json to_json(const EnergyBudget& b) {
  double final_rel = b.relative_residual.empty() ? 0.0 : b.relative_residual.back();
  return {{"nu", b.nu},
          {"source", b.source},
          {"samples", b.times.size()},
          {"final_relative_residual", final_rel},
          {"max_abs_relative", b.max_abs_relative},
          {"min_relative", b.min_relative},
          {"tolerance", b.tolerance},
          {"resolved", b.resolved},
          {"sign_verdict", b.sign_verdict},
          {"sign_cutoff", b.tolerance},
          {"snapshot_log_gap", b.snapshot_log_gap}};
}

void run_threads(const Invocation& inv) {
  const long n = get_int(inv.config, "threads");
  if (n > 0) kernels::set_threads(static_cast<int>(n));
}

}  // namespace

Json default_config() {
  Json c;
  c["seed"] = 1;
  c["threads"] = 0;
  c["input"] = "";
  c["synth"] = {{"alpha", 0.5}, {"dims", {64, 64, 64}}, {"k_min", 1}, {"k_max", 0}, {"geometry", "periodic3"}};
  c["mollify"] = {{"alpha", 0.5},         {"eps", dyadic_eps(2, 6)},   {"omega", "constant"},
                  {"ratio_limit", 1.1},   {"grad_slope_slack", 0.1}};
  c["flux"] = {{"alpha", 0.5},
               {"eta", 2.0},
               {"eps", dyadic_eps(2, 6)},
               {"route", "spectral"},
               {"omega", ""},
               {"floor_rel", 1e-3},
               {"slope_threshold", 0.0},
               {"clamp", 1e-13},
               {"ratio_tolerance", 0.1},
               {"identity_tolerance", 1e-8}};
  c["solver"] = {{"nu", 0.05},          {"dt", 0.01},           {"t_end", 1.0},
                 {"dims", {32, 32, 32}}, {"dealias", true},      {"snapshot_stride", 10},
                 {"cfl_limit", 0.5},     {"initial", "taylor-green"}};
  c["budget"] = {{"tolerance", 1e-6}, {"s", Json::array()}, {"t", -1.0}, {"noise_floor", 1e-8}};
  c["channel"] = {{"alpha", 0.5},
                  {"dims", {64, 64, 33}},
                  {"k_min", 1},
                  {"k_max", 0},
                  {"omega", "power:0.3"},
                  {"eps", dyadic_eps(2, 5)},
                  {"route", "spectral"},
                  {"lemma_limit", 1.1}};
  c["report"] = {{"runs", Json::array()}};
  // Array element types for validation of empty defaults.
  return c;
}

void check_config(const Json& config) {
  check_against(config, default_config(), "");
  for (const char* key : {"budget.s", "report.runs"}) {
    const Json& a = lookup(config, key);
    for (const Json& x : a) {
      const bool ok = std::string(key) == "budget.s" ? x.is_number() : x.is_string();
      if (!ok) throw ValidationError(std::string("config field '") + key + "': wrong element type");
    }
  }
}

Json load_config(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  Json patch;
  try {
    patch = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  if (!patch.is_object()) throw ValidationError(path.string() + ": top level must be an object");
  check_against(patch, default_config(), "");
  Json config = default_config();
  merge(config, patch);
  check_config(config);
  return config;
}

void apply_override(Json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  lookup(default_config(), key);  // unknown keys are rejected
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json* node = &config;
  std::istringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) path.push_back(part);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) node = &(*node)[path[i]];
  (*node)[path.back()] = value;
  check_config(config);
}

void cmd_synth(const Invocation& inv) {
  const GridField v = synthesize_from(inv.config);
  write_ofx1(inv.out / "field.ofx1", v);
  Json j;
  j["alpha"] = get_double(inv.config, "synth.alpha");
  j["seed"] = get_int(inv.config, "seed");
  j["dims"] = dims_json(v.dims());
  j["geometry"] = get_string(inv.config, "synth.geometry");
  j["energy"] = energy(v);
  if (v.geometry() == Geometry::kPeriodic3) {
    const StructureFunctionFit fit = structure_function(v);
    j["zeta2"] = fit.zeta2;
    j["zeta2_half"] = fit.zeta2 / 2.0;
    j["rough"] = fit.rough;
    j["rough_threshold"] = fit.rough_threshold;
  } else {
    const double z = horizontal_zeta2(v, v.dims().n3 / 2);
    j["zeta2_horizontal_mid"] = z;
    j["zeta2_half"] = z / 2.0;
    j["divergence"] = channel_divergence(v);
  }
  write_json(inv.out / "synth.json", j);
}

void cmd_simulate(const Invocation& inv) {
  const SolverConfig sc = solver_config(inv.config);
  const std::string path = input_path(inv);
  const GridField v0 = path.empty() ? initial_condition(inv.config, sc.dims) : read_ofx1(path);
  const Trajectory traj = run(v0, sc);
  save_trajectory(traj, inv.out);
}

void cmd_mollify_check(const Invocation& inv) {
  const GridField u = field_input(inv);
  const double alpha = get_double(inv.config, "mollify.alpha");
  const Modulus omega = Modulus::parse(get_string(inv.config, "mollify.omega"));
  const std::vector<double> eps = get_doubles(inv.config, "mollify.eps");
  const ConvEstimateTable t = check_conv_estimates_omega(u, alpha, omega, eps);
  {
    std::ofstream f(inv.out / "conv.csv", std::ios::binary);
    write_conv_csv(f, t);
  }
  const double limit = get_double(inv.config, "mollify.ratio_limit");
  const double slope_min = alpha - 1.0 - get_double(inv.config, "mollify.grad_slope_slack");
  Json j;
  j["alpha"] = alpha;
  j["modulus"] = t.modulus;
  j["seminorm"] = t.seminorm;
  j["grad_constant"] = t.grad_constant;
  j["max_ratio1"] = t.max_ratio1;
  j["ratio1_limit"] = limit;
  j["ratio1_ok"] = t.max_ratio1 <= limit;
  j["max_ratio2"] = t.max_ratio2;
  j["ratio2_limit"] = t.grad_constant;
  j["ratio2_ok"] = t.max_ratio2 <= t.grad_constant * limit;
  j["grad_slope"] = t.grad_slope;
  j["grad_slope_threshold"] = slope_min;
  j["grad_slope_ok"] = t.grad_slope >= slope_min;
  write_json(inv.out / "conv.json", j);
}

void cmd_flux_sweep(const Invocation& inv) {
  const Json& c = inv.config;
  const double alpha = get_double(c, "flux.alpha");
  const std::vector<double> eps = get_doubles(c, "flux.eps");
  SweepOptions opt;
  opt.flux.route = parse_route(get_string(c, "flux.route"), "flux.route");
  opt.flux.identity_tolerance = get_double(c, "flux.identity_tolerance");
  opt.floor_rel = get_double(c, "flux.floor_rel");
  opt.slope_threshold = get_double(c, "flux.slope_threshold");
  opt.clamp = get_double(c, "flux.clamp");
  opt.ratio_tolerance = get_double(c, "flux.ratio_tolerance");
  const std::string omega = get_string(c, "flux.omega");

  FluxSweepReport r;
  const std::string path = input_path(inv);
  if (is_run_dir(path)) {
    if (!omega.empty()) throw ValidationError("flux.omega is not supported for trajectory inputs");
    const Trajectory traj = load_trajectory(path);
    r = sweep_series(traj.snapshots, alpha, eps, get_double(c, "flux.eta"), opt);
  } else {
    const GridField v = field_input(inv);
    r = omega.empty() ? sweep(v, alpha, eps, get_double(c, "flux.eta"), opt)
                      : sweep_omega(v, alpha, Modulus::parse(omega), eps, opt);
  }
  {
    std::ofstream f(inv.out / "flux.csv", std::ios::binary);
    write_flux_csv(f, r);
  }
  Json j = to_json(r);
  j["clamp"] = opt.clamp;
  j["identity_tolerance"] = opt.flux.identity_tolerance;
  write_json(inv.out / "flux.json", j);
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

void cmd_budget(const Invocation& inv) {
  const Json& c = inv.config;
  std::string path = input_path(inv);
  Trajectory traj;
  if (path.empty()) {
    const SolverConfig sc = solver_config(c);
    traj = run(initial_condition(c, sc.dims), sc);
    save_trajectory(traj, inv.out);
  } else {
    if (!is_run_dir(path)) throw ValidationError("budget input must be a simulate run directory: " + path);
    traj = load_trajectory(path);
  }
  BudgetOptions opt;
  opt.tolerance = get_double(c, "budget.tolerance");
  const EnergyBudget b = audit(traj, opt);
  {
    std::ofstream f(inv.out / "budget.csv", std::ios::binary);
    csv::Writer w(f, {"t", "kinetic", "dissip_cum", "residual_D", "relative_residual"});
    for (std::size_t n = 0; n < b.times.size(); ++n) {
      w.row({b.times[n], b.kinetic[n], b.dissip_cum[n], b.residual[n], b.relative_residual[n]});
    }
  }
  Json j = to_json(b);
  const std::vector<double> s = get_doubles(c, "budget.s");
  if (!s.empty()) {
    double t = get_double(c, "budget.t");
    if (t < 0.0) t = traj.log.empty() ? traj.snapshots.back().t : traj.log.back().t;
    const InitialTimeTable tab = initial_time_limit(traj, s, t, get_double(c, "budget.noise_floor"));
    Json rows = Json::array();
    for (const InitialTimeRow& r : tab.rows) {
      rows.push_back({{"s", r.s}, {"residual", r.residual}, {"deviation", r.deviation}});
    }
    j["initial_time"] = {{"t", tab.t},
                         {"reference", tab.reference},
                         {"noise_floor", tab.noise_floor},
                         {"monotone", tab.monotone},
                         {"rows", rows}};
  }
  write_json(inv.out / "budget.json", j);
}

void cmd_channel_check(const Invocation& inv) {
  const Json& c = inv.config;
  const std::string path = input_path(inv);
  GridField v;
  if (path.empty()) {
    v = synthesize_channel_field(synthesis_spec(c, "channel"), get_dims(c, "channel.dims"));
  } else {
    v = read_ofx1(path);
    if (v.geometry() != Geometry::kChannel) throw ValidationError("channel-check needs a channel field: " + path);
  }
  const Modulus omega = Modulus::parse(get_string(c, "channel.omega"));
  const std::vector<double> eps = get_doubles(c, "channel.eps");
  const double limit = get_double(c, "channel.lemma_limit");
  FluxOptions fo;
  fo.route = parse_route(get_string(c, "channel.route"), "channel.route");

  const HolderEstimate semi = horizontal_seminorm(v, omega);
  Json lemma = Json::array();
  double worst = 0.0;
  {
    std::ofstream f(inv.out / "lemma.csv", std::ios::binary);
    csv::Writer w(f, {"eps", "wall_max", "divergence_before", "divergence_after", "sup_diff", "omega_eps", "ratio"});
    for (double e : eps) {
      const HorizontalLemmaCheck h = check_horizontal_lemma(v, horizontal_kernel_for(v, e), omega, semi.seminorm);
      w.row({h.epsilon, h.wall_max, h.divergence_before, h.divergence_after, h.sup_diff, h.omega_eps, h.ratio});
      worst = std::max(worst, h.ratio);
    }
  }
  const ChannelFluxReport r = channel_flux_bound(v, omega, eps, fo);
  {
    std::ofstream f(inv.out / "channel_flux.csv", std::ios::binary);
    FluxSweepReport shared;
    for (const ChannelFluxRow& row : r.rows) {
      FluxTerms t;
      t.epsilon = row.eps;
      t.pi_total = row.pi_total;
      t.pi_smooth = row.pi_smooth;
      t.pi_remainder = row.pi_remainder;
      t.pi_rough = row.pi_rough;
      t.residual = row.residual;
      t.route = fo.route == RemainderRoute::kSpectral ? "spectral" : "quadrature";
      t.quadrature_nodes = row.quadrature_nodes;
      shared.rows.push_back(t);
    }
    write_flux_csv(f, shared, "channel");
  }
  {
    std::ofstream f(inv.out / "channel_ratios.csv", std::ios::binary);
    csv::Writer w(f, {"eps", "omega_eps", "rough_ratio", "rough_abs_ratio", "remainder_ratio", "smooth_relative",
                      "pi_smooth_horizontal", "pi_smooth_vertical"});
    for (const ChannelFluxRow& row : r.rows) {
      w.row({row.eps, row.omega_eps, row.rough_ratio, row.rough_abs_ratio, row.remainder_ratio, row.smooth_relative,
             row.pi_smooth_horizontal, row.pi_smooth_vertical});
    }
  }
  Json j;
  j["alpha"] = get_double(c, "channel.alpha");
  j["modulus"] = r.modulus;
  j["seminorm"] = r.seminorm;
  j["norm"] = r.norm;
  j["grad_norm"] = r.grad_norm;
  j["lemma_max_ratio"] = worst;
  j["lemma_limit"] = limit;
  j["lemma_ok"] = worst <= limit;
  j["max_rough_ratio"] = r.max_rough_ratio;
  j["max_rough_abs_ratio"] = r.max_rough_abs_ratio;
  j["max_remainder_ratio"] = r.max_remainder_ratio;
  j["rough_ratio_bound"] = r.rough_ratio_bound;
  j["rough_bounded"] = r.max_rough_abs_ratio <= r.rough_ratio_bound;
  write_json(inv.out / "channel.json", j);
}

void cmd_report(const Invocation& inv) {
  std::vector<std::string> runs = inv.inputs;
  for (const Json& r : lookup(inv.config, "report.runs")) runs.push_back(r.get<std::string>());
  if (runs.empty()) throw ValidationError("report needs at least one run directory");
  struct Entry {
    double alpha;
    std::string run;
    std::string kind;
    Json summary;
  };
  std::vector<Entry> entries;
  for (const std::string& run : runs) {
    if (!fs::is_directory(run)) throw ValidationError("not a run directory: " + run);
    bool found = false;
    for (const char* name : {"synth.json", "conv.json", "flux.json", "budget.json", "channel.json"}) {
      const fs::path p = fs::path(run) / name;
      if (!fs::exists(p)) continue;
      found = true;
      Json s = read_json(p);
      s.erase("rows");
      const double alpha = s.contains("alpha") && s["alpha"].is_number() ? s["alpha"].get<double>() : NAN;
      entries.push_back({alpha, run, fs::path(name).stem().string(), s});
    }
    if (!found) throw ValidationError("no report files in " + run);
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (std::isnan(a.alpha) != std::isnan(b.alpha)) return std::isnan(b.alpha);
    if (a.alpha != b.alpha && !std::isnan(a.alpha)) return a.alpha < b.alpha;
    return a.run < b.run;
  });
  Json table = Json::array();
  for (const Entry& e : entries) {
    table.push_back({{"run", e.run}, {"kind", e.kind}, {"alpha", number_or_null(e.alpha)}, {"summary", e.summary}});
  }
  write_json(inv.out / "summary.json", {{"entries", table}});
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mollified energy-flux diagnostics for incompressible flows"};
  std::string command, config_path, out_dir = "run";
  std::vector<std::string> sets, inputs;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("command", command, "synth | simulate | mollify-check | flux-sweep | budget | channel-check | report")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("inputs", inputs, "Input field, run directory, or run directories for report");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Global seed");
  auto* threads_opt = app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  app.add_option("--set", sets, "Override one config leaf, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Invocation inv;
    inv.command = command;
    inv.inputs = inputs;
    inv.config = config_path.empty() ? default_config() : load_config(config_path);
    for (const std::string& s : sets) apply_override(inv.config, s);
    if (seed_opt->count() > 0) inv.config["seed"] = seed;
    if (threads_opt->count() > 0) {
      inv.config["threads"] = threads;
    } else if (const char* env = std::getenv("ONSAGER_FLUX_THREADS"); env && *env) {
      char* end = nullptr;
      const long n = std::strtol(env, &end, 10);
      if (*end != '\0' || n < 1) throw ValidationError("ONSAGER_FLUX_THREADS must be a positive integer");
      inv.config["threads"] = n;
    }
    check_config(inv.config);
    inv.out = out_dir;
    fs::create_directories(inv.out);
    Json echo = inv.config;
    echo["command"] = command;
    echo["inputs"] = inputs;
    write_json(inv.out / "config.json", echo);
    run_threads(inv);

    if (command == "synth") cmd_synth(inv);
    else if (command == "simulate") cmd_simulate(inv);
    else if (command == "mollify-check") cmd_mollify_check(inv);
    else if (command == "flux-sweep") cmd_flux_sweep(inv);
    else if (command == "budget") cmd_budget(inv);
    else if (command == "channel-check") cmd_channel_check(inv);
    else cmd_report(inv);
    out << command << ": wrote " << inv.out.string() << "\n";
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IdentityError& e) {
    err << "identity failure: " << e.what() << "\n";
    return 3;
  } catch (const CflError& e) {
    err << "stability failure: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace onsager::cli
