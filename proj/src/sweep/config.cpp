// Copyright 2026 The floquet-dpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "floquet/errors.hpp"
#include "floquet/sweep.hpp"
#include "point.hpp"

namespace floquet::sweep {
namespace {

using nlohmann::json;

const std::set<std::string> kKerrKeys = {"omega0", "U_tilde", "F_tilde", "omega_d", "Delta",
                                         "n",      "kappa",   "eta",     "cutoff",  "frame"};
const std::set<std::string> kRabiKeys = {"omega_c", "omega_q", "g",      "F",        "F_tilde",
                                         "omega_d", "kappa",   "cutoff", "M",        "jcm_frame"};
const std::set<std::string> kKerrVars = {"F_tilde", "Delta", "U_tilde", "omega_d",
                                         "omega0",  "eta",   "kappa"};
const std::set<std::string> kRabiVars = {"F_tilde", "F",       "g",    "omega_d",
                                         "omega_c", "omega_q", "kappa"};
const std::set<std::string> kObservables = {"photon_number", "photon_density", "output_field"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where, "must be finite");
  return x;
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(where, "expected an integer");
  const auto x = v.get<long long>();
  if (x < 0) fail(where, "must be non-negative");
  return static_cast<std::size_t>(x);
}

ModelKind parse_model(const json& v) {
  if (!v.is_string()) fail("model", "expected a string");
  const auto s = v.get<std::string>();
  if (s == "kerr_full") return ModelKind::KerrFull;
  if (s == "kerr_rwa") return ModelKind::KerrRwa;
  if (s == "jcm") return ModelKind::Jcm;
  if (s == "qrm_gme") return ModelKind::QrmGme;
  fail("model", "unknown model '" + s + "' (kerr_full, kerr_rwa, jcm, qrm_gme)");
}

void parse_kerr(const json& p, SweepConfig& cfg) {
  check_keys(p, kKerrKeys, "params");
  auto& k = cfg.kerr;
  for (const auto& [key, v] : p.items()) {
    const std::string where = "params." + key;
    if (key == "omega0") k.omega0 = number(v, where);
    else if (key == "U_tilde") k.u_tilde = number(v, where);
    else if (key == "F_tilde") k.f_tilde = number(v, where);
    else if (key == "omega_d") k.omega_d = number(v, where);
    else if (key == "Delta") cfg.kerr_detuning = number(v, where);
    else if (key == "n") k.n = static_cast<int>(count(v, where));
    else if (key == "kappa") k.kappa = number(v, where);
    else if (key == "eta") k.eta = number(v, where);
    else if (key == "cutoff") k.cutoff = count(v, where);
    else if (key == "frame") {
      if (cfg.model != ModelKind::KerrFull) fail(where, "only valid for kerr_full");
      const auto s = v.is_string() ? v.get<std::string>() : std::string{};
      if (s == "auto") cfg.kerr_frame = models::KerrFrame::Auto;
      else if (s == "lab") cfg.kerr_frame = models::KerrFrame::Lab;
      else if (s == "rotating") cfg.kerr_frame = models::KerrFrame::Rotating;
      else fail(where, "expected auto, lab or rotating");
    }
  }
  if (p.contains("Delta") && p.contains("omega_d"))
    fail("params", "give either Delta or omega_d, not both");
}

void parse_rabi(const json& p, SweepConfig& cfg) {
  check_keys(p, kRabiKeys, "params");
  auto& r = cfg.rabi;
  r.variant = cfg.model == ModelKind::Jcm ? models::RabiVariant::Jcm : models::RabiVariant::QrmGme;
  for (const auto& [key, v] : p.items()) {
    const std::string where = "params." + key;
    if (key == "omega_c") r.omega_c = number(v, where);
    else if (key == "omega_q") r.omega_q = number(v, where);
    else if (key == "g") r.g = number(v, where);
    else if (key == "F") r.f = number(v, where);
    else if (key == "F_tilde") cfg.rabi_f_tilde = number(v, where);
    else if (key == "omega_d") r.omega_d = number(v, where);
    else if (key == "kappa") r.kappa = number(v, where);
    else if (key == "cutoff") r.cutoff = count(v, where);
    else if (key == "M") {
      if (cfg.model != ModelKind::QrmGme) fail(where, "only valid for qrm_gme");
      r.m = count(v, where);
    } else if (key == "jcm_frame") {
      if (cfg.model != ModelKind::Jcm) fail(where, "only valid for jcm");
      const auto s = v.is_string() ? v.get<std::string>() : std::string{};
      if (s == "literal") r.jcm_frame = models::JcmFrame::Literal;
      else if (s == "drive") r.jcm_frame = models::JcmFrame::Drive;
      else fail(where, "expected literal or drive");
    }
  }
  if (p.contains("F") && p.contains("F_tilde")) fail("params", "give either F or F_tilde, not both");
}

std::vector<double> parse_grid(const json& g) {
  if (g.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < g.size(); ++i)
      out.push_back(number(g[i], "sweep.grid[" + std::to_string(i) + "]"));
    return out;
  }
  check_keys(g, {"start", "stop", "points", "scale", "values"}, "sweep.grid");
  if (g.contains("values")) {
    if (g.size() != 1) fail("sweep.grid", "values excludes start/stop/points/scale");
    if (!g["values"].is_array()) fail("sweep.grid.values", "expected an array");
    return parse_grid(g["values"]);
  }
  for (const char* key : {"start", "stop", "points"})
    if (!g.contains(key)) fail("sweep.grid", std::string("missing '") + key + "'");
  const double a = number(g["start"], "sweep.grid.start");
  const double b = number(g["stop"], "sweep.grid.stop");
  const std::size_t n = count(g["points"], "sweep.grid.points");
  if (n < 2) fail("sweep.grid.points", "need at least 2 points");
  const std::string scale = g.value("scale", std::string("linear"));
  std::vector<double> out(n);
  if (scale == "linear") {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  } else if (scale == "log") {
    if (!(a > 0.0) || !(b > 0.0)) fail("sweep.grid", "log scale needs positive start and stop");
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = i == 0       ? a
               : i + 1 == n ? b
                            : std::exp(la + (lb - la) * static_cast<double>(i) /
                                                 static_cast<double>(n - 1));
  } else {
    fail("sweep.grid.scale", "expected linear or log");
  }
  return out;
}

void parse_solver(const json& s, SweepConfig& cfg) {
  check_keys(s, {"arnoldi", "integrator", "cutoff_check", "cutoff_factor"}, "solver");
  if (s.contains("arnoldi")) {
    const json& a = s["arnoldi"];
    check_keys(a, {"m", "k", "tol", "max_restarts", "keep", "periods", "verify_residuals"},
               "solver.arnoldi");
    auto& c = cfg.arnoldi;
    if (a.contains("m")) c.m = count(a["m"], "solver.arnoldi.m");
    if (a.contains("k")) c.k = count(a["k"], "solver.arnoldi.k");
    if (a.contains("tol")) c.tol = number(a["tol"], "solver.arnoldi.tol");
    if (a.contains("max_restarts"))
      c.max_restarts = count(a["max_restarts"], "solver.arnoldi.max_restarts");
    if (a.contains("keep")) c.keep = count(a["keep"], "solver.arnoldi.keep");
    if (a.contains("periods")) c.periods = count(a["periods"], "solver.arnoldi.periods");
    if (a.contains("verify_residuals")) {
      if (!a["verify_residuals"].is_boolean())
        fail("solver.arnoldi.verify_residuals", "expected a boolean");
      c.verify_residuals = a["verify_residuals"].get<bool>();
    }
  }
  if (s.contains("integrator")) {
    const json& i = s["integrator"];
    check_keys(i, {"method", "rtol", "atol", "max_steps"}, "solver.integrator");
    auto& c = cfg.integrator;
    if (i.contains("method") && i["method"] != "dopri5")
      fail("solver.integrator.method", "only dopri5 is available");
    if (i.contains("rtol")) c.rtol = number(i["rtol"], "solver.integrator.rtol");
    if (i.contains("atol")) c.atol = number(i["atol"], "solver.integrator.atol");
    if (i.contains("max_steps")) c.max_steps = count(i["max_steps"], "solver.integrator.max_steps");
  }
  if (s.contains("cutoff_check")) {
    if (!s["cutoff_check"].is_boolean()) fail("solver.cutoff_check", "expected a boolean");
    cfg.cutoff_check = s["cutoff_check"].get<bool>();
  }
  if (s.contains("cutoff_factor"))
    cfg.cutoff_factor = number(s["cutoff_factor"], "solver.cutoff_factor");
}

}  // namespace

namespace detail {

bool is_kerr(ModelKind m) { return m == ModelKind::KerrFull || m == ModelKind::KerrRwa; }

PointParams point_params(const SweepConfig& cfg, double zeta, double n) {
  PointParams out{cfg.kerr, cfg.rabi};
  if (is_kerr(cfg.model)) {
    auto& k = out.kerr;
    k.thermo_n = n;
    double detuning = cfg.kerr_detuning.value_or(k.detuning());
    if (cfg.var == "F_tilde") k.f_tilde = zeta;
    else if (cfg.var == "Delta") detuning = zeta;
    else if (cfg.var == "U_tilde") k.u_tilde = zeta;
    else if (cfg.var == "omega_d") k.omega_d = zeta;
    else if (cfg.var == "omega0") k.omega0 = zeta;
    else if (cfg.var == "eta") k.eta = zeta;
    else if (cfg.var == "kappa") k.kappa = zeta;
    if (cfg.var == "Delta" || (cfg.kerr_detuning && cfg.var != "omega_d"))
      k.omega_d = k.n * (k.omega0 - detuning);
  } else {
    auto& r = out.rabi;
    if (cfg.var == "F") r.f = zeta;
    else if (cfg.var == "g") r.g = zeta;
    else if (cfg.var == "omega_d") r.omega_d = zeta;
    else if (cfg.var == "omega_c") r.omega_c = zeta;
    else if (cfg.var == "omega_q") r.omega_q = zeta;
    else if (cfg.var == "kappa") r.kappa = zeta;
    const std::optional<double> ft = cfg.var == "F_tilde" ? std::optional(zeta) : cfg.rabi_f_tilde;
    if (ft) {
      if (!(r.g > 0.0)) throw ConfigError("params: F_tilde = 2F/g needs g > 0");
      if (cfg.model == ModelKind::QrmGme && r.g < 0.05 * r.omega_c)
        throw ConfigError("params: F_tilde = 2F/g is ill-conditioned for qrm_gme below g = 0.05 omega_c; "
                          "sweep F instead");
      r.f = *ft * r.g / 2.0;
    }
  }
  return out;
}

}  // namespace detail

using detail::is_kerr;

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::KerrFull: return "kerr_full";
    case ModelKind::KerrRwa: return "kerr_rwa";
    case ModelKind::Jcm: return "jcm";
    case ModelKind::QrmGme: return "qrm_gme";
  }
  return "unknown";
}

SweepConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(doc,
             {"model", "params", "sweep", "thermo_N", "solver", "sectors", "observables", "output",
              "workers", "seed"},
             "config");
  for (const char* key : {"model", "sweep"})
    if (!doc.contains(key)) fail("config", std::string("missing '") + key + "'");

  SweepConfig cfg;
  cfg.model = parse_model(doc["model"]);
  const json params = doc.value("params", json::object());
  if (is_kerr(cfg.model)) parse_kerr(params, cfg);
  else parse_rabi(params, cfg);

  const json& sw = doc["sweep"];
  check_keys(sw, {"var", "grid"}, "sweep");
  if (!sw.contains("var") || !sw["var"].is_string()) fail("sweep.var", "expected a string");
  cfg.var = sw["var"].get<std::string>();
  if (!sw.contains("grid")) fail("sweep", "missing 'grid'");
  cfg.grid = parse_grid(sw["grid"]);

  if (doc.contains("thermo_N")) {
    const json& n = doc["thermo_N"];
    cfg.thermo_n.clear();
    if (n.is_array()) {
      for (std::size_t i = 0; i < n.size(); ++i)
        cfg.thermo_n.push_back(number(n[i], "thermo_N[" + std::to_string(i) + "]"));
    } else {
      cfg.thermo_n.push_back(number(n, "thermo_N"));
    }
  }
  if (doc.contains("solver")) parse_solver(doc["solver"], cfg);

  if (doc.contains("sectors") && !doc["sectors"].is_null()) {
    const json& s = doc["sectors"];
    if (s.is_string()) {
      const auto v = s.get<std::string>();
      if (v == "all") {
        if (!is_kerr(cfg.model) || cfg.kerr.n < 2) fail("sectors", "model has no Z_n symmetry");
        for (int i = 0; i < cfg.kerr.n; ++i) cfg.sectors.push_back(i);
      } else if (v != "none") {
        fail("sectors", "expected \"none\", \"all\" or a list of sector indices");
      }
    } else if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i)
        cfg.sectors.push_back(static_cast<int>(count(s[i], "sectors[" + std::to_string(i) + "]")));
    } else {
      fail("sectors", "expected \"none\", \"all\" or a list of sector indices");
    }
  }
  if (doc.contains("observables")) {
    const json& o = doc["observables"];
    if (!o.is_array()) fail("observables", "expected an array of names");
    for (const auto& name : o) {
      if (!name.is_string()) fail("observables", "expected an array of names");
      cfg.observables.push_back(name.get<std::string>());
    }
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (o.is_string()) {
      cfg.output = o.get<std::string>();
    } else {
      check_keys(o, {"csv"}, "output");
      if (!o.contains("csv") || !o["csv"].is_string()) fail("output.csv", "expected a path");
      cfg.output = o["csv"].get<std::string>();
    }
  }
  if (doc.contains("workers")) cfg.workers = count(doc["workers"], "workers");
  if (doc.contains("seed")) cfg.seed = static_cast<std::uint64_t>(count(doc["seed"], "seed"));
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void SweepConfig::validate() const {
  if (grid.size() < 2) fail("sweep.grid", "need at least 2 points");
  for (const double z : grid)
    if (!std::isfinite(z)) fail("sweep.grid", "values must be finite");
  const bool kerr_model = is_kerr(model);
  const auto& vars = kerr_model ? kKerrVars : kRabiVars;
  if (!vars.count(var)) fail("sweep.var", "'" + var + "' is not a parameter of " +
                                              std::string(model_name(model)));
  if (kerr_model && var == "omega_d" && kerr_detuning)
    fail("sweep.var", "cannot sweep omega_d with Delta fixed");
  if (!kerr_model && var == "F" && rabi_f_tilde)
    fail("sweep.var", "cannot sweep F with F_tilde fixed");
  if (thermo_n.empty()) fail("thermo_N", "need at least one value");
  for (const double n : thermo_n) {
    if (!(n > 0.0)) fail("thermo_N", "values must be positive");
    if (!kerr_model && n != 1.0) fail("thermo_N", "only the Kerr models have a thermodynamic scale");
  }
  if (workers < 1) fail("workers", "must be >= 1");
  if (!(cutoff_factor > 1.0)) fail("solver.cutoff_factor", "must exceed 1");
  try {
    integrator.validate();
  } catch (const DomainError& e) {
    fail("solver.integrator", e.what());
  }
  try {
    arnoldi.validate();
  } catch (const DomainError& e) {
    fail("solver.arnoldi", e.what());
  }
  if (!sectors.empty()) {
    if (!kerr_model || kerr.n < 2) fail("sectors", "model has no Z_n symmetry");
    std::set<int> seen;
    for (const int s : sectors) {
      if (s < 0 || s >= kerr.n) fail("sectors", "index " + std::to_string(s) + " out of range");
      if (!seen.insert(s).second) fail("sectors", "duplicate index " + std::to_string(s));
    }
  }
  std::set<std::string> seen_obs;
  for (const auto& o : observables) {
    if (!kObservables.count(o)) fail("observables", "unknown observable '" + o + "'");
    if (o == "output_field" && model != ModelKind::QrmGme)
      fail("observables", "output_field requires qrm_gme");
    if (!seen_obs.insert(o).second) fail("observables", "duplicate '" + o + "'");
  }
  // Every grid point must yield valid model parameters.
  for (const double n : thermo_n)
    for (const double z : grid) {
      try {
        const detail::PointParams pp = detail::point_params(*this, z, n);
        if (kerr_model) pp.kerr.validate();
        else pp.rabi.validate();
      } catch (const std::exception& e) {
        fail("params", std::string(e.what()) + " at " + var + " = " + std::to_string(z));
      }
    }
}

}  // namespace floquet::sweep
