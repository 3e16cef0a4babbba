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
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "floquet/errors.hpp"
#include "floquet/sweep.hpp"

namespace {

using namespace floquet;
using namespace floquet::sweep;

enum Exit : int { kOk = 0, kConfig = 1, kPartial = 2, kTotal = 3 };

nlohmann::json num(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

std::size_t job_count(const SweepConfig& cfg) {
  return cfg.grid.size() * cfg.thermo_n.size() * std::max<std::size_t>(1, cfg.sectors.size());
}

int cmd_validate(const std::string& path) {
  const SweepConfig cfg = load_config(path);
  std::cout << "ok: model " << model_name(cfg.model) << ", " << cfg.var << " x "
            << cfg.grid.size() << " points, " << cfg.thermo_n.size() << " N value(s), "
            << job_count(cfg) << " job(s)\n";
  return kOk;
}

int cmd_run(const std::string& path, std::optional<std::size_t> workers,
            std::optional<std::uint64_t> seed, std::optional<std::string> out) {
  SweepConfig cfg = load_config(path);
  if (workers) cfg.workers = *workers;
  if (seed) cfg.seed = *seed;
  if (out) cfg.output = *out;
  if (cfg.output.empty()) throw ConfigError("output: no CSV path given (config or --out)");
  cfg.validate();

  std::ofstream csv(cfg.output);
  if (!csv) throw ConfigError("output: cannot open '" + cfg.output + "'");

  const SweepResult result = run_sweep(cfg, [](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\r[%zu/%zu]", done, total);
    if (done == total) std::fputc('\n', stderr);
  });
  for (const auto& e : result.errors) std::cerr << "failed: " << e << '\n';

  write_csv(csv, result);
  csv.close();
  if (!csv) throw std::runtime_error("failed writing '" + cfg.output + "'");

  const std::string observable = cfg.observables.empty() ? "" : cfg.observables.front();
  const auto estimates = estimate_critical_point(result, observable);
  std::optional<CriticalityReport> crit;
  if (!observable.empty()) {
    try {
      crit = criticality_order(result, observable, 1);
    } catch (const DomainError& e) {
      std::cerr << "criticality: " << e.what() << '\n';
    }
  }
  std::vector<CutoffCheck> checks;
  if (cfg.cutoff_check) checks = cutoff_convergence(cfg, result, estimates);
  for (const auto& c : checks)
    if (!c.ok)
      std::cerr << "cutoff check at " << cfg.var << " = " << c.zeta << ", N = " << c.n
                << " not within tolerance" << (c.error.empty() ? "" : ": " + c.error) << '\n';

  std::ofstream rep(cfg.output + ".report.json");
  rep << report_json(cfg, result, estimates, crit, checks) << '\n';

  std::cerr << result.jobs - result.failed_jobs << "/" << result.jobs << " jobs converged, wrote "
            << cfg.output << '\n';
  if (result.failed_jobs == 0) return kOk;
  return result.failed_jobs == result.jobs ? kTotal : kPartial;
}

int cmd_diag(const std::string& input, const std::string& observable, int order) {
  std::ifstream in(input);
  if (!in) throw ConfigError("input: cannot open '" + input + "'");
  const SweepResult result = read_csv(in);
  nlohmann::json doc;
  try {
    const auto rep = criticality_order(result, observable, order);
    nlohmann::json per = nlohmann::json::array();
    for (const auto& s : rep.series) {
      nlohmann::json d;
      d["N"] = s.n;
      d["peak_zeta"] = num(s.peak_zeta);
      d["peak_abs"] = num(s.peak_abs);
      nlohmann::json table = nlohmann::json::array();
      for (std::size_t i = 0; i < s.zeta.size(); ++i) table.push_back({s.zeta[i], num(s.value[i])});
      d["derivative"] = std::move(table);
      per.push_back(std::move(d));
    }
    doc["observable"] = rep.observable;
    doc["order"] = rep.order;
    doc["series"] = std::move(per);
    doc["peak_growth"] = rep.peak_growth;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  nlohmann::json est = nlohmann::json::array();
  for (const auto& e : estimate_critical_point(result, observable)) {
    nlohmann::json j;
    j["N"] = e.n;
    j["interior_minimum"] = e.interior;
    j["zeta_c"] = num(e.zeta_refined);
    j["zeta_c_grid"] = num(e.zeta_grid);
    j["gap_min"] = num(e.gap_min);
    j["derivative_peak"] = e.derivative_peak ? num(*e.derivative_peak) : nlohmann::json();
    j["flagged"] = e.flagged;
    if (!e.note.empty()) j["note"] = e.note;
    est.push_back(std::move(j));
  }
  doc["critical_point"] = std::move(est);
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet spectral analysis of driven-dissipative phase transitions"};
  app.require_subcommand(1);

  std::string config_path, input, observable, out;
  std::size_t workers = 0;
  std::uint64_t seed = 0;
  int order = 1;

  auto* run = app.add_subcommand("run", "Run a parameter sweep");
  run->add_option("--config", config_path, "JSON config")->required();
  auto* w_opt = run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* s_opt = run->add_option("--seed", seed, "Seed for Krylov start vectors");
  auto* o_opt = run->add_option("--out", out, "CSV output path");

  auto* diag = app.add_subcommand("diag", "Criticality diagnostics of a sweep CSV");
  diag->add_option("--input", input, "Sweep CSV")->required();
  diag->add_option("--observable", observable, "Observable name")->required();
  diag->add_option("--order", order, "Derivative order m")->required()->check(CLI::PositiveNumber);

  auto* val = app.add_subcommand("validate", "Check a config without computing");
  val->add_option("--config", config_path, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*run)
      return cmd_run(config_path, *w_opt ? std::optional(workers) : std::nullopt,
                     *s_opt ? std::optional(seed) : std::nullopt,
                     *o_opt ? std::optional(out) : std::nullopt);
    if (*diag) return cmd_diag(input, observable, order);
    return cmd_validate(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTotal;
  }
}
