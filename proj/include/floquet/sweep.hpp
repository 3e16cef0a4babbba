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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floquet/floquet.hpp"
#include "floquet/integrator.hpp"
#include "floquet/models.hpp"

namespace floquet::sweep {

enum class ModelKind { KerrFull, KerrRwa, Jcm, QrmGme };

std::string_view model_name(ModelKind kind);

struct SweepConfig {
  ModelKind model = ModelKind::KerrRwa;
  models::KerrParams kerr;
  models::KerrFrame kerr_frame = models::KerrFrame::Auto;
  std::optional<double> kerr_detuning;  // fixes omega_d = n (omega0 - Delta)
  models::RabiParams rabi;
  std::optional<double> rabi_f_tilde;   // fixes F = F~ g / 2

  std::string var;
  std::vector<double> grid;
  std::vector<double> thermo_n{1.0};

  IntegratorConfig integrator;
  ArnoldiConfig arnoldi;
  std::vector<int> sectors;  // empty: full space
  std::vector<std::string> observables;
  std::string output;

  std::size_t workers = 1;
  std::uint64_t seed = 0x5eed;
  bool cutoff_check = false;
  double cutoff_factor = 1.25;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Parses a JSON document. Throws ConfigError with the offending key.
SweepConfig parse_config(std::string_view json_text);
SweepConfig load_config(const std::filesystem::path& path);

/// Model, generator and observables at one sweep point.
struct PointModel {
  std::shared_ptr<const TimePeriodicGenerator> generator;
  std::optional<SymmetrySpec> symmetry;
  std::vector<ComplexMatrix> observables;  // aligned with SweepConfig::observables
  std::size_t cutoff = 0;
};

/// Builds the model at sweep value `zeta` and thermodynamic scale `n`;
/// `cutoff_scale` enlarges the Fock cutoff for convergence checks.
PointModel build_point(const SweepConfig& cfg, double zeta, double n, double cutoff_scale = 1.0);

/// Sector label of a row; nullopt means the full space.
using Sector = std::optional<int>;

struct Row {
  std::string zeta_name;
  double zeta_value = 0.0;
  double n = 1.0;
  Sector sector;
  Complex eps0;
  Complex eps1;
  double gap = 0.0;
  std::string obs_name;
  double obs_value = 0.0;
  double residual = 0.0;
  std::size_t cutoff = 0;
  bool converged = false;
  double wall_s = 0.0;
};

struct SweepResult {
  std::vector<Row> rows;
  std::vector<std::string> errors;  // one entry per failed job
  std::size_t jobs = 0;
  std::size_t failed_jobs = 0;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (zeta, N, sector) job on a pool of cfg.workers threads. Rows are
/// ordered by grid index, then N, then sector, then observable, independent
/// of scheduling. Failed jobs produce rows with converged = false.
SweepResult run_sweep(const SweepConfig& cfg, const ProgressFn& progress = {});

/// Single job; never throws for numerical failures.
std::vector<Row> run_point(const SweepConfig& cfg, std::size_t grid_index, std::size_t n_index,
                           const Sector& sector, double cutoff_scale = 1.0,
                           std::string* error = nullptr);

inline constexpr std::string_view kCsvHeader =
    "zeta_name,zeta_value,N,sector,eps0_re,eps0_im,eps1_re,eps1_im,gap,obs_name,obs_value,"
    "residual,cutoff,converged,wall_s";

void write_csv(std::ostream& out, const SweepResult& result);
/// Throws ConfigError on a malformed file.
SweepResult read_csv(std::istream& in);

struct DerivativeSeries {
  double n = 1.0;
  std::vector<double> zeta;   // interior points where the stencil fits
  std::vector<double> value;  // d^m O / d zeta^m
  double peak_zeta = 0.0;
  double peak_abs = 0.0;
};

struct CriticalityReport {
  std::string observable;
  int order = 1;
  std::vector<DerivativeSeries> series;  // one per N, ascending
  std::vector<double> peak_growth;       // peak(N_{j+1}) / peak(N_j)
};

/// Central finite differences of order m with second-order accurate stencils
/// on the steady-state rows (full space or sector 0). Throws DomainError for a
/// non-uniform grid or a grid too short for the stencil.
CriticalityReport criticality_order(const SweepResult& result, std::string_view observable, int m);

/// Finite-difference coefficients and offsets of the order-m stencil.
std::vector<std::pair<int, double>> central_stencil(int m);

struct CriticalEstimate {
  double n = 1.0;
  bool interior = false;  // false: no interior gap minimum
  double zeta_grid = 0.0;
  double zeta_refined = 0.0;
  double gap_min = 0.0;
  std::size_t index = 0;
  std::optional<double> derivative_peak;  // argmax |dO/dzeta|
  double discrepancy_steps = 0.0;
  bool flagged = false;  // discrepancy beyond two grid steps
  std::string note;
};

/// Gap minimum with parabolic refinement, cross-checked against the peak of
/// |dO/dzeta| for `observable` when given. A minimum counts as interior when
/// it is not at a grid end and lies below 0.9 times the largest gap on each
/// side. Every finite gap is used, including rows whose steady state failed.
std::vector<CriticalEstimate> estimate_critical_point(const SweepResult& result,
                                                      std::string_view observable = {});

/// Vertex of the parabola through three points.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2);

struct CutoffCheck {
  double n = 1.0;
  double zeta = 0.0;
  std::size_t cutoff = 0;
  std::size_t cutoff_large = 0;
  double gap = 0.0;
  double gap_large = 0.0;
  std::vector<std::pair<std::string, double>> obs_change;  // relative change
  double gap_change = 0.0;                                  // relative change
  bool ok = false;
  std::string error;
};

/// Reruns the grid point of each estimate at a cutoff enlarged by
/// cfg.cutoff_factor. `ok` requires every observable to change by less than
/// `obs_tol` and the gap by less than `gap_tol`, both relative.
std::vector<CutoffCheck> cutoff_convergence(const SweepConfig& cfg, const SweepResult& result,
                                            const std::vector<CriticalEstimate>& estimates,
                                            double obs_tol = 1e-3, double gap_tol = 1e-2);

/// JSON summary written next to the CSV.
std::string report_json(const SweepConfig& cfg, const SweepResult& result,
                        const std::vector<CriticalEstimate>& estimates,
                        const std::optional<CriticalityReport>& criticality,
                        const std::vector<CutoffCheck>& checks);

}  // namespace floquet::sweep
