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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include "floquet/errors.hpp"
#include "floquet/sweep.hpp"
#include "point.hpp"

namespace floquet::sweep {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t scaled(std::size_t cutoff, double scale) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(cutoff) * scale - 1e-9));
}

}  // namespace

PointModel build_point(const SweepConfig& cfg, double zeta, double n, double cutoff_scale) {
  if (!(cutoff_scale >= 1.0)) throw DomainError("build_point: cutoff scale must be >= 1");
  detail::PointParams pp = detail::point_params(cfg, zeta, n);
  PointModel out;
  if (detail::is_kerr(cfg.model)) {
    auto& k = pp.kerr;
    k.cutoff = scaled(k.cutoff, cutoff_scale);
    out.cutoff = k.cutoff;
    out.generator = std::make_shared<const TimePeriodicGenerator>(
        cfg.model == ModelKind::KerrFull ? models::kerr_full(k, cfg.kerr_frame)
                                         : models::kerr_rwa(k));
    if (k.n >= 2) out.symmetry = models::kerr_symmetry(k);
    for (const auto& name : cfg.observables) {
      ComplexMatrix o = models::observable(models::ObservableKind::PhotonNumber, k);
      if (name == "photon_density") o *= 1.0 / n;
      out.observables.push_back(std::move(o));
    }
  } else {
    auto& r = pp.rabi;
    r.cutoff = scaled(r.cutoff, cutoff_scale);
    out.cutoff = r.cutoff;
    if (cfg.model == ModelKind::Jcm) {
      out.generator = std::make_shared<const TimePeriodicGenerator>(models::jcm_total(r));
      for (const auto& name : cfg.observables) {
        (void)name;
        out.observables.push_back(models::observable(models::ObservableKind::PhotonNumber, r));
      }
    } else {
      // A fixed M refers to the working cutoff; enlarged cutoffs keep it.
      const models::QrmDressed d = models::qrm_dressed(r);
      out.generator = std::make_shared<const TimePeriodicGenerator>(models::qrm_gme(d, r));
      for (const auto& name : cfg.observables) {
        const auto kind = name == "output_field" ? models::ObservableKind::OutputField
                                                 : models::ObservableKind::PhotonNumber;
        out.observables.push_back(models::observable(kind, d, r));
      }
    }
  }
  return out;
}

std::vector<Row> run_point(const SweepConfig& cfg, std::size_t grid_index, std::size_t n_index,
                           const Sector& sector, double cutoff_scale, std::string* error) {
  const auto start = std::chrono::steady_clock::now();
  const double zeta = cfg.grid.at(grid_index);
  const double n = cfg.thermo_n.at(n_index);

  Row base;
  base.zeta_name = cfg.var;
  base.zeta_value = zeta;
  base.n = n;
  base.sector = sector;
  base.eps0 = base.eps1 = Complex(kNaN, kNaN);
  base.gap = base.obs_value = base.residual = kNaN;

  std::vector<Row> rows;
  const auto emit = [&](const std::vector<double>& values) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    base.wall_s = wall;
    if (cfg.observables.empty()) {
      rows.push_back(base);
      return;
    }
    for (std::size_t i = 0; i < cfg.observables.size(); ++i) {
      Row r = base;
      r.obs_name = cfg.observables[i];
      r.obs_value = i < values.size() ? values[i] : kNaN;
      rows.push_back(std::move(r));
    }
  };

  try {
    const PointModel pm = build_point(cfg, zeta, n, cutoff_scale);
    base.cutoff = pm.cutoff;
    FloquetJob job{pm.generator, 0.0, cfg.integrator, cfg.arnoldi};
    const int sector_tag = sector ? *sector + 1 : 0;
    job.arnoldi.seed = mix(cfg.seed ^ mix(grid_index * 0x10001ULL + n_index * 0x101ULL +
                                          static_cast<std::uint64_t>(sector_tag)));
    std::optional<SectorRequest> request;
    if (sector) {
      if (!pm.symmetry) throw DomainError("model has no Z_n symmetry");
      request = SectorRequest{*pm.symmetry, *sector};
    }
    const FloquetSpectrum spec = arnoldi_eigs(job, request);
    base.eps0 = spec.eigenvalues.at(0);
    if (spec.eigenvalues.size() > 1) {
      base.eps1 = spec.eigenvalues[1];
      base.gap = gap(spec);
    }
    base.residual = *std::max_element(spec.residuals.begin(),
                                      spec.residuals.begin() +
                                          static_cast<std::ptrdiff_t>(
                                              std::min<std::size_t>(2, spec.residuals.size())));
    std::vector<double> values;
    if (!sector || *sector == 0) {
      const ComplexMatrix rho = steady_state(spec);
      for (const auto& o : pm.observables) values.push_back(period_average(job, rho, o).real());
    }
    base.converged = spec.converged;
    emit(values);
  } catch (const std::exception& e) {
    base.converged = false;
    if (error) *error = e.what();
    emit({});
  }
  return rows;
}

SweepResult run_sweep(const SweepConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  struct Job {
    std::size_t grid, n;
    Sector sector;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cfg.grid.size(); ++i)
    for (std::size_t j = 0; j < cfg.thermo_n.size(); ++j) {
      if (cfg.sectors.empty()) {
        jobs.push_back({i, j, std::nullopt});
      } else {
        for (const int s : cfg.sectors) jobs.push_back({i, j, s});
      }
    }

  std::vector<std::vector<Row>> slots(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  const auto worker = [&] {
    for (std::size_t idx = next++; idx < jobs.size(); idx = next++) {
      const Job& jb = jobs[idx];
      slots[idx] = run_point(cfg, jb.grid, jb.n, jb.sector, 1.0, &errors[idx]);
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, jobs.size());
      }
    }
  };
  const std::size_t nthreads = std::min(cfg.workers, jobs.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  out.jobs = jobs.size();
  for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
    if (!slots[idx].empty() && !slots[idx].front().converged) {
      ++out.failed_jobs;
      const Job& jb = jobs[idx];
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s = %.10g, N = %.10g", cfg.var.c_str(), cfg.grid[jb.grid],
                    cfg.thermo_n[jb.n]);
      std::string where = buf;
      if (jb.sector) where += ", sector " + std::to_string(*jb.sector);
      out.errors.push_back(where + ": " + (errors[idx].empty() ? "not converged" : errors[idx]));
    }
    for (auto& r : slots[idx]) out.rows.push_back(std::move(r));
  }
  return out;
}

std::vector<CutoffCheck> cutoff_convergence(const SweepConfig& cfg, const SweepResult& result,
                                            const std::vector<CriticalEstimate>& estimates,
                                            double obs_tol, double gap_tol) {
  std::vector<CutoffCheck> out;
  const Sector sector = cfg.sectors.empty() ? Sector{} : Sector{0};
  for (const auto& est : estimates) {
    CutoffCheck c;
    c.n = est.n;
    c.zeta = est.zeta_grid;
    const auto gi = static_cast<std::size_t>(
        std::find(cfg.grid.begin(), cfg.grid.end(), est.zeta_grid) - cfg.grid.begin());
    const auto ni = static_cast<std::size_t>(
        std::find(cfg.thermo_n.begin(), cfg.thermo_n.end(), est.n) - cfg.thermo_n.begin());
    if (gi >= cfg.grid.size() || ni >= cfg.thermo_n.size()) {
      c.error = "estimate does not match a grid point";
      out.push_back(std::move(c));
      continue;
    }
    std::vector<const Row*> small;
    for (const Row& r : result.rows)
      if (r.zeta_value == est.zeta_grid && r.n == est.n && r.sector == sector) small.push_back(&r);
    std::string err;
    const std::vector<Row> large = run_point(cfg, gi, ni, sector, cfg.cutoff_factor, &err);
    if (small.empty() || large.empty() || !large.front().converged || !small.front()->converged) {
      c.error = err.empty() ? "reference or enlarged run did not converge" : err;
      out.push_back(std::move(c));
      continue;
    }
    c.cutoff = small.front()->cutoff;
    c.cutoff_large = large.front().cutoff;
    c.gap = small.front()->gap;
    c.gap_large = large.front().gap;
    c.gap_change = std::abs(c.gap_large - c.gap) / std::max(std::abs(c.gap_large), 1e-300);
    c.ok = c.gap_change <= gap_tol;
    for (std::size_t i = 0; i < large.size() && i < small.size(); ++i) {
      if (large[i].obs_name.empty()) continue;
      const double a = small[i]->obs_value, b = large[i].obs_value;
      const double rel = std::abs(b - a) / std::max(std::abs(b), 1e-12);
      c.obs_change.emplace_back(large[i].obs_name, rel);
      if (!(rel <= obs_tol)) c.ok = false;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace floquet::sweep
