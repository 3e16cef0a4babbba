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

#include "floquet/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "floquet/errors.hpp"

namespace floquet::models {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMinDressedLevels = 12;

ComplexMatrix matrix_power(const ComplexMatrix& a, int n) {
  ComplexMatrix out = ComplexMatrix::identity(a.rows());
  for (int i = 0; i < n; ++i) out = out * a;
  return out;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

std::vector<int> fock_numbers(std::size_t cutoff) {
  std::vector<int> out(cutoff);
  for (std::size_t i = 0; i < cutoff; ++i) out[i] = static_cast<int>(i);
  return out;
}

// Spread of w n + (U/2) n (n - 1) over the retained Fock levels; it bounds the
// fastest coherence frequency the integrator has to resolve.
double diagonal_spread(const KerrParams& p, double w) {
  const double u = rescale_thermo(p).u;
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < p.cutoff; ++k) {
    const double n = static_cast<double>(k);
    const double e = w * n + 0.5 * u * n * (n - 1.0);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return hi - lo;
}

}  // namespace

double KerrParams::period() const { return kTwoPi / omega_d; }

void KerrParams::validate() const {
  if (n != 1 && n != 2) throw DomainError("KerrParams: drive order n must be 1 or 2");
  require_positive(kappa, "KerrParams: kappa");
  require_positive(thermo_n, "KerrParams: N");
  require_positive(omega_d, "KerrParams: omega_d");
  if (eta < 0.0) throw DomainError("KerrParams: eta must be non-negative");
  if (cutoff < 2) throw DomainError("KerrParams: cutoff must be >= 2");
}

ThermoScaled rescale_thermo(const KerrParams& p) {
  if (p.n != 1 && p.n != 2) throw DomainError("rescale_thermo: drive order n must be 1 or 2");
  require_positive(p.thermo_n, "rescale_thermo: N");
  const double u = p.u_tilde / p.thermo_n;
  const double f = p.n == 1 ? p.f_tilde * std::sqrt(p.thermo_n) : p.f_tilde;
  return {u, f};
}

PeriodicHamiltonian kerr_hamiltonian(const KerrParams& p) {
  p.validate();
  const auto [u, f] = rescale_thermo(p);
  const qops::FockSpace space(p.cutoff);
  const ComplexMatrix a = qops::destroy(space);
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix an = matrix_power(a, p.n);
  const ComplexMatrix drive = an + an.adjoint();
  PeriodicHamiltonian h;
  h.push_back({Complex(p.omega0) * (ad * a) + Complex(u / 2) * (ad * ad * a * a), 1.0, 0});
  // 2 F cos(w t) = F e^{iwt} + F e^{-iwt}
  h.push_back({drive, f, +1});
  h.push_back({drive, f, -1});
  return h;
}

std::vector<CollapseOp> kerr_collapse_ops(const KerrParams& p) {
  p.validate();
  const ComplexMatrix a = qops::destroy(qops::FockSpace(p.cutoff));
  std::vector<CollapseOp> ls{{Complex(std::sqrt(p.kappa)) * a}};
  if (p.eta > 0.0) ls.push_back({Complex(std::sqrt(p.eta)) * matrix_power(a, p.n)});
  return ls;
}

TimePeriodicGenerator kerr_full(const KerrParams& p, KerrFrame frame) {
  TimePeriodicGenerator gen =
      time_dependent_liouvillian(kerr_hamiltonian(p), kerr_collapse_ops(p), p.period());
  const bool rotate =
      frame == KerrFrame::Rotating ||
      (frame == KerrFrame::Auto && diagonal_spread(p, p.detuning()) < diagonal_spread(p, p.omega0));
  if (!rotate) return gen;
  return gen.with_integration_frame({fock_numbers(p.cutoff), p.n});
}

ComplexMatrix kerr_rwa_hamiltonian(const KerrParams& p) {
  p.validate();
  const auto [u, f] = rescale_thermo(p);
  const ComplexMatrix a = qops::destroy(qops::FockSpace(p.cutoff));
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix an = matrix_power(a, p.n);
  return Complex(p.detuning()) * (ad * a) + Complex(u / 2) * (ad * ad * a * a) +
         Complex(f) * (an + an.adjoint());
}

TimePeriodicGenerator kerr_rwa(const KerrParams& p) {
  return liouvillian(kerr_rwa_hamiltonian(p), kerr_collapse_ops(p), p.period());
}

SymmetrySpec kerr_symmetry(const KerrParams& p) {
  p.validate();
  if (p.n < 2) throw DomainError("kerr_symmetry: the n = 1 model has no Z_n symmetry");
  return {p.n, fock_numbers(p.cutoff)};
}

double RabiParams::period() const { return kTwoPi / omega_d; }

void RabiParams::validate() const {
  require_positive(omega_c, "RabiParams: omega_c");
  require_positive(omega_q, "RabiParams: omega_q");
  require_positive(omega_d, "RabiParams: omega_d");
  require_positive(kappa, "RabiParams: kappa");
  if (g < 0.0) throw DomainError("RabiParams: g must be non-negative");
  if (cutoff < 2) throw DomainError("RabiParams: cutoff must be >= 2");
  if (m == 1) throw DomainError("RabiParams: M must be >= 2");
}

qops::CompositeSpace rabi_space(const RabiParams& p) {
  return qops::CompositeSpace({qops::TwoLevel{}, qops::FockSpace(p.cutoff)});
}

ComplexMatrix jcm_hamiltonian(const RabiParams& p) {
  p.validate();
  const auto space = rabi_space(p);
  const ComplexMatrix a = qops::embed(qops::destroy(qops::FockSpace(p.cutoff)), 1, space);
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix sz = qops::embed(qops::pauli(qops::Pauli::Z), 0, space);
  const ComplexMatrix sp = qops::embed(qops::pauli(qops::Pauli::Plus), 0, space);
  const ComplexMatrix sm = qops::embed(qops::pauli(qops::Pauli::Minus), 0, space);
  double qubit = p.omega_q / 2;
  if (p.jcm_frame == JcmFrame::Drive) qubit -= p.omega_d / 2;
  return Complex(p.omega_c - p.omega_d) * (ad * a) + Complex(qubit) * sz +
         Complex(p.g) * (sp * a + sm * ad) + Complex(p.f) * (a + ad);
}

TimePeriodicGenerator jcm_total(const RabiParams& p) {
  const auto space = rabi_space(p);
  const ComplexMatrix a = qops::embed(qops::destroy(qops::FockSpace(p.cutoff)), 1, space);
  return liouvillian(jcm_hamiltonian(p), {{Complex(std::sqrt(p.kappa)) * a}}, p.period());
}

ComplexMatrix qrm_hamiltonian(const RabiParams& p) {
  p.validate();
  const auto space = rabi_space(p);
  const ComplexMatrix a = qops::embed(qops::destroy(qops::FockSpace(p.cutoff)), 1, space);
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix sz = qops::embed(qops::pauli(qops::Pauli::Z), 0, space);
  const ComplexMatrix sx = qops::embed(qops::pauli(qops::Pauli::X), 0, space);
  return Complex(p.omega_c) * (ad * a) + Complex(p.omega_q / 2) * sz +
         Complex(p.g) * ((a + ad) * sx);
}

QrmDressed qrm_dressed(const RabiParams& p) {
  p.validate();
  const ComplexMatrix h = qrm_hamiltonian(p);
  RabiParams bigger = p;
  bigger.cutoff = p.cutoff + (p.cutoff + 3) / 4;
  const std::size_t dim = h.rows();
  const auto lo = qops::dressed_basis(h, dim);
  const auto hi = qops::dressed_basis(qrm_hamiltonian(bigger), dim);
  std::size_t converged = 0;
  while (converged < dim &&
         std::abs(lo.energies[converged] - hi.energies[converged]) < 1e-6 * p.omega_c)
    ++converged;

  std::size_t m = p.m;
  if (m == 0) {
    m = std::max(converged, kMinDressedLevels);
  } else if (m > converged) {
    throw DomainError("qrm_dressed: M = " + std::to_string(m) + " exceeds the " +
                      std::to_string(converged) + " converged levels at cutoff " +
                      std::to_string(p.cutoff));
  }
  if (m > converged)
    throw DomainError("qrm_dressed: only " + std::to_string(converged) +
                      " levels converged at cutoff " + std::to_string(p.cutoff) +
                      "; raise the cutoff");
  const double degeneracy = 1e-9 * p.omega_c;
  while (m < converged && lo.energies[m] - lo.energies[m - 1] <= degeneracy) ++m;
  if (m < dim && lo.energies[m] - lo.energies[m - 1] <= degeneracy)
    throw DomainError("qrm_dressed: M splits a degenerate block at the convergence edge");

  QrmDressed out;
  out.converged_levels = converged;
  out.basis = qops::dressed_basis(h, m);
  const auto space = rabi_space(p);
  const ComplexMatrix a = qops::embed(qops::destroy(qops::FockSpace(p.cutoff)), 1, space);
  const ComplexMatrix q = Complex(0.0, 1.0) * (a - a.adjoint());
  out.system.energies = out.basis.energies;
  out.system.coupling = out.basis.vectors.adjoint() * q * out.basis.vectors;
  return out;
}

DriveOps qrm_drive_ops(const QrmDressed& d, const RabiParams& p) {
  const double tol = 1e-9 * p.omega_c;
  DriveOps ops;
  ops.x_plus = positive_frequency_part(d.system, tol);
  ops.x_minus = ops.x_plus.adjoint();
  const std::size_t m = d.system.energies.size();
  ops.out_plus = ComplexMatrix(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j + 1; k < m; ++k) {
      const double w = d.system.energies[k] - d.system.energies[j];
      if (w > tol) ops.out_plus(j, k) = Complex(0.0, -w / p.omega_c) * d.system.coupling(j, k);
    }
  ops.out_minus = ops.out_plus.adjoint();
  return ops;
}

DriveOps qrm_drive_ops(const RabiParams& p) { return qrm_drive_ops(qrm_dressed(p), p); }

TimePeriodicGenerator qrm_gme(const QrmDressed& d, const RabiParams& p) {
  if (p.variant != RabiVariant::QrmGme) throw DomainError("qrm_gme: variant must be QRM-GME");
  return gme_generator(d.system, OhmicBath(p.kappa, p.omega_c), {p.f, p.omega_d});
}

TimePeriodicGenerator qrm_gme(const RabiParams& p) { return qrm_gme(qrm_dressed(p), p); }

ObservableKind parse_observable(std::string_view name) {
  if (name == "photon_number") return ObservableKind::PhotonNumber;
  if (name == "output_field") return ObservableKind::OutputField;
  throw DomainError("unknown observable '" + std::string(name) + "'");
}

ComplexMatrix observable(ObservableKind kind, const KerrParams& p) {
  if (kind == ObservableKind::OutputField)
    throw DomainError("observable: output_field is defined for the Rabi models only");
  return qops::number(qops::FockSpace(p.cutoff));
}

ComplexMatrix observable(ObservableKind kind, const RabiParams& p) {
  if (p.variant == RabiVariant::QrmGme) return observable(kind, qrm_dressed(p), p);
  if (kind == ObservableKind::OutputField)
    throw DomainError("observable: output_field requires the dressed QRM-GME model");
  return qops::embed(qops::number(qops::FockSpace(p.cutoff)), 1, rabi_space(p));
}

ComplexMatrix observable(ObservableKind kind, const QrmDressed& d, const RabiParams& p) {
  if (kind == ObservableKind::OutputField) {
    const DriveOps ops = qrm_drive_ops(d, p);
    return ops.out_minus * ops.out_plus;
  }
  const ComplexMatrix n = qops::embed(qops::number(qops::FockSpace(p.cutoff)), 1, rabi_space(p));
  return d.basis.vectors.adjoint() * n * d.basis.vectors;
}

}  // namespace floquet::models
