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
#include <string_view>
#include <vector>

#include "floquet/floquet.hpp"
#include "floquet/lindblad.hpp"
#include "floquet/qops.hpp"

namespace floquet::models {

// All rates and frequencies are in units of the single-photon loss rate.

struct KerrParams {
  double omega0 = 50.0;
  double u_tilde = 10.0;
  double f_tilde = 1.0;
  double omega_d = 130.0;
  int n = 1;
  double kappa = 1.0;
  double eta = 0.0;
  double thermo_n = 1.0;
  std::size_t cutoff = 20;

  double detuning() const { return omega0 - omega_d / n; }
  double period() const;
  void validate() const;
};

struct ThermoScaled {
  double u;
  double f;
};

/// U = U~/N; F1 = F~1 sqrt(N) for n = 1, F2 = F~2 for n = 2.
ThermoScaled rescale_thermo(const KerrParams& p);

/// Frame used to integrate the full Kerr model. `Auto` picks whichever of the
/// lab frame and the frame rotating at omega_d / n has the smaller spread of
/// diagonal energies; results are mapped back to the lab frame either way.
enum class KerrFrame { Lab, Rotating, Auto };

PeriodicHamiltonian kerr_hamiltonian(const KerrParams& p);
std::vector<CollapseOp> kerr_collapse_ops(const KerrParams& p);
TimePeriodicGenerator kerr_full(const KerrParams& p, KerrFrame frame = KerrFrame::Auto);
ComplexMatrix kerr_rwa_hamiltonian(const KerrParams& p);
TimePeriodicGenerator kerr_rwa(const KerrParams& p);
SymmetrySpec kerr_symmetry(const KerrParams& p);

enum class RabiVariant { Jcm, QrmGme };

/// `Literal` keeps H_JCM - omega_d a^dagger a + F (a + a^dagger) as written,
/// `Drive` also subtracts omega_d sigma_z / 2 so both subsystems sit in the
/// frame rotating at omega_d.
enum class JcmFrame { Literal, Drive };

struct RabiParams {
  double omega_c = 50.0;
  double omega_q = 50.0;
  double g = 10.0;
  double f = 5.0;
  double omega_d = 50.0;
  double kappa = 1.0;
  std::size_t cutoff = 40;
  std::size_t m = 0;  // dressed levels; 0 selects the converged count
  RabiVariant variant = RabiVariant::Jcm;
  JcmFrame jcm_frame = JcmFrame::Literal;

  double f_tilde() const { return 2.0 * f / g; }
  double period() const;
  void validate() const;
};

/// TLS (x) Fock space of the Rabi-type models.
qops::CompositeSpace rabi_space(const RabiParams& p);

ComplexMatrix jcm_hamiltonian(const RabiParams& p);
TimePeriodicGenerator jcm_total(const RabiParams& p);
ComplexMatrix qrm_hamiltonian(const RabiParams& p);

struct QrmDressed {
  qops::DressedBasis basis;  // M lowest levels
  DressedSystem system;      // energies and <j| i(a - a^dagger) |k>
  std::size_t converged_levels = 0;
};

/// Smallest M >= 12 covering all energy-converged levels (shift below
/// 1e-6 omega_c when the cutoff grows by 25%), never splitting a degenerate
/// block. An explicit p.m is validated against the converged count.
QrmDressed qrm_dressed(const RabiParams& p);

struct DriveOps {
  ComplexMatrix x_plus;
  ComplexMatrix x_minus;
  ComplexMatrix out_plus;   // frequency-weighted output field
  ComplexMatrix out_minus;
};

DriveOps qrm_drive_ops(const QrmDressed& d, const RabiParams& p);
DriveOps qrm_drive_ops(const RabiParams& p);
TimePeriodicGenerator qrm_gme(const QrmDressed& d, const RabiParams& p);
TimePeriodicGenerator qrm_gme(const RabiParams& p);

enum class ObservableKind { PhotonNumber, OutputField };
ObservableKind parse_observable(std::string_view name);

ComplexMatrix observable(ObservableKind kind, const KerrParams& p);
ComplexMatrix observable(ObservableKind kind, const RabiParams& p);
ComplexMatrix observable(ObservableKind kind, const QrmDressed& d, const RabiParams& p);

}  // namespace floquet::models
