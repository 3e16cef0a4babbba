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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "floquet/tensor.hpp"

namespace floquet {

/// Loss channel; the rate is folded into the operator (L = sqrt(kappa) a).
struct CollapseOp {
  ComplexMatrix op;
};

/// One superoperator term  rho -> w * exp(i h omega t) * A rho B^dagger.
/// An absent side stands for the identity.
struct FactorTerm {
  std::optional<ComplexMatrix> left;
  std::optional<ComplexMatrix> right;
  Complex weight{1.0, 0.0};
  int harmonic = 0;
};

/// Hamiltonian given as a finite Fourier series  H(t) = sum_k w_k exp(i h_k omega t) O_k.
struct HamiltonianTerm {
  ComplexMatrix op;
  Complex weight{1.0, 0.0};
  int harmonic = 0;
};
using PeriodicHamiltonian = std::vector<HamiltonianTerm>;

/// Evaluates H(t) for period T.
ComplexMatrix evaluate(const PeriodicHamiltonian& h, double t, double period);

/// Diagonal frame R(t) = exp(-i (omega / divisor) diag(numbers) t).
struct FrameRotation {
  std::vector<int> numbers;
  int divisor = 1;
};

/// Time-periodic Liouvillian stored as factor-form terms. Actions are matrix
/// free: left-only and right-only terms are merged per harmonic, two-sided
/// terms are applied as sparse products on the unvectorized state.
class TimePeriodicGenerator {
 public:
  TimePeriodicGenerator(std::size_t dim, double period, std::vector<FactorTerm> terms);

  static TimePeriodicGenerator zero(std::size_t dim, double period);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t vec_dim() const noexcept { return dim_ * dim_; }
  double period() const noexcept { return period_; }
  double omega() const noexcept { return omega_; }
  const std::vector<FactorTerm>& terms() const noexcept { return terms_; }

  /// out = L(t) v. Thread-safe; uses thread-local scratch.
  void apply(double t, std::span<const Complex> v, std::span<Complex> out) const;
  CVector action(double t, std::span<const Complex> v) const;

  /// Materialized superoperator at time t (oracle use only).
  ComplexMatrix dense(double t) const;

  std::vector<int> harmonics() const;
  bool time_independent() const;
  /// Time-independent generator equal to the Fourier coefficient L_h.
  TimePeriodicGenerator fourier_component(int harmonic) const;

  /// The same dynamics expressed for rho_rot = R^dagger rho R. Throws
  /// DomainError when a term's frame harmonic is not an integer.
  TimePeriodicGenerator in_frame(const FrameRotation& frame) const;

  /// Copy that integrates in the given frame; propagation converts back to the
  /// lab frame at the interval ends, so results are frame independent.
  TimePeriodicGenerator with_integration_frame(const FrameRotation& frame) const;
  const FrameRotation* integration_frame() const noexcept { return frame_.get(); }
  const TimePeriodicGenerator* integration_generator() const noexcept {
    return frame_gen_.get();
  }

  /// Phases p with v_lab = p .* v_rot at time t for the integration frame.
  CVector frame_phases(double t) const;

 private:
  struct Block {
    enum class Kind { Left, Right, TwoSided } kind;
    int harmonic;
    Complex weight;
    SparseComplexMatrix left;
    SparseComplexMatrix right;
  };

  void compile();

  std::size_t dim_;
  double period_;
  double omega_;
  std::vector<FactorTerm> terms_;
  std::vector<Block> blocks_;
  std::shared_ptr<const FrameRotation> frame_;
  std::shared_ptr<const TimePeriodicGenerator> frame_gen_;
};

/// D[L] rho = L rho L^dagger - (L^dagger L rho + rho L^dagger L) / 2.
ComplexMatrix dissipator_action(const CollapseOp& l, const ComplexMatrix& rho);

/// Factor terms of -i[H, .] + sum_j D[L_j].
std::vector<FactorTerm> lindblad_terms(const ComplexMatrix& h, const std::vector<CollapseOp>& ls);

/// Dense column-stacking Liouvillian. Throws DomainError for non-Hermitian H.
ComplexMatrix liouvillian_dense(const ComplexMatrix& h, const std::vector<CollapseOp>& ls);

/// Time-independent generator wrapped with the given period.
TimePeriodicGenerator liouvillian(const ComplexMatrix& h, const std::vector<CollapseOp>& ls,
                                  double period);

TimePeriodicGenerator time_dependent_liouvillian(const PeriodicHamiltonian& h,
                                                 const std::vector<CollapseOp>& ls, double period);

struct OhmicBath {
  double kappa;
  double omega_ref;
  OhmicBath(double kappa, double omega_ref);
  /// kappa * omega / omega_ref for omega > 0.
  double rate(double omega) const;
};

/// Dressed-basis system data for the generalized master equation.
struct DressedSystem {
  std::vector<double> energies;  // ascending, size M
  ComplexMatrix coupling;        // <j| Q |k> for the bath coupling Q, M x M
};

struct GmeDrive {
  double amplitude;
  double frequency;
};

/// Positive-frequency part  sum_{j<k, E_k - E_j > tol} Q_jk |j><k|.
ComplexMatrix positive_frequency_part(const DressedSystem& sys, double degeneracy_tol);

/// L0 + L(+1) e^{i w t} + L(-1) e^{-i w t} with the non-secular zero-temperature
/// dissipator and drive commutators -i F [X^{+-}, rho].
TimePeriodicGenerator gme_generator(const DressedSystem& sys, const OhmicBath& bath,
                                    const GmeDrive& drive);

}  // namespace floquet
