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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "floquet/integrator.hpp"
#include "floquet/lindblad.hpp"
#include "floquet/tensor.hpp"

namespace floquet {

struct ArnoldiConfig {
  std::size_t m = 30;            // Krylov subspace dimension
  std::size_t k = 6;             // requested eigenpairs
  double tol = 1e-8;             // residual tolerance
  std::size_t max_restarts = 50;
  std::size_t keep = 0;          // Ritz vectors kept on restart; 0 means k
  std::uint64_t seed = 0x5eed;   // start vector for non-trivial sectors
  bool verify_residuals = true;  // recompute |U v - eps v| explicitly
  /// Periods per Krylov application. For p > 1 the iteration runs on U^p and
  /// each eigenvalue is recovered as the Rayleigh quotient of one period.
  std::size_t periods = 1;

  void validate() const;
};

struct FloquetJob {
  std::shared_ptr<const TimePeriodicGenerator> generator;
  double anchor = 0.0;
  IntegratorConfig integrator;
  ArnoldiConfig arnoldi;

  double period() const { return generator->period(); }
  void validate() const;
};

/// Weak Z_n symmetry generated by U = exp(-2 pi i N / n), N = diag(numbers).
struct SymmetrySpec {
  int order = 2;
  std::vector<int> numbers;

  ComplexMatrix unitary() const;
  /// Eigenvalue of S rho = U rho U^dagger on each vectorized basis element.
  CVector superoperator_phases() const;
  /// Sector label (n_p - n_q) mod n of each vectorized basis element.
  std::vector<int> labels() const;
};

struct SectorRequest {
  SymmetrySpec symmetry;
  int index = 0;
};

struct FloquetSpectrum {
  std::vector<Complex> eigenvalues;         // ordered, see eigen_order_less
  std::vector<ComplexMatrix> eigenmatrices;  // unit Frobenius norm, phase fixed
  std::vector<double> residuals;
  std::optional<int> sector;
  double period = 0.0;
  bool converged = false;
  std::size_t restarts = 0;
  std::size_t applications = 0;

  /// log(eps_j) / T on the principal branch.
  std::vector<Complex> rates() const;
};

/// Total order: |eps| descending, then Re descending, then |Im| ascending,
/// then Im descending.
bool eigen_order_less(Complex a, Complex b);
void sort_eigenvalues(std::vector<Complex>& values);

/// Linear map y = A x on vectors of fixed length.
using LinearMap = std::function<void(std::span<const Complex>, std::span<Complex>)>;

struct KrylovResult {
  std::vector<Complex> values;
  std::vector<CVector> vectors;  // unit 2-norm
  std::vector<double> ritz_residuals;
  std::size_t restarts = 0;
  std::size_t applications = 0;
  bool converged = false;
};

/// Krylov-Schur restarted Arnoldi for the dominant eigenpairs of `op`.
/// Modified Gram-Schmidt with one reorthogonalization pass; Ritz values are
/// ordered with eigen_order_less. Does not throw on non-convergence; the
/// caller inspects `converged`.
KrylovResult krylov_schur(const LinearMap& op, std::size_t n, std::span<const Complex> start,
                          const ArnoldiConfig& cfg);

ComplexMatrix propagate_period(const FloquetJob& job, const ComplexMatrix& rho0);

/// Index sets of the vectorized basis per sector d = 0..n-1.
std::vector<std::vector<std::size_t>> sector_decompose(const SymmetrySpec& spec, std::size_t dim);

/// Max relative deviation of S(L(t) v) from L(t)(S v) over random v and sampled t.
double symmetry_commutation_error(const TimePeriodicGenerator& gen, const SymmetrySpec& spec,
                                  std::uint64_t seed = 7);

/// Dominant Floquet eigenpairs. Residuals are always those of the one-period
/// map. Throws ConvergenceError after max restarts and
/// DomainError when a requested sector is not a symmetry of the generator.
FloquetSpectrum arnoldi_eigs(const FloquetJob& job,
                             const std::optional<SectorRequest>& sector = std::nullopt,
                             std::span<const Complex> start = {});

struct SteadyState {
  ComplexMatrix rho;
  double min_eigenvalue = 0.0;
};

/// Unit-trace Hermitian part of the leading eigenmatrix. When that matrix is
/// traceless and several eigenvalues lie within tolerance of 1, the identity
/// is projected onto their span instead. Warns below -1e-7, throws DomainError below -1e-3 or for a
/// vanishing trace.
SteadyState steady_state_checked(const FloquetSpectrum& spectrum);
ComplexMatrix steady_state(const FloquetSpectrum& spectrum);

/// (1/T) int Tr[rho(t) O] dt over one period by uniform sampling; K doubles
/// until the K and 2K rules agree to 1e-6 relative (K <= 256).
Complex period_average(const FloquetJob& job, const ComplexMatrix& rho_ss, const ComplexMatrix& o,
                       std::size_t k = 32);

/// |eps_1 - eps_0|.
double gap(const FloquetSpectrum& spectrum);

/// Ordered product of expm(L(t_k) dt) over midpoint-sampled sub-intervals.
ComplexMatrix dense_oracle(const TimePeriodicGenerator& gen, std::size_t steps = 1024,
                           double anchor = 0.0);

/// Smallest eigenvalue of the Choi matrix of a superoperator acting on
/// column-stacked D x D matrices.
double choi_min_eigenvalue(const ComplexMatrix& superop);

/// Phase convention for eigenmatrices: real positive trace when the trace is
/// non-negligible, else real positive largest-magnitude entry.
void fix_eigenmatrix_phase(ComplexMatrix& eta);

}  // namespace floquet
