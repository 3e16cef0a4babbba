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
#include <variant>
#include <vector>

#include "floquet/tensor.hpp"

namespace floquet::qops {

/// Truncated bosonic mode with states |0> .. |cutoff-1>.
class FockSpace {
 public:
  explicit FockSpace(std::size_t cutoff);
  std::size_t cutoff() const noexcept { return cutoff_; }
  std::size_t dim() const noexcept { return cutoff_; }

 private:
  std::size_t cutoff_;
};

/// Spin-1/2 factor, basis (|e>, |g>) so that sigma_z = diag(1, -1).
struct TwoLevel {
  std::size_t dim() const noexcept { return 2; }
};

using Factor = std::variant<TwoLevel, FockSpace>;

/// Ordered tensor product; slot 0 is the leftmost Kronecker factor.
class CompositeSpace {
 public:
  explicit CompositeSpace(std::vector<Factor> factors);
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return factors_.size(); }
  std::size_t factor_dim(std::size_t slot) const;
  const Factor& factor(std::size_t slot) const { return factors_.at(slot); }
  /// Photon number of each basis state (sum over Fock factors); used to label
  /// weak-symmetry sectors.
  std::vector<int> boson_numbers() const;

 private:
  std::vector<Factor> factors_;
  std::size_t dim_ = 1;
};

ComplexMatrix destroy(const FockSpace& space);
ComplexMatrix create(const FockSpace& space);
ComplexMatrix number(const FockSpace& space);

enum class Pauli { X, Y, Z, Plus, Minus };
ComplexMatrix pauli(Pauli which);

/// Identity on every factor but `slot`.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t slot, const CompositeSpace& space);

struct DressedBasis {
  std::vector<double> energies;  // ascending
  ComplexMatrix vectors;         // columns are eigenvectors, dim x M
};

/// Lowest M eigenpairs of a Hermitian matrix, energies ascending. Each vector
/// is phase-fixed so that its largest-magnitude component is real positive;
/// exactly degenerate blocks come out orthonormal but otherwise arbitrary.
DressedBasis dressed_basis(const ComplexMatrix& h, std::size_t m, double herm_tol = 1e-10);

/// Applies the phase convention above to each column in place.
void fix_phases(ComplexMatrix& vectors);

}  // namespace floquet::qops
