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

#include "floquet/qops.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "floquet/errors.hpp"

namespace floquet::qops {

FockSpace::FockSpace(std::size_t cutoff) : cutoff_(cutoff) {
  if (cutoff < 2) throw DomainError("FockSpace: cutoff must be >= 2");
}

CompositeSpace::CompositeSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DomainError("CompositeSpace: no factors");
  for (const auto& f : factors_) dim_ *= std::visit([](const auto& s) { return s.dim(); }, f);
}

std::size_t CompositeSpace::factor_dim(std::size_t slot) const {
  return std::visit([](const auto& s) { return s.dim(); }, factors_.at(slot));
}

std::vector<int> CompositeSpace::boson_numbers() const {
  std::vector<int> numbers(dim_, 0);
  std::size_t stride = dim_;
  for (const auto& f : factors_) {
    const std::size_t d = std::visit([](const auto& s) { return s.dim(); }, f);
    stride /= d;
    if (std::holds_alternative<FockSpace>(f)) {
      for (std::size_t idx = 0; idx < dim_; ++idx)
        numbers[idx] += static_cast<int>((idx / stride) % d);
    }
  }
  return numbers;
}

ComplexMatrix destroy(const FockSpace& space) {
  const std::size_t n = space.cutoff();
  ComplexMatrix a(n, n);
  for (std::size_t k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

ComplexMatrix create(const FockSpace& space) { return destroy(space).adjoint(); }

ComplexMatrix number(const FockSpace& space) {
  ComplexMatrix n(space.cutoff(), space.cutoff());
  for (std::size_t k = 0; k < space.cutoff(); ++k) n(k, k) = static_cast<double>(k);
  return n;
}

ComplexMatrix pauli(Pauli which) {
  const Complex i{0.0, 1.0};
  switch (which) {
    case Pauli::X:
      return {{0.0, 1.0}, {1.0, 0.0}};
    case Pauli::Y:
      return {{0.0, -i}, {i, 0.0}};
    case Pauli::Z:
      return {{1.0, 0.0}, {0.0, -1.0}};
    case Pauli::Plus:
      return {{0.0, 1.0}, {0.0, 0.0}};
    case Pauli::Minus:
      return {{0.0, 0.0}, {1.0, 0.0}};
  }
  throw DomainError("pauli: unknown operator");
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t slot, const CompositeSpace& space) {
  if (slot >= space.size()) throw DimensionError("embed: slot out of range");
  if (!op.is_square() || op.rows() != space.factor_dim(slot))
    throw DimensionError("embed: operator dimension " + std::to_string(op.rows()) +
                         " does not match factor dimension " +
                         std::to_string(space.factor_dim(slot)));
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (std::size_t s = 0; s < space.size(); ++s) {
    out = kron(out, s == slot ? op : ComplexMatrix::identity(space.factor_dim(s)));
  }
  return out;
}

void fix_phases(ComplexMatrix& vectors) {
  for (std::size_t c = 0; c < vectors.cols(); ++c) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t r = 0; r < vectors.rows(); ++r) {
      // Strict comparison with a relative margin keeps the choice stable when
      // two components have equal magnitude up to rounding.
      const double a = std::abs(vectors(r, c));
      if (a > best_abs * (1.0 + 1e-12)) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs <= 0.0) continue;
    const Complex phase = std::conj(vectors(best, c)) / best_abs;
    for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, c) *= phase;
    vectors(best, c) = Complex(std::abs(vectors(best, c)), 0.0);
  }
}

DressedBasis dressed_basis(const ComplexMatrix& h, std::size_t m, double herm_tol) {
  if (!h.is_square()) throw DomainError("dressed_basis: matrix is not square");
  if (!h.is_hermitian(herm_tol))
    throw DomainError("dressed_basis: Hamiltonian is not Hermitian (error " +
                      std::to_string(h.hermiticity_error()) + ")");
  if (m > h.rows()) throw DimensionError("dressed_basis: requested more levels than dim(H)");
  const EigenMatrix herm = 0.5 * (h.to_eigen() + h.to_eigen().adjoint());
  Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(herm);
  if (solver.info() != Eigen::Success) throw DomainError("dressed_basis: eigensolver failed");
  DressedBasis out;
  out.energies.resize(m);
  out.vectors = ComplexMatrix(h.rows(), m);
  for (std::size_t k = 0; k < m; ++k) {
    out.energies[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    for (std::size_t r = 0; r < h.rows(); ++r)
      out.vectors(r, k) =
          solver.eigenvectors()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
  }
  fix_phases(out.vectors);
  return out;
}

}  // namespace floquet::qops
