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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace floquet {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using EigenRowMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, CVector entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix from_eigen(const EigenMatrix& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  Eigen::Map<EigenRowMatrix> eigen();
  Eigen::Map<const EigenRowMatrix> eigen() const;
  EigenMatrix to_eigen() const { return eigen(); }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  Complex trace() const;
  double norm_fro() const;
  double max_abs() const;
  /// max |A - A^dagger|
  double hermiticity_error() const;
  bool is_hermitian(double tol) const { return hermiticity_error() <= tol; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVector data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
CVector operator*(const ComplexMatrix& a, std::span<const Complex> v);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a - b| over entries.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Compressed-row complex matrix. Column indices strictly increase within
/// each row and explicit zeros are dropped at construction.
class SparseComplexMatrix {
 public:
  SparseComplexMatrix() = default;
  SparseComplexMatrix(std::size_t rows, std::size_t cols);
  explicit SparseComplexMatrix(const ComplexMatrix& dense, double drop_tol = 0.0);

  struct Triplet {
    std::size_t row;
    std::size_t col;
    Complex value;
  };
  /// Duplicates are summed.
  static SparseComplexMatrix from_triplets(std::size_t rows, std::size_t cols,
                                           std::vector<Triplet> triplets);
  static SparseComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
  std::span<const Complex> values() const noexcept { return values_; }

  ComplexMatrix to_dense() const;
  SparseComplexMatrix adjoint() const;
  std::vector<Triplet> triplets() const;

  CVector operator*(std::span<const Complex> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  CVector values_;
};

SparseComplexMatrix operator+(const SparseComplexMatrix& a, const SparseComplexMatrix& b);
SparseComplexMatrix operator*(Complex s, const SparseComplexMatrix& a);
SparseComplexMatrix operator*(const SparseComplexMatrix& a, const SparseComplexMatrix& b);

/// (A (x) B)[i*p + k, j*q + l] = A[i,j] * B[k,l] for B of shape p x q.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
SparseComplexMatrix kron(const SparseComplexMatrix& a, const SparseComplexMatrix& b);

/// Column-stacking vectorization: vec(rho)[i + j*rows] = rho(i, j), so that
/// vec(A rho B) = (B^T (x) A) vec(rho).
CVector vec(const ComplexMatrix& rho);
ComplexMatrix unvec(std::span<const Complex> v, std::size_t rows, std::size_t cols);
/// Square unvec; the length must be a perfect square.
ComplexMatrix unvec(std::span<const Complex> v);

/// Matrix exponential by scaling and squaring around a degree-13 Pade core
/// (lower degrees for small norms).
ComplexMatrix expm(const ComplexMatrix& a);
EigenMatrix expm(const EigenMatrix& a);

}  // namespace floquet
