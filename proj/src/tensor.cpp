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

#include "floquet/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "floquet/errors.hpp"

namespace floquet {

// ---------------------------------------------------------------- dense

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, CVector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                         " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_eigen(const EigenMatrix& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  out.eigen() = m;
  return out;
}

Eigen::Map<EigenRowMatrix> ComplexMatrix::eigen() {
  return {data_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
}

Eigen::Map<const EigenRowMatrix> ComplexMatrix::eigen() const {
  return {data_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DomainError("trace of a non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::norm_fro() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermiticity_error() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("matrix +: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("matrix -: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix *: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  out.eigen().noalias() = a.eigen() * b.eigen();
  return out;
}

CVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector: dimension mismatch");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

// ---------------------------------------------------------------- sparse

SparseComplexMatrix::SparseComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_offsets_(rows + 1, 0) {}

SparseComplexMatrix::SparseComplexMatrix(const ComplexMatrix& dense, double drop_tol)
    : rows_(dense.rows()), cols_(dense.cols()) {
  row_offsets_.assign(rows_ + 1, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const Complex z = dense(i, j);
      if (std::abs(z) > drop_tol && z != Complex{}) {
        col_indices_.push_back(j);
        values_.push_back(z);
      }
    }
    row_offsets_[i + 1] = values_.size();
  }
}

SparseComplexMatrix SparseComplexMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                                       std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw DimensionError("triplet index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    while (k < triplets.size() && triplets[k].row == i) {
      const std::size_t col = triplets[k].col;
      Complex sum = 0.0;
      while (k < triplets.size() && triplets[k].row == i && triplets[k].col == col) {
        sum += triplets[k].value;
        ++k;
      }
      if (sum != Complex{}) {
        m.col_indices_.push_back(col);
        m.values_.push_back(sum);
      }
    }
    m.row_offsets_[i + 1] = m.values_.size();
  }
  return m;
}

SparseComplexMatrix SparseComplexMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

ComplexMatrix SparseComplexMatrix::to_dense() const {
  ComplexMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      d(i, col_indices_[k]) = values_[k];
  return d;
}

std::vector<SparseComplexMatrix::Triplet> SparseComplexMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      t.push_back({i, col_indices_[k], values_[k]});
  return t;
}

SparseComplexMatrix SparseComplexMatrix::adjoint() const {
  auto t = triplets();
  for (auto& x : t) {
    std::swap(x.row, x.col);
    x.value = std::conj(x.value);
  }
  return from_triplets(cols_, rows_, std::move(t));
}

CVector SparseComplexMatrix::operator*(std::span<const Complex> v) const {
  if (v.size() != cols_) throw DimensionError("sparse matvec: dimension mismatch");
  CVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex s = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      s += values_[k] * v[col_indices_[k]];
    out[i] = s;
  }
  return out;
}

SparseComplexMatrix operator+(const SparseComplexMatrix& a, const SparseComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("sparse +: shape mismatch");
  auto t = a.triplets();
  auto tb = b.triplets();
  t.insert(t.end(), tb.begin(), tb.end());
  return SparseComplexMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseComplexMatrix operator*(Complex s, const SparseComplexMatrix& a) {
  auto t = a.triplets();
  for (auto& x : t) x.value *= s;
  return SparseComplexMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseComplexMatrix operator*(const SparseComplexMatrix& a, const SparseComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("sparse *: inner dimension mismatch");
  std::vector<SparseComplexMatrix::Triplet> t;
  const auto ao = a.row_offsets();
  const auto ac = a.col_indices();
  const auto av = a.values();
  const auto bo = b.row_offsets();
  const auto bc = b.col_indices();
  const auto bv = b.values();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = ao[i]; k < ao[i + 1]; ++k) {
      const std::size_t r = ac[k];
      for (std::size_t l = bo[r]; l < bo[r + 1]; ++l) t.push_back({i, bc[l], av[k] * bv[l]});
    }
  return SparseComplexMatrix::from_triplets(a.rows(), b.cols(), std::move(t));
}

// ---------------------------------------------------------------- kron / vec

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t p = b.rows();
  const std::size_t q = b.cols();
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < q; ++l) out(i * p + k, j * q + l) = aij * b(k, l);
    }
  return out;
}

SparseComplexMatrix kron(const SparseComplexMatrix& a, const SparseComplexMatrix& b) {
  std::vector<SparseComplexMatrix::Triplet> t;
  t.reserve(a.nnz() * b.nnz());
  const std::size_t p = b.rows();
  const std::size_t q = b.cols();
  for (const auto& x : a.triplets())
    for (const auto& y : b.triplets())
      t.push_back({x.row * p + y.row, x.col * q + y.col, x.value * y.value});
  return SparseComplexMatrix::from_triplets(a.rows() * p, a.cols() * q, std::move(t));
}

CVector vec(const ComplexMatrix& rho) {
  CVector v(rho.size());
  const std::size_t r = rho.rows();
  for (std::size_t j = 0; j < rho.cols(); ++j)
    for (std::size_t i = 0; i < r; ++i) v[i + j * r] = rho(i, j);
  return v;
}

ComplexMatrix unvec(std::span<const Complex> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols)
    throw DimensionError("unvec: length " + std::to_string(v.size()) + " != " +
                         std::to_string(rows) + "*" + std::to_string(cols));
  ComplexMatrix rho(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) rho(i, j) = v[i + j * rows];
  return rho;
}

ComplexMatrix unvec(std::span<const Complex> v) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw DimensionError("unvec: length is not a perfect square");
  return unvec(v, d, d);
}

// ---------------------------------------------------------------- expm

namespace {

double norm1(const EigenMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

EigenMatrix expm(const EigenMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("expm: matrix is not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const EigenMatrix ident = EigenMatrix::Identity(n, n);

  static constexpr std::array<double, 4> b3{120., 60., 12., 1.};
  static constexpr std::array<double, 6> b5{30240., 15120., 3360., 420., 30., 1.};
  static constexpr std::array<double, 8> b7{17297280., 8648640., 1995840., 277200.,
                                            25200.,    1512.,    56.,      1.};
  static constexpr std::array<double, 10> b9{17643225600., 8821612800., 2075673600.,
                                             302702400.,   30270240.,   2162160.,
                                             110880.,      3960.,       90.,
                                             1.};
  static constexpr std::array<double, 14> b13{
      64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
      129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
      1323241920.,        40840800.,          960960.,           16380.,
      182.,               1.};

  const double nrm = norm1(a);
  auto low_degree = [&](auto const& b) {
    // U = A * sum_k b[2k+1] A^{2k}, V = sum_k b[2k] A^{2k}
    const EigenMatrix a2 = a * a;
    EigenMatrix pw = ident;
    EigenMatrix u = EigenMatrix::Zero(n, n);
    EigenMatrix v = EigenMatrix::Zero(n, n);
    for (std::size_t k = 0; 2 * k + 1 < b.size(); ++k) {
      v += b[2 * k] * pw;
      u += b[2 * k + 1] * pw;
      pw = pw * a2;
    }
    u = a * u;
    return EigenMatrix((v - u).partialPivLu().solve(v + u));
  };
  if (nrm <= 1.495585217958292e-2) return low_degree(b3);
  if (nrm <= 2.539398330063230e-1) return low_degree(b5);
  if (nrm <= 9.504178996162932e-1) return low_degree(b7);
  if (nrm <= 2.097847961257068e0) return low_degree(b9);

  int s = 0;
  const double theta13 = 5.371920351148152;
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  const EigenMatrix as = a / std::ldexp(1.0, s);
  const EigenMatrix a2 = as * as;
  const EigenMatrix a4 = a2 * a2;
  const EigenMatrix a6 = a4 * a2;
  EigenMatrix u = a6 * (b13[13] * a6 + b13[11] * a4 + b13[9] * a2);
  u += b13[7] * a6 + b13[5] * a4 + b13[3] * a2 + b13[1] * ident;
  u = as * u;
  EigenMatrix v = a6 * (b13[12] * a6 + b13[10] * a4 + b13[8] * a2);
  v += b13[6] * a6 + b13[4] * a4 + b13[2] * a2 + b13[0] * ident;
  EigenMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

ComplexMatrix expm(const ComplexMatrix& a) {
  if (!a.is_square()) throw DomainError("expm: matrix is not square");
  return ComplexMatrix::from_eigen(expm(a.to_eigen()));
}

}  // namespace floquet
