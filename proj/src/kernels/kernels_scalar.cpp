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

#include <cmath>

#include "floquet/kernels.hpp"

namespace floquet::kernels {
namespace {

void axpy(std::size_t n, Complex a, const Complex* x, Complex* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void lincomb(std::size_t n, const Complex* x0, std::size_t m, const Complex* coeffs,
             const Complex* const* xs, Complex* y) {
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = x0[i];
    for (std::size_t k = 0; k < m; ++k) s += coeffs[k] * xs[k][i];
    y[i] = s;
  }
}

Complex dot(std::size_t n, const Complex* x, const Complex* y) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double sqnorm(std::size_t n, const Complex* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void csr_left(const CsrView& a, Complex alpha, const Complex* x, Complex* y,
              std::size_t ncols) {
  for (std::size_t j = 0; j < ncols; ++j) {
    const Complex* xj = x + j * a.cols;
    Complex* yj = y + j * a.rows;
    for (std::size_t i = 0; i < a.rows; ++i) {
      Complex s = 0.0;
      for (std::size_t k = a.offsets[i]; k < a.offsets[i + 1]; ++k)
        s += a.values[k] * xj[a.indices[k]];
      yj[i] += alpha * s;
    }
  }
}

void csr_right_adj(const CsrView& b, Complex alpha, const Complex* x, Complex* y,
                   std::size_t nrows) {
  // (X B^dagger)[:, j] = sum_k conj(B[j, k]) X[:, k]
  for (std::size_t j = 0; j < b.rows; ++j) {
    Complex* yj = y + j * nrows;
    for (std::size_t k = b.offsets[j]; k < b.offsets[j + 1]; ++k) {
      const Complex c = alpha * std::conj(b.values[k]);
      const Complex* xk = x + b.indices[k] * nrows;
      for (std::size_t i = 0; i < nrows; ++i) yj[i] += c * xk[i];
    }
  }
}

void scale_elementwise(std::size_t n, const Complex* phase, Complex* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= phase[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", axpy,     lincomb,       dot,
                                 sqnorm,   csr_left, csr_right_adj, scale_elementwise};
  return table;
}

}  // namespace floquet::kernels
