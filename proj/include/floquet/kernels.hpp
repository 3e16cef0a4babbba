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

// Inner-loop kernels for the matrix-free superoperator action, the Runge-Kutta
// stage combinations and Gram-Schmidt. Every kernel has a scalar reference
// version; an AVX2+FMA version is selected at runtime when the CPU supports
// it. Matrices handed to the csr_* kernels are column-major (the memory layout
// of a column-stacked vec(rho)).

#include <complex>
#include <cstddef>
#include <string_view>

namespace floquet::kernels {

using Complex = std::complex<double>;

struct CsrView {
  std::size_t rows = 0;
  std::size_t cols = 0;
  const std::size_t* offsets = nullptr;
  const std::size_t* indices = nullptr;
  const Complex* values = nullptr;
};

struct KernelTable {
  std::string_view name;

  /// y += a * x
  void (*axpy)(std::size_t n, Complex a, const Complex* x, Complex* y);
  /// y = x0 + sum_i coeffs[i] * xs[i]; y may alias x0.
  void (*lincomb)(std::size_t n, const Complex* x0, std::size_t m, const Complex* coeffs,
                  const Complex* const* xs, Complex* y);
  /// sum_i conj(x_i) y_i
  Complex (*dot)(std::size_t n, const Complex* x, const Complex* y);
  /// sum_i |x_i|^2
  double (*sqnorm)(std::size_t n, const Complex* x);
  /// Y += alpha * A * X, with X and Y column-major (a.cols x ncols, a.rows x ncols).
  void (*csr_left)(const CsrView& a, Complex alpha, const Complex* x, Complex* y,
                   std::size_t ncols);
  /// Y += alpha * X * B^dagger, with X column-major (nrows x b.cols) and
  /// Y column-major (nrows x b.rows).
  void (*csr_right_adj)(const CsrView& b, Complex alpha, const Complex* x, Complex* y,
                        std::size_t nrows);
  /// y_i *= phase_i
  void (*scale_elementwise)(std::size_t n, const Complex* phase, Complex* y);
};

const KernelTable& scalar_kernels();
/// nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();
/// True when the running CPU reports AVX2 and FMA.
bool cpu_has_avx2();

/// Table used by the library. Chosen once: AVX2 when compiled in and supported
/// by the CPU, unless FLOQUET_DPT_KERNELS=scalar is set in the environment.
const KernelTable& active();

}  // namespace floquet::kernels
