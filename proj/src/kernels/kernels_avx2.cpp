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

// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include "floquet/kernels.hpp"

#if defined(FLOQUET_HAVE_AVX2)

#include <immintrin.h>

namespace floquet::kernels {
namespace {

// One __m256d holds two complex doubles: [re0, im0, re1, im1].

inline const double* dp(const Complex* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(Complex* p) { return reinterpret_cast<double*>(p); }

// c * x for a broadcast complex c.
inline __m256d cmul(__m256d cr, __m256d ci, __m256d x) {
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(cr, x, _mm256_mul_pd(ci, xs));
}

inline __m128d cmul128(Complex c, __m128d x) {
  const __m128d cr = _mm_set1_pd(c.real());
  const __m128d ci = _mm_set1_pd(c.imag());
  const __m128d xs = _mm_shuffle_pd(x, x, 0x1);
  return _mm_addsub_pd(_mm_mul_pd(cr, x), _mm_mul_pd(ci, xs));
}

void axpy(std::size_t n, Complex a, const Complex* x, Complex* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + i));
    const __m256d yv = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(yv, cmul(ar, ai, xv)));
  }
  for (; i < n; ++i) {
    const __m128d r = _mm_add_pd(_mm_loadu_pd(dp(y + i)), cmul128(a, _mm_loadu_pd(dp(x + i))));
    _mm_storeu_pd(dp(y + i), r);
  }
}

void lincomb(std::size_t n, const Complex* x0, std::size_t m, const Complex* coeffs,
             const Complex* const* xs, Complex* y) {
  constexpr std::size_t kMaxTerms = 16;
  if (m > kMaxTerms) {
    // Not used by the integrators; keep a plain path for completeness.
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = x0[i];
      for (std::size_t k = 0; k < m; ++k) s += coeffs[k] * xs[k][i];
      y[i] = s;
    }
    return;
  }
  __m256d cr[kMaxTerms];
  __m256d ci[kMaxTerms];
  for (std::size_t k = 0; k < m; ++k) {
    cr[k] = _mm256_set1_pd(coeffs[k].real());
    ci[k] = _mm256_set1_pd(coeffs[k].imag());
  }
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d acc_r = _mm256_loadu_pd(dp(x0 + i));
    __m256d acc_i = _mm256_setzero_pd();
    for (std::size_t k = 0; k < m; ++k) {
      const __m256d xv = _mm256_loadu_pd(dp(xs[k] + i));
      acc_r = _mm256_fmadd_pd(cr[k], xv, acc_r);
      acc_i = _mm256_fmadd_pd(ci[k], _mm256_permute_pd(xv, 0x5), acc_i);
    }
    _mm256_storeu_pd(dp(y + i), _mm256_addsub_pd(acc_r, acc_i));
  }
  for (; i < n; ++i) {
    Complex s = x0[i];
    for (std::size_t k = 0; k < m; ++k) s += coeffs[k] * xs[k][i];
    y[i] = s;
  }
}

Complex dot(std::size_t n, const Complex* x, const Complex* y) {
  __m256d p1 = _mm256_setzero_pd();  // [xr*yr, xi*yi, ...]
  __m256d p2 = _mm256_setzero_pd();  // [xr*yi, xi*yr, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + i));
    const __m256d yv = _mm256_loadu_pd(dp(y + i));
    p1 = _mm256_fmadd_pd(xv, yv, p1);
    p2 = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), p2);
  }
  alignas(32) double a[4];
  alignas(32) double b[4];
  _mm256_store_pd(a, p1);
  _mm256_store_pd(b, p2);
  Complex s{(a[0] + a[2]) + (a[1] + a[3]), (b[0] + b[2]) - (b[1] + b[3])};
  for (; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double sqnorm(std::size_t n, const Complex* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x + i));
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double a[4];
  _mm256_store_pd(a, acc);
  double s = (a[0] + a[2]) + (a[1] + a[3]);
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void csr_left(const CsrView& a, Complex alpha, const Complex* x, Complex* y,
              std::size_t ncols) {
  const __m256d alr = _mm256_set1_pd(alpha.real());
  const __m256d ali = _mm256_set1_pd(alpha.imag());
  std::size_t j = 0;
  // Two columns per pass: lane pair 0 is column j, lane pair 1 is column j+1.
  for (; j + 2 <= ncols; j += 2) {
    const Complex* x0 = x + j * a.cols;
    const Complex* x1 = x0 + a.cols;
    Complex* y0 = y + j * a.rows;
    Complex* y1 = y0 + a.rows;
    for (std::size_t i = 0; i < a.rows; ++i) {
      __m256d acc_r = _mm256_setzero_pd();
      __m256d acc_i = _mm256_setzero_pd();
      for (std::size_t k = a.offsets[i]; k < a.offsets[i + 1]; ++k) {
        const std::size_t c = a.indices[k];
        const __m256d xv =
            _mm256_set_m128d(_mm_loadu_pd(dp(x1 + c)), _mm_loadu_pd(dp(x0 + c)));
        acc_r = _mm256_fmadd_pd(_mm256_set1_pd(a.values[k].real()), xv, acc_r);
        acc_i = _mm256_fmadd_pd(_mm256_set1_pd(a.values[k].imag()),
                                _mm256_permute_pd(xv, 0x5), acc_i);
      }
      const __m256d s = cmul(alr, ali, _mm256_addsub_pd(acc_r, acc_i));
      const __m128d lo = _mm_add_pd(_mm_loadu_pd(dp(y0 + i)), _mm256_castpd256_pd128(s));
      const __m128d hi = _mm_add_pd(_mm_loadu_pd(dp(y1 + i)), _mm256_extractf128_pd(s, 1));
      _mm_storeu_pd(dp(y0 + i), lo);
      _mm_storeu_pd(dp(y1 + i), hi);
    }
  }
  for (; j < ncols; ++j) {
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
  for (std::size_t j = 0; j < b.rows; ++j) {
    Complex* yj = y + j * nrows;
    for (std::size_t k = b.offsets[j]; k < b.offsets[j + 1]; ++k) {
      axpy(nrows, alpha * std::conj(b.values[k]), x + b.indices[k] * nrows, yj);
    }
  }
}

void scale_elementwise(std::size_t n, const Complex* phase, Complex* y) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d pv = _mm256_loadu_pd(dp(phase + i));
    const __m256d yv = _mm256_loadu_pd(dp(y + i));
    const __m256d pr = _mm256_movedup_pd(pv);
    const __m256d pi = _mm256_permute_pd(pv, 0xF);
    _mm256_storeu_pd(dp(y + i), cmul(pr, pi, yv));
  }
  for (; i < n; ++i) y[i] *= phase[i];
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2",   axpy,     lincomb,       dot,
                                 sqnorm,   csr_left, csr_right_adj, scale_elementwise};
  return &table;
}

}  // namespace floquet::kernels

#else

namespace floquet::kernels {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace floquet::kernels

#endif
