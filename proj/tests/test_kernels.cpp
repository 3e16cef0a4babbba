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

// Scalar reference kernels against the AVX2 variants.

#include <doctest.h>

#include <cmath>

#include "floquet/kernels.hpp"
#include "floquet/tensor.hpp"
#include "test_util.hpp"

using namespace floquet;
using floquet::testing::random_vector;

namespace {

const kernels::KernelTable* simd() {
  const kernels::KernelTable* t = kernels::avx2_kernels();
  return (t != nullptr && kernels::cpu_has_avx2()) ? t : nullptr;
}

double rel_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(a[i]));
  }
  return den > 0.0 ? num / den : num;
}

SparseComplexMatrix random_sparse(std::size_t r, std::size_t c, std::uint64_t seed) {
  ComplexMatrix d = testing::random_matrix(r, c, seed);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if ((i * 7 + j * 3 + seed) % 3 != 0) d(i, j) = 0.0;
  return SparseComplexMatrix(d);
}

kernels::CsrView view(const SparseComplexMatrix& m) {
  return {m.rows(), m.cols(), m.row_offsets().data(), m.col_indices().data(), m.values().data()};
}

constexpr std::size_t kLengths[] = {0, 1, 2, 3, 7, 16, 33, 1001};

}  // namespace

TEST_CASE("active table is one of the known variants") {
  const auto& t = kernels::active();
  CHECK((t.name == "scalar" || t.name == "avx2"));
}

TEST_CASE("axpy: avx2 matches scalar") {
  const auto* v = simd();
  if (v == nullptr) return;
  const auto& s = kernels::scalar_kernels();
  for (std::size_t n : kLengths) {
    const CVector x = random_vector(n, 1 + n);
    CVector y1 = random_vector(n, 2 + n), y2 = y1;
    s.axpy(n, {0.3, -1.1}, x.data(), y1.data());
    v->axpy(n, {0.3, -1.1}, x.data(), y2.data());
    CHECK(rel_diff(y1, y2) <= 1e-14);
  }
}

TEST_CASE("lincomb: avx2 matches scalar, including aliasing and many terms") {
  const auto* v = simd();
  if (v == nullptr) return;
  const auto& s = kernels::scalar_kernels();
  for (std::size_t n : kLengths) {
    for (std::size_t m : {1u, 6u, 7u, 20u}) {
      std::vector<CVector> xs;
      std::vector<const Complex*> ptrs;
      const CVector coeffs = random_vector(m, 50 + m);
      for (std::size_t k = 0; k < m; ++k) xs.push_back(random_vector(n, 100 * k + n));
      for (const auto& x : xs) ptrs.push_back(x.data());
      const CVector x0 = random_vector(n, 7);
      CVector y1(n), y2(n);
      s.lincomb(n, x0.data(), m, coeffs.data(), ptrs.data(), y1.data());
      v->lincomb(n, x0.data(), m, coeffs.data(), ptrs.data(), y2.data());
      CHECK(rel_diff(y1, y2) <= 1e-13);
      CVector alias = x0;
      v->lincomb(n, alias.data(), m, coeffs.data(), ptrs.data(), alias.data());
      CHECK(rel_diff(y1, alias) <= 1e-13);
    }
  }
}

TEST_CASE("dot and sqnorm: avx2 matches scalar") {
  const auto* v = simd();
  if (v == nullptr) return;
  const auto& s = kernels::scalar_kernels();
  for (std::size_t n : kLengths) {
    const CVector x = random_vector(n, 3 + n), y = random_vector(n, 4 + n);
    const Complex d1 = s.dot(n, x.data(), y.data());
    const Complex d2 = v->dot(n, x.data(), y.data());
    CHECK(std::abs(d1 - d2) <= 1e-13 * std::max(1.0, static_cast<double>(n)));
    const double q1 = s.sqnorm(n, x.data());
    const double q2 = v->sqnorm(n, x.data());
    CHECK(std::abs(q1 - q2) <= 1e-13 * std::max(1.0, q1));
  }
}

TEST_CASE("dot is conjugate-linear in the first argument") {
  const CVector x{{0.0, 1.0}}, y{{1.0, 0.0}};
  CHECK(kernels::active().dot(1, x.data(), y.data()) == Complex(0.0, -1.0));
}

TEST_CASE("csr_left: avx2 matches scalar and dense A X") {
  const auto* v = simd();
  const auto& s = kernels::scalar_kernels();
  for (std::size_t ncols : {1u, 2u, 5u, 8u}) {
    const auto a = random_sparse(6, 4, ncols);
    const ComplexMatrix x = testing::random_matrix(4, ncols, 9);
    // Column-major buffers.
    const CVector xv = vec(x);
    const CVector y0 = vec(testing::random_matrix(6, ncols, 10));
    CVector y1 = y0;
    s.csr_left(view(a), {0.5, 2.0}, xv.data(), y1.data(), ncols);
    const CVector expect = vec(unvec(y0, 6, ncols) + Complex(0.5, 2.0) * (a.to_dense() * x));
    CHECK(rel_diff(expect, y1) <= 1e-14);
    if (v != nullptr) {
      CVector y2 = y0;
      v->csr_left(view(a), {0.5, 2.0}, xv.data(), y2.data(), ncols);
      CHECK(rel_diff(y1, y2) <= 1e-14);
    }
  }
}

TEST_CASE("csr_right_adj: avx2 matches scalar and dense X B^dagger") {
  const auto* v = simd();
  const auto& s = kernels::scalar_kernels();
  for (std::size_t nrows : {1u, 3u, 4u, 9u}) {
    const auto b = random_sparse(5, 4, nrows + 20);
    const ComplexMatrix x = testing::random_matrix(nrows, 4, 19);
    const CVector xv = vec(x);
    const CVector y0 = vec(testing::random_matrix(nrows, 5, 21));
    CVector y1 = y0;
    s.csr_right_adj(view(b), {-1.0, 0.25}, xv.data(), y1.data(), nrows);
    const CVector expect =
        vec(unvec(y0, nrows, 5) + Complex(-1.0, 0.25) * (x * b.to_dense().adjoint()));
    CHECK(rel_diff(expect, y1) <= 1e-14);
    if (v != nullptr) {
      CVector y2 = y0;
      v->csr_right_adj(view(b), {-1.0, 0.25}, xv.data(), y2.data(), nrows);
      CHECK(rel_diff(y1, y2) <= 1e-14);
    }
  }
}

TEST_CASE("scale_elementwise: avx2 matches scalar") {
  const auto* v = simd();
  if (v == nullptr) return;
  const auto& s = kernels::scalar_kernels();
  for (std::size_t n : kLengths) {
    const CVector p = random_vector(n, 5 + n);
    CVector y1 = random_vector(n, 6 + n), y2 = y1;
    s.scale_elementwise(n, p.data(), y1.data());
    v->scale_elementwise(n, p.data(), y2.data());
    CHECK(rel_diff(y1, y2) <= 1e-15);
  }
}
