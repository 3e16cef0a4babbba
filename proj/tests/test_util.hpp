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

#include <cstdint>
#include <random>

#include "floquet/tensor.hpp"

namespace floquet::testing {

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed,
                                   double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double re = dist(rng);
      const double im = dist(rng);
      m(i, j) = scale * Complex(re, im);
    }
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  const ComplexMatrix a = random_matrix(n, n, seed);
  return Complex{0.5} * (a + a.adjoint());
}

/// Random density matrix (positive, unit trace).
inline ComplexMatrix random_density(std::size_t n, std::uint64_t seed) {
  const ComplexMatrix a = random_matrix(n, n, seed);
  ComplexMatrix rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

inline CVector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  CVector v(n);
  for (auto& z : v) {
    const double re = dist(rng);
    const double im = dist(rng);
    z = {re, im};
  }
  return v;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace floquet::testing
