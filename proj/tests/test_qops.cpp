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

#include <doctest.h>

#include <cmath>

#include "floquet/errors.hpp"
#include "floquet/qops.hpp"
#include "test_util.hpp"

using namespace floquet;
using namespace floquet::qops;

namespace {

ComplexMatrix qrm(double wc, double wq, double g, std::size_t cutoff) {
  const CompositeSpace space({TwoLevel{}, FockSpace(cutoff)});
  const FockSpace fock(cutoff);
  const ComplexMatrix a = embed(destroy(fock), 1, space);
  const ComplexMatrix sz = embed(pauli(Pauli::Z), 0, space);
  const ComplexMatrix sx = embed(pauli(Pauli::X), 0, space);
  return Complex(wc) * (a.adjoint() * a) + Complex(wq / 2) * sz + Complex(g) * ((a + a.adjoint()) * sx);
}

}  // namespace

TEST_CASE("destroy at cutoff 2 and 3") {
  CHECK(destroy(FockSpace(2)) == ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}});
  const ComplexMatrix a3 = destroy(FockSpace(3));
  CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) < 1e-15);
  const Complex diag[] = {0.0, 1.0, 2.0};
  CHECK(max_abs_diff(a3.adjoint() * a3, ComplexMatrix::diagonal(diag)) < 1e-14);
  CHECK(number(FockSpace(3)) == ComplexMatrix::diagonal(diag));
}

TEST_CASE("cutoff below 2 is rejected") { CHECK_THROWS_AS(FockSpace(1), DomainError); }

TEST_CASE("canonical commutator holds away from the truncation corner") {
  const FockSpace f(8);
  const ComplexMatrix a = destroy(f);
  const ComplexMatrix c = commutator(a, a.adjoint());
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      if (i == 7 && j == 7) continue;
      CHECK(std::abs(c(i, j) - (i == j ? 1.0 : 0.0)) < 1e-13);
    }
}

TEST_CASE("Pauli algebra") {
  const Complex diag_z[] = {1.0, -1.0};
  CHECK(pauli(Pauli::Z) == ComplexMatrix::diagonal(diag_z));
  const Complex diag_pm[] = {1.0, 0.0};
  CHECK(pauli(Pauli::Plus) * pauli(Pauli::Minus) == ComplexMatrix::diagonal(diag_pm));
  const ComplexMatrix c = commutator(pauli(Pauli::X), pauli(Pauli::Y));
  CHECK(max_abs_diff(c, Complex(0.0, 2.0) * pauli(Pauli::Z)) < 1e-15);
  const ComplexMatrix plus =
      Complex(0.5) * (pauli(Pauli::X) + Complex(0.0, 1.0) * pauli(Pauli::Y));
  CHECK(max_abs_diff(plus, pauli(Pauli::Plus)) < 1e-15);
}

TEST_CASE("embed places the factor in the requested slot") {
  const CompositeSpace space({TwoLevel{}, FockSpace(2)});
  const Complex diag[] = {1.0, 1.0, -1.0, -1.0};
  CHECK(embed(pauli(Pauli::Z), 0, space) == ComplexMatrix::diagonal(diag));
  CHECK(embed(ComplexMatrix::identity(2), 1, space) == ComplexMatrix::identity(4));
  const auto a = testing::random_matrix(2, 2, 1);
  const auto b = testing::random_matrix(2, 2, 2);
  CHECK(commutator(embed(a, 0, space), embed(b, 1, space)).max_abs() < 1e-14);
  CHECK_THROWS_AS(embed(ComplexMatrix::identity(3), 0, space), DimensionError);
}

TEST_CASE("boson numbers of a composite space") {
  const CompositeSpace space({TwoLevel{}, FockSpace(3)});
  CHECK(space.boson_numbers() == std::vector<int>{0, 1, 2, 0, 1, 2});
}

TEST_CASE("dressed basis of a diagonal matrix") {
  const Complex diag[] = {0.0, 1.0, 2.0};
  const auto db = dressed_basis(ComplexMatrix::diagonal(diag), 3);
  CHECK(db.energies == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(max_abs_diff(db.vectors, ComplexMatrix::identity(3)) < 1e-15);
}

TEST_CASE("dressed basis of the uncoupled Rabi model") {
  const auto db = dressed_basis(qrm(1.0, 1.0, 0.0, 10), 4);
  CHECK(db.energies[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(db.energies[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(db.energies[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(db.energies[3] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("dressed energies converge with cutoff") {
  const auto lo = dressed_basis(qrm(1.0, 1.0, 0.5, 40), 8);
  const auto hi = dressed_basis(qrm(1.0, 1.0, 0.5, 80), 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(lo.energies[i] - hi.energies[i]) < 1e-8);
}

TEST_CASE("dressed vectors are orthonormal, diagonalize H and are phase fixed") {
  const ComplexMatrix h = qrm(1.0, 0.8, 1.1, 30);
  auto db = dressed_basis(h, 10);
  const ComplexMatrix vd = db.vectors.adjoint();
  CHECK(max_abs_diff(vd * db.vectors, ComplexMatrix::identity(10)) < 1e-10);
  std::vector<Complex> e(db.energies.begin(), db.energies.end());
  CHECK(max_abs_diff(vd * h * db.vectors, ComplexMatrix::diagonal(e)) < 1e-9);
  for (std::size_t c = 0; c < 10; ++c) {
    double best = 0.0;
    Complex pick;
    for (std::size_t r = 0; r < h.rows(); ++r)
      if (std::abs(db.vectors(r, c)) > best) {
        best = std::abs(db.vectors(r, c));
        pick = db.vectors(r, c);
      }
    CHECK(std::abs(pick.imag()) < 1e-14);
    CHECK(pick.real() > 0.0);
  }
  const ComplexMatrix before = db.vectors;
  fix_phases(db.vectors);
  CHECK(db.vectors == before);
}

TEST_CASE("dressed basis rejects non-Hermitian input") {
  CHECK_THROWS_AS(dressed_basis(testing::random_matrix(4, 4, 3), 2), DomainError);
}
