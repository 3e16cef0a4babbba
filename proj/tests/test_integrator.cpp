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
#include <numbers>

#include "floquet/errors.hpp"
#include "floquet/integrator.hpp"
#include "floquet/models.hpp"
#include "test_util.hpp"

using namespace floquet;
using floquet::testing::random_density;
using floquet::testing::random_hermitian;
using floquet::testing::random_matrix;

namespace {

const Rhs kDecay = [](double, std::span<const Complex> y, std::span<Complex> dy) {
  for (std::size_t i = 0; i < y.size(); ++i) dy[i] = -y[i];
};

double rel_err(std::span<const Complex> a, std::span<const Complex> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("exponential decay") {
  DormandPrince dp(1, {});
  CVector y{1.0};
  dp.advance(kDecay, 0.0, 1.0, y);
  CHECK(std::abs(y[0] - std::exp(-1.0)) <= 1e-9 * std::exp(-1.0));
  CHECK(dp.accepted_steps() > 0);
}

TEST_CASE("oscillator phase over many periods") {
  const double w = 3.0;
  const Rhs f = [w](double, std::span<const Complex> y, std::span<Complex> dy) {
    dy[0] = Complex(0.0, w) * y[0];
  };
  DormandPrince dp(1, {});
  CVector y{1.0};
  const double t1 = 20 * 2 * std::numbers::pi / w;
  dp.advance(f, 0.0, t1, y);
  CHECK(std::abs(y[0] - 1.0) <= 1e-8);
}

TEST_CASE("explicitly time-dependent right-hand side") {
  // y' = cos(t) y  =>  y = exp(sin t).
  const Rhs f = [](double t, std::span<const Complex> y, std::span<Complex> dy) {
    dy[0] = std::cos(t) * y[0];
  };
  DormandPrince dp(1, {});
  CVector y{1.0};
  for (int i = 0; i < 10; ++i) dp.advance(f, 0.7 * i, 0.7 * (i + 1), y);
  CHECK(std::abs(y[0] - std::exp(std::sin(7.0))) <= 1e-9);
}

TEST_CASE("error decreases monotonically with the tolerance") {
  const Rhs f = [](double t, std::span<const Complex> y, std::span<Complex> dy) {
    dy[0] = Complex(-0.3, 5.0 + 2.0 * std::sin(3.0 * t)) * y[0];
  };
  // y = exp(-0.3 t + i (5 t - (2/3)(cos 3t - 1))).
  const double t1 = 4.0;
  const Complex exact =
      std::exp(Complex(-0.3 * t1, 5.0 * t1 - 2.0 / 3.0 * (std::cos(3.0 * t1) - 1.0)));
  double prev = 1.0;
  for (const double rtol : {1e-5, 1e-7, 1e-9, 1e-11}) {
    IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = rtol * 1e-2;
    DormandPrince dp(1, cfg);
    CVector y{1.0};
    dp.advance(f, 0.0, t1, y);
    const double err = std::abs(y[0] - exact);
    CAPTURE(rtol);
    CHECK(err < prev);
    CHECK(err <= 100.0 * rtol);
    prev = err;
  }
}

TEST_CASE("configuration and argument validation") {
  IntegratorConfig cfg;
  cfg.rtol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK_THROWS_AS(DormandPrince(2, cfg), DomainError);
  cfg = {};
  cfg.max_steps = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);

  DormandPrince dp(2, {});
  CVector y{1.0, 2.0};
  CHECK_THROWS_AS(dp.advance(kDecay, 1.0, 0.0, y), DomainError);
  CVector wrong{1.0};
  CHECK_THROWS_AS(dp.advance(kDecay, 0.0, 1.0, wrong), DimensionError);
  dp.advance(kDecay, 0.5, 0.5, y);
  CHECK(y[0] == Complex(1.0));
}

TEST_CASE("step budget exhaustion reports the time reached") {
  IntegratorConfig cfg;
  cfg.max_steps = 5;
  const Rhs stiff = [](double, std::span<const Complex> y, std::span<Complex> dy) {
    dy[0] = Complex(0.0, 1e4) * y[0];
  };
  DormandPrince dp(1, cfg);
  CVector y{1.0};
  try {
    dp.advance(stiff, 0.0, 1.0, y);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.time_reached() >= 0.0);
    CHECK(e.time_reached() < 1.0);
  }
}

TEST_CASE("non-finite right-hand side ends in an underflow error") {
  const Rhs bad = [](double, std::span<const Complex>, std::span<Complex> dy) {
    dy[0] = std::numeric_limits<double>::quiet_NaN();
  };
  DormandPrince dp(1, {});
  CVector y{1.0};
  CHECK_THROWS_AS(dp.advance(bad, 0.0, 1.0, y), IntegrationError);
}

TEST_CASE("time-independent Liouvillian matches the matrix exponential") {
  const ComplexMatrix h = random_hermitian(4, 11);
  const std::vector<CollapseOp> ls{{Complex(0.5) * random_matrix(4, 4, 12)}};
  const TimePeriodicGenerator gen = liouvillian(h, ls, 1.0);
  const CVector v0 = vec(random_density(4, 13));
  const double t = 0.8;
  const CVector got = integrate(gen, v0, 0.0, t);
  const CVector want = expm(Complex(t) * liouvillian_dense(h, ls)) * std::span<const Complex>(v0);
  CHECK(rel_err(got, want) <= 1e-8);
}

TEST_CASE("trace is preserved over a period of the driven Kerr model") {
  models::KerrParams p;
  p.cutoff = 8;
  p.f_tilde = 2.0;
  const TimePeriodicGenerator gen = models::kerr_full(p);
  CVector v = vec(random_density(p.cutoff, 4));
  Propagator prop(gen, {});
  prop.advance(v, 0.0, gen.period());
  CHECK(std::abs(unvec(v).trace() - 1.0) <= 1e-9);
}

TEST_CASE("rotating-frame propagation equals lab-frame propagation") {
  models::KerrParams p;
  p.n = 2;
  p.omega0 = 80.0;
  p.omega_d = 2.0 * 70.0;
  p.eta = 0.4;
  p.f_tilde = 3.0;
  p.cutoff = 8;
  const TimePeriodicGenerator lab = models::kerr_full(p, models::KerrFrame::Lab);
  const TimePeriodicGenerator rot = models::kerr_full(p, models::KerrFrame::Rotating);
  REQUIRE(rot.integration_frame() != nullptr);
  const CVector v0 = vec(random_density(p.cutoff, 21));
  IntegratorConfig cfg;
  cfg.rtol = 1e-11;
  cfg.atol = 1e-13;
  for (const double t0 : {0.0, 0.3 * lab.period()}) {
    const double t1 = t0 + 1.7 * lab.period();
    const CVector a = integrate(lab, v0, t0, t1, cfg);
    const CVector b = integrate(rot, v0, t0, t1, cfg);
    CHECK(rel_err(b, a) <= 1e-8);
  }
}

TEST_CASE("split propagation equals a single call") {
  models::KerrParams p;
  p.cutoff = 6;
  const TimePeriodicGenerator gen = models::kerr_full(p);
  const CVector v0 = vec(random_density(p.cutoff, 5));
  const double t = gen.period();
  const CVector whole = integrate(gen, v0, 0.0, t);
  Propagator prop(gen, {});
  CVector split = v0;
  prop.advance(split, 0.0, 0.4 * t);
  prop.advance(split, 0.4 * t, t);
  CHECK(rel_err(split, whole) <= 1e-9);
}
