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

#include "floquet/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "floquet/errors.hpp"
#include "floquet/kernels.hpp"

namespace floquet {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Difference between the 5th- and 4th-order weights.
constexpr double kE[7] = {71.0 / 57600,      0.0,         -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

// Step-size controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kMinShrink = 0.2;
constexpr double kMaxGrow = 10.0;

double norm2(const CVector& v) { return std::sqrt(kernels::active().sqnorm(v.size(), v.data())); }

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0))
    throw DomainError("IntegratorConfig: tolerances must be strictly positive");
  if (max_steps < 1) throw DomainError("IntegratorConfig: max_steps must be >= 1");
}

DormandPrince::DormandPrince(std::size_t n, IntegratorConfig cfg) : n_(n), cfg_(cfg) {
  cfg_.validate();
  for (auto& k : k_) k.assign(n_, Complex{});
  ytmp_.assign(n_, Complex{});
  ynew_.assign(n_, Complex{});
}

double DormandPrince::initial_step(const Rhs& f, double t, std::span<const Complex> y,
                                   double span) {
  const auto& kt = kernels::active();
  const double ynorm = std::sqrt(kt.sqnorm(n_, y.data()));
  const double sc = cfg_.atol + cfg_.rtol * ynorm;
  f(t, y, k_[0]);
  ++evaluations_;
  const double d0 = ynorm / sc;
  const double d1 = norm2(k_[0]) / sc;
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  std::copy(y.begin(), y.end(), ytmp_.begin());
  kt.axpy(n_, h0, k_[0].data(), ytmp_.data());
  f(t + h0, ytmp_, k_[1]);
  ++evaluations_;
  for (std::size_t i = 0; i < n_; ++i) ynew_[i] = k_[1][i] - k_[0][i];
  const double d2 = norm2(ynew_) / sc / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

void DormandPrince::advance(const Rhs& f, double t0, double t1, std::span<Complex> y) {
  if (y.size() != n_) throw DimensionError("DormandPrince::advance: state length mismatch");
  if (t1 < t0) throw DomainError("DormandPrince::advance: t1 < t0");
  if (t1 == t0) return;
  const auto& kt = kernels::active();
  const double span = t1 - t0;

  double t = t0;
  double h;
  if (h_ > 0.0) {
    h = std::min(h_, span);
    f(t, y, k_[0]);
    ++evaluations_;
  } else {
    h = initial_step(f, t, y, span);  // leaves f(t0, y) in k_[0]
  }

  std::size_t steps = 0;
  bool last_rejected = false;
  const Complex* stages[7];
  Complex coeffs[7];
  while (t < t1) {
    if (steps >= cfg_.max_steps)
      throw IntegrationError("integrator: step budget of " + std::to_string(cfg_.max_steps) +
                                 " exhausted at t = " + std::to_string(t),
                             t);
    const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < hmin)
      throw IntegrationError("integrator: step size underflow at t = " + std::to_string(t), t);
    bool clipped = false;
    double hstep = h;
    if (t + hstep >= t1 || t1 - (t + hstep) < hmin) {
      hstep = t1 - t;
      clipped = true;
    }

    for (int s = 1; s < 7; ++s) {
      for (int j = 0; j < s; ++j) {
        stages[j] = k_[j].data();
        coeffs[j] = hstep * kA[s][j];
      }
      CVector& target = s == 6 ? ynew_ : ytmp_;
      kt.lincomb(n_, y.data(), static_cast<std::size_t>(s), coeffs, stages, target.data());
      f(t + kC[s] * hstep, target, k_[s]);
      ++evaluations_;
    }
    for (int j = 0; j < 7; ++j) {
      stages[j] = k_[j].data();
      coeffs[j] = hstep * kE[j];
    }
    // Error vector e = h * sum E_j k_j, built on top of a zero base.
    std::fill(ytmp_.begin(), ytmp_.end(), Complex{});
    kt.lincomb(n_, ytmp_.data(), 7, coeffs, stages, ytmp_.data());
    const double scale =
        cfg_.atol + cfg_.rtol * std::max(std::sqrt(kt.sqnorm(n_, y.data())), norm2(ynew_));
    double err = norm2(ytmp_) / scale;
    ++steps;

    if (!std::isfinite(err)) {
      ++rejected_;
      h = hstep * kMinShrink;
      last_rejected = true;
      continue;
    }

    const double fac11 = std::pow(err, kExpo);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(err_old_, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, 1.0 / kMinShrink);
      double hnew = hstep / fac;
      if (last_rejected) hnew = std::min(hnew, hstep);
      err_old_ = std::max(err, 1e-4);
      t = clipped ? t1 : t + hstep;
      std::copy(ynew_.begin(), ynew_.end(), y.begin());
      std::swap(k_[0], k_[6]);  // first-same-as-last
      ++accepted_;
      last_rejected = false;
      // A clipped final step does not shrink the carried step size.
      h = clipped ? std::max(h, hnew) : hnew;
    } else {
      ++rejected_;
      h = hstep / std::min(1.0 / kMinShrink, fac11 / kSafety);
      last_rejected = true;
    }
  }
  h_ = h;
}

Propagator::Propagator(const TimePeriodicGenerator& gen, IntegratorConfig cfg)
    : gen_(gen),
      rhs_gen_(gen.integration_generator() ? *gen.integration_generator() : gen),
      stepper_(gen.vec_dim(), cfg),
      rhs_([this](double t, std::span<const Complex> y, std::span<Complex> dy) {
        rhs_gen_.apply(t, y, dy);
      }) {}

void Propagator::advance(std::span<Complex> v, double t0, double t1) {
  if (v.size() != gen_.vec_dim()) throw DimensionError("Propagator: state length mismatch");
  const auto& kt = kernels::active();
  if (gen_.integration_frame() != nullptr) {
    CVector p0 = gen_.frame_phases(t0);
    for (auto& z : p0) z = std::conj(z);
    kt.scale_elementwise(v.size(), p0.data(), v.data());
    stepper_.advance(rhs_, t0, t1, v);
    const CVector p1 = gen_.frame_phases(t1);
    kt.scale_elementwise(v.size(), p1.data(), v.data());
  } else {
    stepper_.advance(rhs_, t0, t1, v);
  }
}

CVector Propagator::propagate(std::span<const Complex> v, double t0, double t1) {
  CVector out(v.begin(), v.end());
  advance(out, t0, t1);
  return out;
}

CVector integrate(const TimePeriodicGenerator& gen, std::span<const Complex> v, double t0,
                  double t1, const IntegratorConfig& cfg) {
  Propagator prop(gen, cfg);
  return prop.propagate(v, t0, t1);
}

}  // namespace floquet
