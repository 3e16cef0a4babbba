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

#include <cstddef>
#include <functional>
#include <span>

#include "floquet/lindblad.hpp"
#include "floquet/tensor.hpp"

namespace floquet {

struct IntegratorConfig {
  enum class Method { DormandPrince54 };

  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 10'000'000;
  Method method = Method::DormandPrince54;

  /// Throws DomainError on non-positive tolerances or a zero step budget.
  void validate() const;
};

/// dy = f(t, y)
using Rhs = std::function<void(double, std::span<const Complex>, std::span<Complex>)>;

/// Adaptive Dormand-Prince 5(4) with FSAL and a PI step-size controller.
/// The local error is measured in the Euclidean norm of the whole state:
/// err = |e| / (atol + rtol * max(|y_n|, |y_{n+1}|)).
/// The accepted step size carries over between advance() calls.
class DormandPrince {
 public:
  DormandPrince(std::size_t n, IntegratorConfig cfg);

  /// Advances y from t0 to t1 in place. Throws IntegrationError when the
  /// step budget is exhausted or the step size underflows.
  void advance(const Rhs& f, double t0, double t1, std::span<Complex> y);

  std::size_t accepted_steps() const noexcept { return accepted_; }
  std::size_t rejected_steps() const noexcept { return rejected_; }
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  double initial_step(const Rhs& f, double t, std::span<const Complex> y, double span);

  std::size_t n_;
  IntegratorConfig cfg_;
  CVector k_[7];
  CVector ytmp_;
  CVector ynew_;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  std::size_t evaluations_ = 0;
};

/// Propagates vectorized states under a generator. When the generator carries
/// an integration frame the ODE is solved in that frame and the result is
/// mapped back, so the returned state is always in the lab frame.
class Propagator {
 public:
  /// `gen` must outlive the propagator.
  Propagator(const TimePeriodicGenerator& gen, IntegratorConfig cfg);
  Propagator(const Propagator&) = delete;
  Propagator& operator=(const Propagator&) = delete;

  void advance(std::span<Complex> v, double t0, double t1);
  CVector propagate(std::span<const Complex> v, double t0, double t1);

  const DormandPrince& stepper() const noexcept { return stepper_; }

 private:
  const TimePeriodicGenerator& gen_;
  const TimePeriodicGenerator& rhs_gen_;
  DormandPrince stepper_;
  Rhs rhs_;
};

CVector integrate(const TimePeriodicGenerator& gen, std::span<const Complex> v, double t0,
                  double t1, const IntegratorConfig& cfg = {});

}  // namespace floquet
