// Copyright 2026 The Pulsevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pulsevo/linalg.hpp"

namespace pulsevo {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  /// Defaults to the length of the integration interval.
  std::optional<double> max_step;
  /// Defaults to the Hairer-Norsett-Wanner starting-step heuristic.
  std::optional<double> initial_step;
  std::size_t max_steps = 1'000'000;

  /// Throws ValidationError naming the offending option.
  void validate() const;

  friend bool operator==(const OdeOptions&, const OdeOptions&) = default;
};

/// dy/dt = f(t, y) over flat complex vectors. `dydt` never aliases `y`.
using RhsFunction = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dydt)>;

struct RhsClosure {
  std::size_t dim = 0;
  RhsFunction f;
};

struct IntegrationStats {
  std::size_t rhs_evaluations = 0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  IntegrationStats& operator+=(const IntegrationStats& o) {
    rhs_evaluations += o.rhs_evaluations;
    accepted_steps += o.accepted_steps;
    rejected_steps += o.rejected_steps;
    return *this;
  }
};

struct IntegrationResult {
  /// One state per requested evaluation time.
  std::vector<StateVector> samples;
  /// State at t_b.
  StateVector final_state;
  IntegrationStats stats;
};

/// Integrates y' = f(t, y) from t_a to t_b with adaptive Dormand-Prince 5(4).
///
/// Step acceptance uses the max-norm
///   err = max_i |e_i| / (atol + rtol * max(|y_old_i|, |y_new_i|))
/// with safety factor 0.9 and step-ratio clamp [0.2, 5]. States at
/// `eval_times` come from the method's 4th-order dense output, so requested
/// times never constrain the step sequence. The last step lands on t_b
/// exactly.
///
/// Throws TimingError for a bad interval or unsorted/out-of-range
/// eval_times, StiffnessError when the step underflows 1e-15 * (t_b - t_a),
/// BudgetError after opts.max_steps steps and NumericsError on NaN/Inf.
IntegrationResult integrate(const RhsClosure& rhs, std::span<const cplx> y0, double t_a, double t_b,
                            std::span<const double> eval_times, const OdeOptions& opts = {});

}  // namespace pulsevo
