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
#include <string_view>
#include <vector>

#include "pulsevo/integrator.hpp"
#include "pulsevo/linalg.hpp"
#include "pulsevo/pulse.hpp"

namespace pulsevo {

enum class Engine {
  /// Integrate segment by segment, each segment seeing only its active pulses.
  Segmented,
  /// One integration over the whole window; every right-hand-side call
  /// visits every pulse and checks whether it is active.
  Naive,
};

std::string_view to_string(Engine engine);
std::optional<Engine> engine_from_string(std::string_view name);

struct EvolveSpec {
  PulseSequence sequence;
  QuantumState initial;
  /// Strictly increasing. The evolution window is [times.front(), times.back()].
  std::vector<double> times;
  /// Time-independent Lindblad channels. Non-empty forces density-matrix
  /// evolution; ket initial states are promoted.
  std::vector<ComplexMatrix> collapse_ops;
  /// If non-empty, the result carries expectation series instead of states.
  std::vector<ComplexMatrix> e_ops;
  OdeOptions ode;
  Engine engine = Engine::Segmented;

  /// Throws TimingError for bad times, DimensionError for mismatched
  /// operators and ValidationError for bad ODE options.
  void validate() const;
  bool uses_density_matrix() const noexcept { return !collapse_ops.empty() || !initial.is_ket(); }

  friend bool operator==(const EvolveSpec&, const EvolveSpec&) = default;
};

struct EvolveMetadata {
  Engine engine = Engine::Segmented;
  /// Segments integrated; 1 for the naive engine.
  std::size_t segment_count = 0;
  IntegrationStats integration;
  /// Per-pulse envelope evaluations (coefficient look-ups) summed over all
  /// right-hand-side calls.
  std::size_t pulse_term_evaluations = 0;
  /// Pulses lying entirely outside the evolution window; they are ignored.
  std::size_t pulses_outside_window = 0;
  double wall_seconds = 0.0;
};

struct EvolveResult {
  std::vector<double> times;
  /// Populated when no e_ops were given.
  std::vector<QuantumState> states;
  /// expectations[j][k] = <E_j>(t_k); populated when e_ops were given.
  std::vector<std::vector<cplx>> expectations;
  EvolveMetadata meta;

  bool has_expectations() const noexcept { return !expectations.empty(); }
};

/// Writes H(t) into the output matrix; returns how many pulse terms it
/// evaluated to do so.
using HamiltonianFunction = std::function<std::size_t(double t, ComplexMatrix& out)>;

/// dpsi/dt = -i H(t) psi. If `term_counter` is non-null it accumulates the
/// pulse-term counts reported by `hamiltonian`.
RhsClosure schrodinger_rhs(HamiltonianFunction hamiltonian, std::size_t dim,
                           std::size_t* term_counter = nullptr);

/// Lindblad generator on column-stacked density matrices:
///   drho/dt = -i[H, rho] + sum_k (C_k rho C_k^+ - 1/2 {C_k^+ C_k, rho})
/// applied matrix-wise (no superoperator is formed).
RhsClosure lindblad_rhs(HamiltonianFunction hamiltonian, std::size_t dim,
                        const std::vector<ComplexMatrix>& collapse_ops,
                        std::size_t* term_counter = nullptr);

EvolveResult evolve(const EvolveSpec& spec);

/// Runs both engines on `spec` and returns the largest elementwise state
/// difference over all requested times.
double evolve_compare(const EvolveSpec& spec);

}  // namespace pulsevo
