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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pulsevo/linalg.hpp"

namespace pulsevo {

enum class EnvelopeKind { Constant, Sinusoid, Gaussian, SmoothedSquare, TabulatedSamples, NativeCallback };

std::string_view to_string(EnvelopeKind kind);
/// Inverse of to_string; returns nullopt for unknown names.
std::optional<EnvelopeKind> envelope_kind_from_string(std::string_view name);

struct ParamSpec {
  std::string name;
  std::optional<double> default_value;

  friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct PulseTiming {
  double start = 0.0;
  double duration = 0.0;
};

/// User envelope. Must be pure and safe to call concurrently.
using EnvelopeCallback =
    std::function<double(std::span<const double> params, double t, PulseTiming timing)>;

/// Real scalar envelope f(x, t) of a pulse.
///
/// Parameters are passed positionally in schema order:
///   Constant          amp
///   Sinusoid          amp, omega, phase = 0       amp * cos(omega * (t - start) + phase)
///   Gaussian          amp, center, sigma          center is an absolute time
///   SmoothedSquare    amp, ramp = 0               cosine ramps of length `ramp` at both edges
///   TabulatedSamples  amp = 1                     amp * linear interpolation of samples,
///                                                 sample times relative to pulse start,
///                                                 held constant beyond the first/last sample
class Envelope {
 public:
  static Envelope constant();
  static Envelope sinusoid();
  static Envelope gaussian();
  static Envelope smoothed_square();
  /// Throws ParamError unless times are strictly increasing, sizes match and
  /// at least one sample is given.
  static Envelope tabulated(std::vector<double> times, std::vector<double> values);
  static Envelope native(std::vector<ParamSpec> schema, EnvelopeCallback fn);
  /// Builtin envelope by kind; TabulatedSamples and NativeCallback need data
  /// and are rejected with ParamError.
  static Envelope builtin(EnvelopeKind kind);

  EnvelopeKind kind() const noexcept { return kind_; }
  const std::vector<ParamSpec>& schema() const noexcept { return schema_; }
  const std::vector<double>& sample_times() const noexcept { return sample_times_; }
  const std::vector<double>& sample_values() const noexcept { return sample_values_; }

  double operator()(std::span<const double> params, double t, PulseTiming timing) const;

  /// Shape constraints that depend on bound parameters and timing, e.g.
  /// sigma > 0 or 2 * ramp <= duration. Throws ParamError.
  void validate(std::span<const double> params, PulseTiming timing) const;

  /// Native callbacks compare equal only to themselves (same target object).
  friend bool operator==(const Envelope& a, const Envelope& b);

 private:
  Envelope(EnvelopeKind kind, std::vector<ParamSpec> schema)
      : kind_(kind), schema_(std::move(schema)) {}

  EnvelopeKind kind_;
  std::vector<ParamSpec> schema_;
  std::vector<double> sample_times_;
  std::vector<double> sample_values_;
  std::shared_ptr<const EnvelopeCallback> callback_;
};

/// Reusable pulse form: a Hermitian operator times an envelope, plus a
/// parameter schema whose defaults may be overridden per recipe.
class PulseRecipe {
 public:
  /// Throws ValidationError if `op` is not Hermitian to 1e-9 and ParamError
  /// if a default names a parameter outside the envelope schema.
  PulseRecipe(std::string name, ComplexMatrix op, Envelope envelope,
              const std::map<std::string, double>& defaults = {});

  const std::string& name() const noexcept { return name_; }
  const ComplexMatrix& op() const noexcept { return op_; }
  const Envelope& envelope() const noexcept { return envelope_; }
  /// Envelope schema with recipe defaults applied.
  const std::vector<ParamSpec>& schema() const noexcept { return schema_; }
  /// The defaults passed at construction (not the envelope's own).
  const std::map<std::string, double>& recipe_defaults() const noexcept { return recipe_defaults_; }

  friend bool operator==(const PulseRecipe&, const PulseRecipe&) = default;

 private:
  std::string name_;
  ComplexMatrix op_;
  Envelope envelope_;
  std::vector<ParamSpec> schema_;
  std::map<std::string, double> recipe_defaults_;
};

using RecipePtr = std::shared_ptr<const PulseRecipe>;

/// One timed Hamiltonian term O * f(x, t), active on [start, start + duration).
class Pulse {
 public:
  const PulseRecipe& recipe() const noexcept { return *recipe_; }
  const RecipePtr& recipe_ptr() const noexcept { return recipe_; }
  /// Bound parameters in schema order.
  const std::vector<double>& params() const noexcept { return params_; }
  /// Bound parameters by name.
  std::map<std::string, double> named_params() const;
  double start() const noexcept { return start_; }
  double duration() const noexcept { return duration_; }
  double end() const noexcept { return start_ + duration_; }
  const std::string& label() const noexcept { return label_; }

  bool is_active(double t) const noexcept { return start_ <= t && t < start_ + duration_; }

  /// f(x, t) without a window check.
  double envelope_at(double t) const {
    return recipe_->envelope()(params_, t, PulseTiming{start_, duration_});
  }

  friend bool operator==(const Pulse& a, const Pulse& b);

 private:
  friend Pulse make_pulse(RecipePtr, const std::map<std::string, double>&, double, double,
                          std::string);

  RecipePtr recipe_;
  std::vector<double> params_;
  double start_ = 0.0;
  double duration_ = 0.0;
  std::string label_;
};

/// Binds parameters against the recipe schema.
///
/// Throws ParamError for missing or unknown parameters and for envelope
/// shape violations; TimingError if duration <= 0 or start/duration are
/// not finite.
Pulse make_pulse(RecipePtr recipe, const std::map<std::string, double>& params, double start,
                 double duration, std::string label = {});

/// O * f(x, t). Throws WindowError if t is outside [start, start + duration).
ComplexMatrix pulse_hamiltonian_at(const Pulse& pulse, double t);

/// Pulses plus an optional always-on static Hamiltonian.
class PulseSequence {
 public:
  /// Throws DimensionError if operator dimensions disagree and
  /// ValidationError if there are neither pulses nor a static Hamiltonian,
  /// or if the static Hamiltonian is not Hermitian.
  PulseSequence(std::vector<Pulse> pulses, std::optional<ComplexMatrix> static_hamiltonian = {});

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
  const std::optional<ComplexMatrix>& static_hamiltonian() const noexcept { return static_h_; }

  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;

 private:
  std::vector<Pulse> pulses_;
  std::optional<ComplexMatrix> static_h_;
  std::size_t dim_ = 0;
};

/// H_static + sum of O_i * f_i(x_i, t) over pulses active at t.
ComplexMatrix total_hamiltonian_at(const PulseSequence& seq, double t);

/// In-place form of total_hamiltonian_at used inside ODE right-hand sides.
///
/// This is the generic per-time assembly: every pulse term is visited, its
/// window is checked and its coefficient (zero when inactive) is accumulated.
/// Returns the number of pulse terms visited.
std::size_t accumulate_total_hamiltonian(const PulseSequence& seq, double t, ComplexMatrix& out);

}  // namespace pulsevo
