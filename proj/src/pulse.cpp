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

#include "pulsevo/pulse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "pulsevo/errors.hpp"

namespace pulsevo {

namespace {

constexpr std::array<std::pair<EnvelopeKind, std::string_view>, 6> kKindNames{{
    {EnvelopeKind::Constant, "constant"},
    {EnvelopeKind::Sinusoid, "sinusoid"},
    {EnvelopeKind::Gaussian, "gaussian"},
    {EnvelopeKind::SmoothedSquare, "smoothed_square"},
    {EnvelopeKind::TabulatedSamples, "tabulated"},
    {EnvelopeKind::NativeCallback, "native"},
}};

double raised_cosine(double x, double ramp) {
  return 0.5 * (1.0 - std::cos(std::numbers::pi * x / ramp));
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

}  // namespace

std::string_view to_string(EnvelopeKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<EnvelopeKind> envelope_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

Envelope Envelope::constant() { return Envelope(EnvelopeKind::Constant, {{"amp", {}}}); }

Envelope Envelope::sinusoid() {
  return Envelope(EnvelopeKind::Sinusoid, {{"amp", {}}, {"omega", {}}, {"phase", 0.0}});
}

Envelope Envelope::gaussian() {
  return Envelope(EnvelopeKind::Gaussian, {{"amp", {}}, {"center", {}}, {"sigma", {}}});
}

Envelope Envelope::smoothed_square() {
  return Envelope(EnvelopeKind::SmoothedSquare, {{"amp", {}}, {"ramp", 0.0}});
}

Envelope Envelope::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.empty() || times.size() != values.size()) {
    throw ParamError("samples", "tabulated envelope needs equally many (>= 1) times and values");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || !std::isfinite(values[k])) {
      throw ParamError("samples", "tabulated envelope samples must be finite");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw ParamError("samples", "tabulated envelope times must be strictly increasing");
    }
  }
  Envelope e(EnvelopeKind::TabulatedSamples, {{"amp", 1.0}});
  e.sample_times_ = std::move(times);
  e.sample_values_ = std::move(values);
  return e;
}

Envelope Envelope::native(std::vector<ParamSpec> schema, EnvelopeCallback fn) {
  if (!fn) throw ParamError("callback", "native envelope needs a callable");
  Envelope e(EnvelopeKind::NativeCallback, std::move(schema));
  e.callback_ = std::make_shared<const EnvelopeCallback>(std::move(fn));
  return e;
}

Envelope Envelope::builtin(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::Constant:
      return constant();
    case EnvelopeKind::Sinusoid:
      return sinusoid();
    case EnvelopeKind::Gaussian:
      return gaussian();
    case EnvelopeKind::SmoothedSquare:
      return smoothed_square();
    default:
      throw ParamError("kind", std::string(to_string(kind)) + " envelope needs explicit data");
  }
}

double Envelope::operator()(std::span<const double> p, double t, PulseTiming timing) const {
  switch (kind_) {
    case EnvelopeKind::Constant:
      return p[0];
    case EnvelopeKind::Sinusoid:
      return p[0] * std::cos(p[1] * (t - timing.start) + p[2]);
    case EnvelopeKind::Gaussian: {
      const double dt = t - p[1];
      return p[0] * std::exp(-dt * dt / (2.0 * p[2] * p[2]));
    }
    case EnvelopeKind::SmoothedSquare: {
      const double ramp = p[1];
      if (ramp > 0.0) {
        const double from_start = t - timing.start;
        const double to_end = timing.start + timing.duration - t;
        if (from_start < ramp) return p[0] * raised_cosine(std::max(from_start, 0.0), ramp);
        if (to_end < ramp) return p[0] * raised_cosine(std::max(to_end, 0.0), ramp);
      }
      return p[0];
    }
    case EnvelopeKind::TabulatedSamples:
      return p[0] * interpolate(sample_times_, sample_values_, t - timing.start);
    case EnvelopeKind::NativeCallback:
      return (*callback_)(p, t, timing);
  }
  return 0.0;
}

void Envelope::validate(std::span<const double> p, PulseTiming timing) const {
  switch (kind_) {
    case EnvelopeKind::Gaussian:
      if (!(p[2] > 0.0)) throw ParamError("sigma", "gaussian sigma must be > 0");
      break;
    case EnvelopeKind::SmoothedSquare:
      if (!(p[1] >= 0.0) || 2.0 * p[1] > timing.duration) {
        throw ParamError("ramp", "smoothed square needs 0 <= 2 * ramp <= duration");
      }
      break;
    default:
      break;
  }
}

bool operator==(const Envelope& a, const Envelope& b) {
  return a.kind_ == b.kind_ && a.schema_ == b.schema_ && a.sample_times_ == b.sample_times_ &&
         a.sample_values_ == b.sample_values_ && a.callback_ == b.callback_;
}

PulseRecipe::PulseRecipe(std::string name, ComplexMatrix op, Envelope envelope,
                         const std::map<std::string, double>& defaults)
    : name_(std::move(name)),
      op_(std::move(op)),
      envelope_(std::move(envelope)),
      schema_(envelope_.schema()),
      recipe_defaults_(defaults) {
  if (!op_.all_finite()) throw ValidationError("operator", "recipe operator has non-finite entries");
  if (!op_.is_hermitian()) {
    throw ValidationError("operator", "recipe '" + name_ + "' operator is not Hermitian");
  }
  for (const auto& [key, value] : defaults) {
    auto it = std::find_if(schema_.begin(), schema_.end(),
                           [&](const ParamSpec& s) { return s.name == key; });
    if (it == schema_.end()) {
      throw ParamError(key, "recipe '" + name_ + "' default for unknown parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw ParamError(key, "parameter default must be finite");
    it->default_value = value;
  }
}

std::map<std::string, double> Pulse::named_params() const {
  std::map<std::string, double> out;
  const auto& schema = recipe_->schema();
  for (std::size_t k = 0; k < schema.size(); ++k) out[schema[k].name] = params_[k];
  return out;
}

bool operator==(const Pulse& a, const Pulse& b) {
  const bool same_recipe = a.recipe_ == b.recipe_ || (a.recipe_ && b.recipe_ && *a.recipe_ == *b.recipe_);
  return same_recipe && a.params_ == b.params_ && a.start_ == b.start_ &&
         a.duration_ == b.duration_ && a.label_ == b.label_;
}

Pulse make_pulse(RecipePtr recipe, const std::map<std::string, double>& params, double start,
                 double duration, std::string label) {
  if (!recipe) throw ParamError("recipe", "pulse needs a recipe");
  if (!std::isfinite(start)) throw TimingError("start", "pulse start must be finite");
  if (!std::isfinite(duration) || !(duration > 0.0)) {
    throw TimingError("duration", "pulse duration must be > 0");
  }
  const auto& schema = recipe->schema();
  for (const auto& [key, value] : params) {
    const bool known = std::any_of(schema.begin(), schema.end(),
                                   [&](const ParamSpec& s) { return s.name == key; });
    if (!known) {
      throw ParamError(key, "unknown parameter '" + key + "' for recipe '" + recipe->name() + "'");
    }
    if (!std::isfinite(value)) throw ParamError(key, "parameter '" + key + "' must be finite");
  }

  Pulse p;
  p.params_.reserve(schema.size());
  for (const auto& spec : schema) {
    if (auto it = params.find(spec.name); it != params.end()) {
      p.params_.push_back(it->second);
    } else if (spec.default_value) {
      p.params_.push_back(*spec.default_value);
    } else {
      throw ParamError(spec.name, "missing parameter '" + spec.name + "' for recipe '" +
                                      recipe->name() + "'");
    }
  }
  recipe->envelope().validate(p.params_, PulseTiming{start, duration});
  p.recipe_ = std::move(recipe);
  p.start_ = start;
  p.duration_ = duration;
  p.label_ = std::move(label);
  return p;
}

ComplexMatrix pulse_hamiltonian_at(const Pulse& pulse, double t) {
  if (!pulse.is_active(t)) {
    throw WindowError("pulse evaluated at t=" + std::to_string(t) + " outside its window [" +
                      std::to_string(pulse.start()) + ", " + std::to_string(pulse.end()) + ")");
  }
  return pulse.recipe().op() * cplx(pulse.envelope_at(t));
}

PulseSequence::PulseSequence(std::vector<Pulse> pulses, std::optional<ComplexMatrix> static_hamiltonian)
    : pulses_(std::move(pulses)), static_h_(std::move(static_hamiltonian)) {
  if (pulses_.empty() && !static_h_) {
    throw ValidationError("pulses", "sequence needs at least one pulse or a static Hamiltonian");
  }
  dim_ = static_h_ ? static_h_->dim() : pulses_.front().recipe().op().dim();
  if (static_h_) {
    if (!static_h_->all_finite()) {
      throw ValidationError("static_hamiltonian", "static Hamiltonian has non-finite entries");
    }
    if (!static_h_->is_hermitian()) {
      throw ValidationError("static_hamiltonian", "static Hamiltonian is not Hermitian");
    }
  }
  for (std::size_t i = 0; i < pulses_.size(); ++i) {
    if (pulses_[i].recipe().op().dim() != dim_) {
      throw DimensionError("pulses[" + std::to_string(i) + "] operator has dimension " +
                           std::to_string(pulses_[i].recipe().op().dim()) + ", sequence has " +
                           std::to_string(dim_));
    }
  }
}

std::size_t accumulate_total_hamiltonian(const PulseSequence& seq, double t, ComplexMatrix& out) {
  if (seq.static_hamiltonian()) {
    std::copy(seq.static_hamiltonian()->data().begin(), seq.static_hamiltonian()->data().end(),
              out.data().begin());
  } else {
    out.set_zero();
  }
  for (const Pulse& p : seq.pulses()) {
    const double coefficient = p.is_active(t) ? p.envelope_at(t) : 0.0;
    out.add_scaled(p.recipe().op(), coefficient);
  }
  return seq.pulses().size();
}

ComplexMatrix total_hamiltonian_at(const PulseSequence& seq, double t) {
  ComplexMatrix h(seq.dim());
  accumulate_total_hamiltonian(seq, t, h);
  return h;
}

}  // namespace pulsevo
