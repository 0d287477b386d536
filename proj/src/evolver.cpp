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

#include "pulsevo/evolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>

#include "pulsevo/errors.hpp"
#include "pulsevo/segmentation.hpp"

namespace pulsevo {

namespace {

constexpr cplx kMinusI{0.0, -1.0};

void require_dim(const ComplexMatrix& m, std::size_t dim, const std::string& field) {
  if (m.dim() != dim) {
    throw DimensionError(field + " has dimension " + std::to_string(m.dim()) + ", expected " +
                         std::to_string(dim));
  }
}

/// Scratch space shared by the Lindblad right-hand side across calls.
struct LindbladWork {
  explicit LindbladWork(std::size_t dim)
      : h(dim), h_eff(dim), h_eff_dag(dim), rho(dim), left(dim), right(dim), tmp(dim), sum_cdc(dim) {}

  ComplexMatrix h, h_eff, h_eff_dag, rho, left, right, tmp, sum_cdc;
  std::vector<ComplexMatrix> c, c_dag;
};

QuantumState to_state(const StateVector& flat, bool density, std::size_t dim) {
  if (density) return QuantumState::density_unchecked(unvectorize(flat, dim));
  return QuantumState::ket_unchecked(flat);
}

struct Evolution {
  std::vector<StateVector> samples;
  EvolveMetadata meta;
};

RhsClosure make_rhs(const EvolveSpec& spec, HamiltonianFunction h, std::size_t* counter) {
  const std::size_t dim = spec.sequence.dim();
  if (spec.uses_density_matrix()) return lindblad_rhs(std::move(h), dim, spec.collapse_ops, counter);
  return schrodinger_rhs(std::move(h), dim, counter);
}

Evolution run_segmented(const EvolveSpec& spec, const StateVector& y0) {
  const PulseSequence& seq = spec.sequence;
  const double t0 = spec.times.front();
  const double t1 = spec.times.back();
  const SegmentPlan plan = segmentize(seq, t0, t1);

  Evolution ev;
  ev.meta.segment_count = plan.size();
  ev.samples.reserve(spec.times.size());

  StateVector y = y0;
  std::size_t next = 0;
  std::vector<double> local_times;
  for (std::size_t k = 0; k < plan.segments.size(); ++k) {
    const Segment& s = plan.segments[k];
    const bool last = k + 1 == plan.segments.size();
    local_times.clear();
    // A time on a shared boundary belongs to the segment that starts there.
    while (next < spec.times.size() && (spec.times[next] < s.t_b || last)) {
      local_times.push_back(std::clamp(spec.times[next], s.t_a, s.t_b));
      ++next;
    }

    auto hamiltonian = std::make_shared<SegmentHamiltonian>(seq, s);
    HamiltonianFunction h = [hamiltonian](double t, ComplexMatrix& out) {
      return hamiltonian->evaluate_into(t, out);
    };
    const RhsClosure rhs = make_rhs(spec, std::move(h), &ev.meta.pulse_term_evaluations);
    IntegrationResult r = integrate(rhs, y, s.t_a, s.t_b, local_times, spec.ode);
    ev.meta.integration += r.stats;
    for (auto& sample : r.samples) ev.samples.push_back(std::move(sample));
    y = std::move(r.final_state);
  }
  return ev;
}

Evolution run_naive(const EvolveSpec& spec, const StateVector& y0) {
  const PulseSequence& seq = spec.sequence;
  Evolution ev;
  ev.meta.segment_count = 1;
  HamiltonianFunction h = [&seq](double t, ComplexMatrix& out) {
    return accumulate_total_hamiltonian(seq, t, out);
  };
  const RhsClosure rhs = make_rhs(spec, std::move(h), &ev.meta.pulse_term_evaluations);
  IntegrationResult r =
      integrate(rhs, y0, spec.times.front(), spec.times.back(), spec.times, spec.ode);
  ev.meta.integration = r.stats;
  ev.samples = std::move(r.samples);
  return ev;
}

}  // namespace

std::string_view to_string(Engine engine) {
  return engine == Engine::Segmented ? "segmented" : "naive";
}

std::optional<Engine> engine_from_string(std::string_view name) {
  if (name == "segmented") return Engine::Segmented;
  if (name == "naive") return Engine::Naive;
  return std::nullopt;
}

void EvolveSpec::validate() const {
  if (times.empty()) throw TimingError("times", "at least one evaluation time is required");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw TimingError("times", "evaluation times must be finite");
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw TimingError("times", "evaluation times must be strictly increasing");
    }
  }
  const std::size_t dim = sequence.dim();
  if (initial.dim() != dim) {
    throw DimensionError("initial state has dimension " + std::to_string(initial.dim()) +
                         ", sequence has " + std::to_string(dim));
  }
  for (std::size_t k = 0; k < collapse_ops.size(); ++k) {
    require_dim(collapse_ops[k], dim, "collapse_ops[" + std::to_string(k) + "]");
  }
  for (std::size_t k = 0; k < e_ops.size(); ++k) {
    require_dim(e_ops[k], dim, "e_ops[" + std::to_string(k) + "]");
  }
  ode.validate();
}

RhsClosure schrodinger_rhs(HamiltonianFunction hamiltonian, std::size_t dim,
                           std::size_t* term_counter) {
  auto work = std::make_shared<ComplexMatrix>(dim);
  RhsFunction f = [hamiltonian = std::move(hamiltonian), work, term_counter](
                      double t, std::span<const cplx> psi, std::span<cplx> dpsi) {
    const std::size_t terms = hamiltonian(t, *work);
    if (term_counter) *term_counter += terms;
    work->apply(psi, dpsi);
    for (auto& z : dpsi) z *= kMinusI;
  };
  return RhsClosure{dim, std::move(f)};
}

RhsClosure lindblad_rhs(HamiltonianFunction hamiltonian, std::size_t dim,
                        const std::vector<ComplexMatrix>& collapse_ops, std::size_t* term_counter) {
  auto work = std::make_shared<LindbladWork>(dim);
  for (const auto& c : collapse_ops) {
    require_dim(c, dim, "collapse operator");
    work->c.push_back(c);
    work->c_dag.push_back(dagger(c));
    work->sum_cdc += work->c_dag.back() * c;
  }
  RhsFunction f = [hamiltonian = std::move(hamiltonian), work, dim, term_counter](
                      double t, std::span<const cplx> y, std::span<cplx> dy) {
    LindbladWork& w = *work;
    const std::size_t terms = hamiltonian(t, w.h);
    if (term_counter) *term_counter += terms;

    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t i = 0; i < dim; ++i) w.rho(i, j) = y[i + j * dim];
    }
    // H_eff = H - i/2 sum C^+C, so -i[H, rho] - 1/2{sum C^+C, rho}
    //       = -i (H_eff rho - rho H_eff^+).
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        w.h_eff(i, j) = w.h(i, j) - cplx(0.0, 0.5) * w.sum_cdc(i, j);
        w.h_eff_dag(j, i) = std::conj(w.h_eff(i, j));
      }
    }
    multiply_into(w.h_eff, w.rho, w.left);
    multiply_into(w.rho, w.h_eff_dag, w.right);
    w.left -= w.right;
    w.left *= kMinusI;
    for (std::size_t k = 0; k < w.c.size(); ++k) {
      multiply_into(w.c[k], w.rho, w.tmp);
      multiply_into(w.tmp, w.c_dag[k], w.right);
      w.left += w.right;
    }
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t i = 0; i < dim; ++i) dy[i + j * dim] = w.left(i, j);
    }
  };
  return RhsClosure{dim * dim, std::move(f)};
}

EvolveResult evolve(const EvolveSpec& spec) {
  spec.validate();
  const std::size_t dim = spec.sequence.dim();
  const bool density = spec.uses_density_matrix();
  const double t0 = spec.times.front();
  const double t1 = spec.times.back();

  StateVector y0 = density ? (spec.initial.is_ket() ? to_density(spec.initial) : spec.initial).flatten()
                           : spec.initial.amplitudes();

  EvolveResult result;
  result.times = spec.times;

  const auto started = std::chrono::steady_clock::now();
  Evolution ev;
  if (spec.times.size() == 1) {
    ev.samples.push_back(y0);
  } else if (spec.engine == Engine::Segmented) {
    ev = run_segmented(spec, y0);
  } else {
    ev = run_naive(spec, y0);
  }
  const auto finished = std::chrono::steady_clock::now();

  result.meta = ev.meta;
  result.meta.engine = spec.engine;
  result.meta.wall_seconds = std::chrono::duration<double>(finished - started).count();
  for (const Pulse& p : spec.sequence.pulses()) {
    if (p.end() <= t0 || p.start() >= t1) ++result.meta.pulses_outside_window;
  }

  result.states.reserve(ev.samples.size());
  for (const auto& flat : ev.samples) result.states.push_back(to_state(flat, density, dim));

  if (!spec.e_ops.empty()) {
    result.expectations.assign(spec.e_ops.size(), {});
    for (std::size_t j = 0; j < spec.e_ops.size(); ++j) {
      result.expectations[j].reserve(result.states.size());
      for (const auto& state : result.states) {
        result.expectations[j].push_back(expect(spec.e_ops[j], state));
      }
    }
    result.states.clear();
  }
  return result;
}

double evolve_compare(const EvolveSpec& spec) {
  EvolveSpec probe = spec;
  probe.e_ops.clear();
  probe.engine = Engine::Segmented;
  const EvolveResult segmented = evolve(probe);
  probe.engine = Engine::Naive;
  const EvolveResult naive = evolve(probe);

  double worst = 0.0;
  for (std::size_t k = 0; k < segmented.states.size(); ++k) {
    worst = std::max(worst, max_abs_diff(segmented.states[k].flatten(), naive.states[k].flatten()));
  }
  return worst;
}

}  // namespace pulsevo
