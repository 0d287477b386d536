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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pulsevo/evolver.hpp"

namespace pulsevo {

/// Wall-clock scaling experiment: simulation time versus sequence duration
/// tau, for several pulse counts n, with both engines.
struct BenchConfig {
  std::vector<std::size_t> n_values{5, 10, 20, 50};
  std::vector<double> tau_values{20.0, 40.0, 60.0, 80.0, 100.0};
  std::size_t repeats = 20;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
  std::vector<Engine> engines{Engine::Segmented, Engine::Naive};
  OdeOptions ode;
  /// Run (n, tau) cells on worker threads. Contaminates timings; off by default.
  bool parallel_cells = false;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Synthetic benchmark drive on a `dim`-level system: n equal sinusoid
/// pulses on a tridiagonal hopping operator, one per slot of length tau / n,
/// each occupying the middle half of its slot, over a fixed static
/// Hamiltonian. Pulse phases are drawn from `seed`.
PulseSequence make_bench_sequence(std::size_t n, double tau, std::size_t dim, std::uint64_t seed);

/// Bench sequence with |0> initial state and 11 output times over [0, tau].
EvolveSpec make_bench_spec(std::size_t n, double tau, std::size_t dim, std::uint64_t seed,
                           const OdeOptions& ode, Engine engine);

struct BenchCell {
  Engine engine = Engine::Segmented;
  std::size_t n = 0;
  double tau = 0.0;
  std::size_t repeats = 0;
  double mean_s = 0.0;
  double std_s = 0.0;
  std::size_t segments = 0;
  /// "ok", or the reason the cell was skipped.
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
};

struct SlopeFit {
  Engine engine = Engine::Segmented;
  std::size_t n = 0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 distinct x;
/// the standard error is 0 with exactly two points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);
double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_stddev(std::span<const double> v);
double pearson(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Called after each finished cell.
using BenchProgress = std::function<void(const BenchCell&)>;

/// Times every (engine, n, tau) cell: one discarded warm-up run, then
/// `repeats` timed evolve calls. Numerical failures mark the cell's status
/// instead of throwing.
std::vector<BenchCell> run_bench(const BenchConfig& config, const BenchProgress& progress = {});

/// Least-squares T_S versus tau per (engine, n) over the ok cells.
std::vector<SlopeFit> fit_slopes(std::span<const BenchCell> cells);

void write_bench_csv(std::ostream& os, std::span<const BenchCell> cells);
std::vector<BenchCell> read_bench_csv(std::istream& is);
void write_slopes_csv(std::ostream& os, std::span<const SlopeFit> slopes);

}  // namespace pulsevo
