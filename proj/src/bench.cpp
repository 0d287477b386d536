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

#include "pulsevo/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "pulsevo/errors.hpp"
#include "pulsevo/format.hpp"
#include "pulsevo/result_file.hpp"

namespace pulsevo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Level spacing of the static Hamiltonian and drive frequency (resonant).
constexpr double kLevelSpacing = kTwoPi * 2.0;
constexpr double kDriveAmplitude = kTwoPi * 1.0;
constexpr std::size_t kOutputTimes = 11;

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

BenchCell time_cell(const BenchConfig& config, Engine engine, std::size_t n, double tau) {
  BenchCell cell{engine, n, tau, config.repeats, 0.0, 0.0, 0, "ok"};
  try {
    const EvolveSpec spec = make_bench_spec(n, tau, config.dim, config.seed, config.ode, engine);
    cell.segments = evolve(spec).meta.segment_count;  // warm-up, discarded
    std::vector<double> samples;
    samples.reserve(config.repeats);
    for (std::size_t r = 0; r < config.repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const EvolveResult result = evolve(spec);
      const auto t1 = std::chrono::steady_clock::now();
      samples.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    cell.mean_s = mean(samples);
    cell.std_s = sample_stddev(samples);
  } catch (const Error& e) {
    cell.status = e.what();
  }
  return cell;
}

}  // namespace

void BenchConfig::validate() const {
  if (n_values.empty()) throw ValidationError("n", "at least one pulse count is required");
  if (std::any_of(n_values.begin(), n_values.end(), [](std::size_t n) { return n == 0; })) {
    throw ValidationError("n", "pulse counts must be >= 1");
  }
  if (tau_values.size() < 2) throw ValidationError("tau", "at least two durations are required");
  if (std::any_of(tau_values.begin(), tau_values.end(),
                  [](double t) { return !(t > 0.0) || !std::isfinite(t); })) {
    throw ValidationError("tau", "durations must be > 0");
  }
  if (repeats < 3) throw ValidationError("repeats", "repeats must be >= 3");
  if (dim < 2) throw ValidationError("dim", "dim must be >= 2");
  if (engines.empty()) throw ValidationError("engines", "at least one engine is required");
  ode.validate();
}

PulseSequence make_bench_sequence(std::size_t n, double tau, std::size_t dim, std::uint64_t seed) {
  ComplexMatrix hopping(dim);
  ComplexMatrix levels(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    levels(k, k) = kLevelSpacing * static_cast<double>(k);
    if (k + 1 < dim) {
      hopping(k, k + 1) = 1.0;
      hopping(k + 1, k) = 1.0;
    }
  }
  auto recipe = std::make_shared<const PulseRecipe>(
      "drive", std::move(hopping), Envelope::sinusoid(),
      std::map<std::string, double>{{"amp", kDriveAmplitude}, {"omega", kLevelSpacing}});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double slot = tau / static_cast<double>(n);
  std::vector<Pulse> pulses;
  pulses.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pulses.push_back(make_pulse(recipe, {{"phase", phase(rng)}},
                                (static_cast<double>(i) + 0.25) * slot, 0.5 * slot));
  }
  return PulseSequence(std::move(pulses), std::move(levels));
}

EvolveSpec make_bench_spec(std::size_t n, double tau, std::size_t dim, std::uint64_t seed,
                           const OdeOptions& ode, Engine engine) {
  std::vector<double> times(kOutputTimes);
  for (std::size_t k = 0; k < kOutputTimes; ++k) {
    times[k] = tau * static_cast<double>(k) / static_cast<double>(kOutputTimes - 1);
  }
  times.back() = tau;
  return EvolveSpec{make_bench_sequence(n, tau, dim, seed), QuantumState::basis(dim, 0), std::move(times),
                    {}, {}, ode, engine};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("fit", "line fit needs at least two (x, y) points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit", "line fit needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (f.intercept + f.slope * x[i]);
      ss += r * r;
    }
    f.slope_stderr = std::sqrt(ss / static_cast<double>(x.size() - 2) / sxx);
  }
  return f;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("correlation", "needs at least two paired values");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

std::vector<BenchCell> run_bench(const BenchConfig& config, const BenchProgress& progress) {
  config.validate();
  struct Job {
    Engine engine;
    std::size_t n;
    double tau;
  };
  std::vector<Job> jobs;
  for (Engine e : config.engines) {
    for (std::size_t n : config.n_values) {
      for (double tau : config.tau_values) jobs.push_back({e, n, tau});
    }
  }

  std::vector<BenchCell> cells(jobs.size());
  if (!config.parallel_cells) {
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      cells[k] = time_cell(config, jobs[k].engine, jobs[k].n, jobs[k].tau);
      if (progress) progress(cells[k]);
    }
    return cells;
  }

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < jobs.size(); begin += workers) {
    const std::size_t end = std::min(jobs.size(), begin + workers);
    std::vector<std::future<BenchCell>> batch;
    for (std::size_t k = begin; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, time_cell, std::cref(config), jobs[k].engine,
                                 jobs[k].n, jobs[k].tau));
    }
    for (std::size_t k = begin; k < end; ++k) {
      cells[k] = batch[k - begin].get();
      if (progress) progress(cells[k]);
    }
  }
  return cells;
}

std::vector<SlopeFit> fit_slopes(std::span<const BenchCell> cells) {
  std::map<std::pair<int, std::size_t>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const BenchCell& c : cells) {
    if (!c.ok()) continue;
    auto& [x, y] = groups[{static_cast<int>(c.engine), c.n}];
    x.push_back(c.tau);
    y.push_back(c.mean_s);
  }
  std::vector<SlopeFit> fits;
  for (const auto& [key, xy] : groups) {
    if (xy.first.size() < 2) continue;
    const LineFit f = fit_line(xy.first, xy.second);
    fits.push_back({static_cast<Engine>(key.first), key.second, f.slope, f.slope_stderr, f.intercept,
                    xy.first.size()});
  }
  return fits;
}

void write_bench_csv(std::ostream& os, std::span<const BenchCell> cells) {
  os << "engine,n,tau_s,repeats,mean_s,std_s,segments,status\n";
  for (const BenchCell& c : cells) {
    os << to_string(c.engine) << ',' << c.n << ',' << format_double(c.tau) << ',' << c.repeats << ','
       << format_double(c.mean_s) << ',' << format_double(c.std_s) << ',' << c.segments << ','
       << csv_escape(c.status) << '\n';
  }
}

std::vector<BenchCell> read_bench_csv(std::istream& is) {
  const CsvTable t = read_csv(is);
  const std::size_t c_engine = t.column("engine"), c_n = t.column("n"), c_tau = t.column("tau_s"),
                    c_rep = t.column("repeats"), c_mean = t.column("mean_s"),
                    c_std = t.column("std_s"), c_seg = t.column("segments"),
                    c_status = t.column("status");
  std::vector<BenchCell> cells;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto engine = engine_from_string(t.rows[r][c_engine]);
    if (!engine) {
      throw ParseError("row " + std::to_string(r + 1), "unknown engine '" + t.rows[r][c_engine] + "'");
    }
    BenchCell c;
    c.engine = *engine;
    c.n = static_cast<std::size_t>(t.number(r, c_n));
    c.tau = t.number(r, c_tau);
    c.repeats = static_cast<std::size_t>(t.number(r, c_rep));
    c.mean_s = t.number(r, c_mean);
    c.std_s = t.number(r, c_std);
    c.segments = static_cast<std::size_t>(t.number(r, c_seg));
    c.status = t.rows[r][c_status];
    cells.push_back(std::move(c));
  }
  return cells;
}

void write_slopes_csv(std::ostream& os, std::span<const SlopeFit> slopes) {
  os << "engine,n,slope,stderr,intercept,points\n";
  for (const SlopeFit& s : slopes) {
    os << to_string(s.engine) << ',' << s.n << ',' << format_double(s.slope) << ','
       << format_double(s.slope_stderr) << ',' << format_double(s.intercept) << ',' << s.points << '\n';
  }
}

}  // namespace pulsevo
