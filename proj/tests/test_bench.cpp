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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pulsevo/bench.hpp"
#include "pulsevo/errors.hpp"
#include "pulsevo/segmentation.hpp"

namespace pulsevo {
namespace {

TEST(Stats, FitLineExact) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-14);
}

TEST(Stats, FitLineStderr) {
  // x = 0..3 centred: sxx = 5, sxy = 4
  const std::vector<double> x{0, 1, 2, 3}, y{0.5, 0.5, 2.5, 2.5};
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 0.8, 1e-14);
  double ss = 0.0;
  for (int i = 0; i < 4; ++i) ss += std::pow(y[i] - (f.intercept + f.slope * x[i]), 2);
  EXPECT_NEAR(f.slope_stderr, std::sqrt(ss / 2.0 / 5.0), 1e-14);
  EXPECT_THROW(fit_line(std::vector<double>{1}, std::vector<double>{1}), ValidationError);
  EXPECT_THROW(fit_line(std::vector<double>{1, 1}, std::vector<double>{1, 2}), ValidationError);
}

TEST(Stats, MeanStddevCorrelations) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(mean(v), 5.0);
  EXPECT_NEAR(sample_stddev(v), std::sqrt(32.0 / 7.0), 1e-14);
  EXPECT_EQ(sample_stddev(std::vector<double>{1.0}), 0.0);

  const std::vector<double> n{5, 10, 20, 50}, lin{1, 2, 4, 10}, mono{1, 2, 3, 100}, down{4, 3, 2, 1};
  EXPECT_NEAR(pearson(n, lin), 1.0, 1e-14);
  EXPECT_NEAR(spearman(n, mono), 1.0, 1e-14);
  EXPECT_NEAR(spearman(n, down), -1.0, 1e-14);
  EXPECT_LT(pearson(n, mono), 1.0);
  // ties get average ranks
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 2}), std::sqrt(0.75), 1e-14);
}

TEST(BenchSequence, Layout) {
  for (std::size_t n : {1u, 5u, 20u}) {
    const double tau = 20.0;
    const PulseSequence seq = make_bench_sequence(n, tau, 3, 7);
    ASSERT_EQ(seq.pulses().size(), n);
    EXPECT_EQ(seq.dim(), 3u);
    ASSERT_TRUE(seq.static_hamiltonian());
    for (std::size_t i = 0; i < n; ++i) {
      const Pulse& p = seq.pulses()[i];
      EXPECT_EQ(p.recipe().envelope().kind(), EnvelopeKind::Sinusoid);
      EXPECT_NEAR(p.duration(), 0.5 * tau / n, 1e-12);
      if (i > 0) EXPECT_GT(p.start(), seq.pulses()[i - 1].end());
    }
    EXPECT_EQ(segmentize(seq, 0.0, tau).size(), 2 * n + 1);
  }
  EXPECT_EQ(make_bench_sequence(5, 10.0, 2, 1), make_bench_sequence(5, 10.0, 2, 1));
}

TEST(BenchSpec, RunsOnBothEngines) {
  for (Engine e : {Engine::Segmented, Engine::Naive}) {
    const EvolveSpec spec = make_bench_spec(4, 2.0, 2, 0, OdeOptions{}, e);
    EXPECT_EQ(spec.times.size(), 11u);
    EXPECT_EQ(spec.times.back(), 2.0);
    EXPECT_EQ(evolve(spec).meta.engine, e);
  }
  OdeOptions tight;
  tight.rtol = 1e-10;
  tight.atol = 1e-12;
  const EvolveSpec spec = make_bench_spec(6, 3.0, 2, 0, tight, Engine::Segmented);
  EXPECT_LE(evolve_compare(spec), 1e-6);
}

TEST(Bench, ConfigValidation) {
  BenchConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.repeats, 20u);
  EXPECT_GE(c.tau_values.size(), 5u);
  c.repeats = 2;
  EXPECT_THROW(c.validate(), ValidationError);
  c = BenchConfig{};
  c.n_values = {};
  EXPECT_THROW(c.validate(), ValidationError);
  c = BenchConfig{};
  c.tau_values = {1.0, -1.0};
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Bench, SmallRunAndCsvRoundTrip) {
  BenchConfig c;
  c.n_values = {1, 2};
  c.tau_values = {1.0, 2.0, 3.0};
  c.repeats = 3;
  std::size_t seen = 0;
  const auto cells = run_bench(c, [&](const BenchCell&) { ++seen; });
  EXPECT_EQ(cells.size(), 12u);
  EXPECT_EQ(seen, cells.size());
  for (const auto& cell : cells) {
    EXPECT_TRUE(cell.ok()) << cell.status;
    EXPECT_GT(cell.mean_s, 0.0);
    EXPECT_EQ(cell.repeats, 3u);
    if (cell.engine == Engine::Naive) EXPECT_EQ(cell.segments, 1u);
    else EXPECT_EQ(cell.segments, 2 * cell.n + 1);
  }

  std::stringstream raw;
  write_bench_csv(raw, cells);
  const auto back = read_bench_csv(raw);
  ASSERT_EQ(back.size(), cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    EXPECT_EQ(back[k].engine, cells[k].engine);
    EXPECT_EQ(back[k].n, cells[k].n);
    EXPECT_EQ(back[k].tau, cells[k].tau);
    EXPECT_EQ(back[k].mean_s, cells[k].mean_s);
    EXPECT_EQ(back[k].std_s, cells[k].std_s);
    EXPECT_EQ(back[k].status, cells[k].status);
  }
  const auto slopes = fit_slopes(cells);
  EXPECT_EQ(slopes.size(), 4u);
  for (const auto& s : slopes) EXPECT_EQ(s.points, 3u);
}

TEST(Bench, FailedCellsAreSkippedInFits) {
  std::vector<BenchCell> cells(3);
  cells[0] = {Engine::Naive, 5, 1.0, 3, 1.0, 0.1, 1, "ok"};
  cells[1] = {Engine::Naive, 5, 2.0, 3, 2.0, 0.1, 1, "ok"};
  cells[2] = {Engine::Naive, 5, 3.0, 3, 0.0, 0.0, 1, "step budget, exceeded"};
  const auto fits = fit_slopes(cells);
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_EQ(fits[0].points, 2u);
  EXPECT_NEAR(fits[0].slope, 1.0, 1e-14);

  std::stringstream raw;
  write_bench_csv(raw, cells);
  EXPECT_EQ(read_bench_csv(raw)[2].status, "step budget, exceeded");
}

}  // namespace
}  // namespace pulsevo
