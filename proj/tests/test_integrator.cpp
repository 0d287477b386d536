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
#include <limits>

#include "pulsevo/errors.hpp"
#include "pulsevo/integrator.hpp"
#include "test_support.hpp"

namespace pulsevo {
namespace {

RhsClosure decay() {
  return {1, [](double, std::span<const cplx> y, std::span<cplx> dy) { dy[0] = -y[0]; }};
}

// y' = -i sz y
RhsClosure z_phase() {
  return {2, [](double, std::span<const cplx> y, std::span<cplx> dy) {
            dy[0] = cplx(0, -1) * y[0];
            dy[1] = cplx(0, 1) * y[1];
          }};
}

OdeOptions tol(double rtol, double atol) {
  OdeOptions o;
  o.rtol = rtol;
  o.atol = atol;
  return o;
}

double decay_error(const OdeOptions& o) {
  const StateVector y0{1.0};
  const auto r = integrate(decay(), y0, 0.0, 1.0, {}, o);
  return std::abs(r.final_state[0] - std::exp(-1.0));
}

double phase_error(const OdeOptions& o, double t1 = 1.0) {
  const double s = 1.0 / std::sqrt(2.0);
  const StateVector y0{s, s};
  const auto r = integrate(z_phase(), y0, 0.0, t1, {}, o);
  const StateVector exact{s * std::exp(cplx(0, -t1)), s * std::exp(cplx(0, t1))};
  return max_abs_diff(r.final_state, exact);
}

TEST(Integrate, ZeroRhsIsConstant) {
  const RhsClosure zero{3, [](double, std::span<const cplx>, std::span<cplx> dy) {
                          std::fill(dy.begin(), dy.end(), cplx{});
                        }};
  const StateVector y0{cplx(1, 2), cplx(-3, 0.5), cplx(0, 0)};
  const std::vector<double> times{0.0, 0.1, 0.7, 2.0};
  const auto r = integrate(zero, y0, 0.0, 2.0, times);
  ASSERT_EQ(r.samples.size(), times.size());
  for (const auto& s : r.samples) EXPECT_EQ(s, y0);
  EXPECT_EQ(r.final_state, y0);
}

TEST(Integrate, Exponential) {
  const StateVector y0{1.0};
  const auto r = integrate(decay(), y0, 0.0, 1.0, {});
  EXPECT_LE(std::abs(r.final_state[0] - std::exp(-1.0)) / std::exp(-1.0), 1e-8);
}

TEST(Integrate, ZPhase) {
  const double s = 1.0 / std::sqrt(2.0);
  const StateVector y0{s, s};
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.5 * k);
  const auto r = integrate(z_phase(), y0, 0.0, 10.0, times, tol(1e-10, 1e-12));
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const StateVector exact{s * std::exp(cplx(0, -t)), s * std::exp(cplx(0, t))};
    EXPECT_LE(max_abs_diff(r.samples[k], exact), 1e-8) << "t=" << t;
  }
}

TEST(Integrate, ConvergesWhenTighteningTolerances) {
  for (double rtol : {1e-4, 1e-6, 1e-8}) {
    const double loose_d = decay_error(tol(rtol, rtol * 1e-2));
    const double tight_d = decay_error(tol(rtol * 1e-2, rtol * 1e-4));
    EXPECT_GE(loose_d / tight_d, 10.0) << "decay rtol=" << rtol;
    const double loose_p = phase_error(tol(rtol, rtol * 1e-2), 10.0);
    const double tight_p = phase_error(tol(rtol * 1e-2, rtol * 1e-4), 10.0);
    EXPECT_GE(loose_p / tight_p, 10.0) << "phase rtol=" << rtol;
  }
}

TEST(Integrate, Deterministic) {
  const std::vector<double> times{0.3, 1.7, 4.0};
  const StateVector y0{0.6, cplx(0, 0.8)};
  const auto a = integrate(z_phase(), y0, 0.0, 4.0, times);
  const auto b = integrate(z_phase(), y0, 0.0, 4.0, times);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.final_state, b.final_state);
  EXPECT_EQ(a.stats.rhs_evaluations, b.stats.rhs_evaluations);
}

TEST(Integrate, DenseOutputMatchesStoppedIntegration) {
  testing::Rng rng(41);
  const OdeOptions o = tol(1e-8, 1e-10);
  // A time-dependent 3-level system.
  const ComplexMatrix a = testing::random_hermitian(rng, 3), b = testing::random_hermitian(rng, 3);
  const RhsClosure rhs{3, [&](double t, std::span<const cplx> y, std::span<cplx> dy) {
                         const ComplexMatrix h = a + std::cos(3.0 * t) * b;
                         h.apply(y, dy);
                         for (auto& z : dy) z *= cplx(0, -1);
                       }};
  const StateVector y0 = testing::random_ket_amplitudes(rng, 3);
  std::vector<double> times;
  for (int k = 0; k < 15; ++k) times.push_back(testing::uniform(rng, 0.0, 5.0));
  std::sort(times.begin(), times.end());
  const auto dense = integrate(rhs, y0, 0.0, 5.0, times, o);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto stopped = integrate(rhs, y0, 0.0, times[k], {}, o);
    const double scale = o.atol + o.rtol * norm2(stopped.final_state);
    EXPECT_LE(max_abs_diff(dense.samples[k], stopped.final_state), 10.0 * scale)
        << "t=" << times[k];
  }
}

TEST(Integrate, LandsExactlyOnEndpoint) {
  const StateVector y0{1.0};
  const std::vector<double> times{0.0, 1.0};
  const auto r = integrate(decay(), y0, 0.0, 1.0, times);
  EXPECT_EQ(r.samples[0], y0);
  EXPECT_EQ(r.samples[1], r.final_state);
}

TEST(Integrate, StatsAreCounted) {
  const StateVector y0{1.0};
  const auto r = integrate(decay(), y0, 0.0, 1.0, {});
  EXPECT_GT(r.stats.accepted_steps, 0u);
  // FSAL: six new evaluations per attempted step, plus the initial one and
  // the starting-step heuristic.
  EXPECT_GE(r.stats.rhs_evaluations, 6 * (r.stats.accepted_steps + r.stats.rejected_steps));
}

TEST(Integrate, BudgetError) {
  OdeOptions o = tol(1e-12, 1e-14);
  o.max_steps = 1;
  const StateVector y0{0.5, 0.5};
  EXPECT_THROW(integrate(z_phase(), y0, 0.0, 100.0, {}, o), BudgetError);
}

TEST(Integrate, StiffnessError) {
  const StateVector y0{1.0};
  EXPECT_THROW(integrate(decay(), y0, 0.0, 1.0, {}, tol(1e-300, 1e-300)), StiffnessError);
}

TEST(Integrate, NumericsError) {
  const RhsClosure blowup{1, [](double t, std::span<const cplx> y, std::span<cplx> dy) {
                            dy[0] = t > 0.5 ? cplx(std::numeric_limits<double>::quiet_NaN()) : y[0];
                          }};
  const StateVector y0{1.0};
  EXPECT_THROW(integrate(blowup, y0, 0.0, 1.0, {}), NumericsError);
  const StateVector bad{std::numeric_limits<double>::infinity()};
  EXPECT_THROW(integrate(decay(), bad, 0.0, 1.0, {}), NumericsError);
}

TEST(Integrate, BadArguments) {
  const StateVector y0{1.0};
  EXPECT_THROW(integrate(decay(), y0, 1.0, 1.0, {}), TimingError);
  const std::vector<double> unsorted{0.5, 0.2};
  EXPECT_THROW(integrate(decay(), y0, 0.0, 1.0, unsorted), TimingError);
  const std::vector<double> outside{1.5};
  EXPECT_THROW(integrate(decay(), y0, 0.0, 1.0, outside), TimingError);
  const StateVector wrong{1.0, 2.0};
  EXPECT_THROW(integrate(decay(), wrong, 0.0, 1.0, {}), DimensionError);
  EXPECT_THROW(integrate(decay(), y0, 0.0, 1.0, {}, tol(0.0, 1e-10)), ValidationError);
  OdeOptions o;
  o.max_step = -1.0;
  EXPECT_THROW(o.validate(), ValidationError);
}

TEST(Integrate, MaxStepIsHonoured) {
  OdeOptions o;
  o.max_step = 0.01;
  const StateVector y0{1.0};
  const auto r = integrate(decay(), y0, 0.0, 1.0, {}, o);
  EXPECT_GE(r.stats.accepted_steps, 100u);
}

}  // namespace
}  // namespace pulsevo
