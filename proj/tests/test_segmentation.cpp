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

#include <set>

#include "pulsevo/errors.hpp"
#include "pulsevo/segmentation.hpp"
#include "test_support.hpp"

namespace pulsevo {
namespace {

using Active = std::vector<std::size_t>;

RecipePtr constant_x() {
  static const RecipePtr r = std::make_shared<const PulseRecipe>("cx", pauli::x(), Envelope::constant());
  return r;
}

Pulse box(double start, double duration, double amp = 1.0, std::string label = {}) {
  return make_pulse(constant_x(), {{"amp", amp}}, start, duration, std::move(label));
}

/// n pulses of length 1 separated by gaps of 0.5, starting at t = 1.
PulseSequence spaced(std::size_t n) {
  std::vector<Pulse> pulses;
  for (std::size_t i = 0; i < n; ++i) pulses.push_back(box(1.0 + 1.5 * static_cast<double>(i), 1.0));
  return PulseSequence(std::move(pulses));
}

// Independent oracle: brute-force active set at t.
Active active_at(const PulseSequence& seq, double t) {
  Active a;
  for (std::size_t i = 0; i < seq.pulses().size(); ++i) {
    const Pulse& p = seq.pulses()[i];
    if (p.start() <= t && t < p.start() + p.duration()) a.push_back(i);
  }
  return a;
}

TEST(Segmentize, ThreeSpacedPulsesGiveFiveSegments) {
  const PulseSequence seq = spaced(3);
  const SegmentPlan plan = segmentize(seq, 1.0, 5.0);
  ASSERT_EQ(plan.size(), 5u);
  EXPECT_EQ(plan.segments[0].active, Active{0});
  EXPECT_EQ(plan.segments[1].active, Active{});
  EXPECT_EQ(plan.segments[2].active, Active{1});
  EXPECT_EQ(plan.segments[3].active, Active{});
  EXPECT_EQ(plan.segments[4].active, Active{2});
}

TEST(Segmentize, SinglePulseSpanningWindow) {
  const PulseSequence seq({box(0.0, 2.0)});
  const SegmentPlan plan = segmentize(seq, 0.0, 2.0);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan.segments[0], (Segment{0.0, 2.0, {0}}));
}

TEST(Segmentize, Overlap) {
  const PulseSequence seq({box(0.0, 2.0), box(1.0, 2.0)});
  const SegmentPlan plan = segmentize(seq, 0.0, 3.0);
  ASSERT_EQ(plan.size(), 3u);
  EXPECT_EQ(plan.segments[0], (Segment{0.0, 1.0, {0}}));
  EXPECT_EQ(plan.segments[1], (Segment{1.0, 2.0, {0, 1}}));
  EXPECT_EQ(plan.segments[2], (Segment{2.0, 3.0, {1}}));
}

TEST(Segmentize, BackToBackPulsesDoNotOverlap) {
  const PulseSequence seq({box(0.0, 1.0), box(1.0, 1.0)});
  const SegmentPlan plan = segmentize(seq, 0.0, 2.0);
  ASSERT_EQ(plan.size(), 2u);
  EXPECT_EQ(plan.segments[0].active, Active{0});
  EXPECT_EQ(plan.segments[1].active, Active{1});
}

TEST(Segmentize, IdenticalActiveSetsAreMerged) {
  // two identical pulses: boundaries coincide, one segment
  const PulseSequence seq({box(0.0, 1.0), box(0.0, 1.0)});
  EXPECT_EQ(segmentize(seq, 0.0, 1.0).size(), 1u);
  // boundary 1e-13 inside the window collapses into the window start
  const PulseSequence near({box(1e-13, 1.0)});
  const SegmentPlan plan = segmentize(near, 0.0, 2.0);
  ASSERT_EQ(plan.size(), 2u);
  EXPECT_EQ(plan.segments[0].t_a, 0.0);
  EXPECT_EQ(plan.segments[1].t_b, 2.0);
}

TEST(Segmentize, LeadingAndTrailingEmptySegmentsKept) {
  const SegmentPlan plan = segmentize(spaced(1), 0.0, 3.0);
  ASSERT_EQ(plan.size(), 3u);
  EXPECT_TRUE(plan.segments[0].active.empty());
  EXPECT_TRUE(plan.segments[2].active.empty());
}

TEST(Segmentize, RejectsEmptyWindow) {
  EXPECT_THROW(segmentize(spaced(1), 1.0, 1.0), TimingError);
  EXPECT_THROW(segmentize(spaced(1), 2.0, 1.0), TimingError);
}

TEST(Segmentize, CountLaw) {
  for (std::size_t n = 1; n <= 50; ++n) {
    const PulseSequence seq = spaced(n);
    const double t0 = seq.pulses().front().start();
    const double t1 = seq.pulses().back().end();
    EXPECT_EQ(segmentize(seq, t0, t1).size(), 2 * n - 1) << "n=" << n;
  }
}

TEST(Segmentize, CountLawWithRandomGaps) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 1, 50);
    std::vector<Pulse> pulses;
    double t = testing::uniform(rng, -5, 5);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = testing::uniform(rng, 0.01, 2.0);
      pulses.push_back(box(t, d));
      t += d + testing::uniform(rng, 0.01, 2.0);
    }
    const PulseSequence seq(std::move(pulses));
    EXPECT_EQ(segmentize(seq, seq.pulses().front().start(), seq.pulses().back().end()).size(), 2 * n - 1);
  }
}

TEST(SegmentizeProperties, TilingMaximalityAndActiveSets) {
  testing::Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 1, 50);
    const double window = testing::uniform(rng, 0.5, 10.0);
    const PulseSequence seq = testing::random_sequence(rng, 2, n, window, false);
    const double t0 = testing::uniform(rng, -0.5, 0.5);
    const SegmentPlan plan = segmentize(seq, t0, window);

    ASSERT_GE(plan.size(), 1u);
    EXPECT_EQ(plan.window_start, t0);
    EXPECT_EQ(plan.window_end, window);
    EXPECT_EQ(plan.segments.front().t_a, t0);
    EXPECT_EQ(plan.segments.back().t_b, window);
    for (std::size_t k = 0; k < plan.size(); ++k) {
      const Segment& s = plan.segments[k];
      EXPECT_GT(s.t_b, s.t_a);
      EXPECT_TRUE(std::is_sorted(s.active.begin(), s.active.end()));
      if (k + 1 < plan.size()) {
        EXPECT_EQ(s.t_b, plan.segments[k + 1].t_a);
        EXPECT_NE(s.active, plan.segments[k + 1].active);
      }
      // The active set is what a brute-force check sees throughout the
      // segment (interior points, away from the merge tolerance).
      for (int probe = 0; probe < 5; ++probe) {
        const double t = s.t_a + s.length() * testing::uniform(rng, 1e-6, 1.0 - 1e-6);
        EXPECT_EQ(s.active, active_at(seq, t));
      }
    }
  }
}

TEST(SegmentizeProperties, PulsesOutsideWindowNeverActive) {
  testing::Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const PulseSequence seq = testing::random_sequence(rng, 2, testing::uniform_index(rng, 1, 30), 4.0, false);
    const double t0 = 1.0, t1 = 3.0;
    std::set<std::size_t> outside;
    for (std::size_t i = 0; i < seq.pulses().size(); ++i) {
      const Pulse& p = seq.pulses()[i];
      if (p.end() <= t0 || p.start() >= t1) outside.insert(i);
    }
    for (const Segment& s : segmentize(seq, t0, t1).segments) {
      for (std::size_t i : s.active) EXPECT_FALSE(outside.count(i)) << "pulse " << i;
    }
  }
}

TEST(SegmentHamiltonian, EmptyActiveSet) {
  const PulseSequence with_static({box(5.0, 1.0)}, pauli::z());
  const SegmentHamiltonian h(with_static, Segment{0.0, 1.0, {}});
  EXPECT_TRUE(h.is_constant());
  EXPECT_EQ(h(0.5), pauli::z());

  const PulseSequence bare({box(5.0, 1.0)});
  const SegmentHamiltonian z = segment_hamiltonian(bare, Segment{0.0, 1.0, {}});
  EXPECT_EQ(z(0.5), ComplexMatrix(2));
  ComplexMatrix out(2);
  EXPECT_EQ(z.evaluate_into(0.5, out), 0u);
}

TEST(SegmentHamiltonian, TouchesOnlyActivePulses) {
  testing::Rng rng(34);
  // Five pulses; segment with {1, 3} active.
  std::vector<Pulse> pulses{box(0.0, 1.0, 0.3), box(0.0, 4.0, 0.7), box(3.5, 1.0, 1.1), box(1.0, 3.0, -0.4),
                            box(5.0, 1.0, 2.0)};
  const PulseSequence seq(std::move(pulses), pauli::z());
  const SegmentPlan plan = segmentize(seq, 0.0, 6.0);
  const Segment* target = nullptr;
  for (const Segment& s : plan.segments) {
    if (s.active == Active{1, 3}) target = &s;
  }
  ASSERT_NE(target, nullptr);
  const SegmentHamiltonian h(seq, *target);
  EXPECT_EQ(h.term_count(), 2u);
  for (int k = 0; k < 100; ++k) {
    const double t = target->t_a + target->length() * testing::uniform(rng, 0.0, 1.0);
    if (t >= target->t_b) continue;
    EXPECT_LE(max_abs_diff(h(t), total_hamiltonian_at(seq, t)), 1e-14);
  }
}

TEST(SegmentHamiltonianProperties, AgreesWithTotalHamiltonian) {
  testing::Rng rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = testing::uniform_index(rng, 2, 5);
    const PulseSequence seq = testing::random_sequence(rng, dim, testing::uniform_index(rng, 1, 50), 3.0,
                                                       trial % 3 == 0, /*allow_native=*/true);
    const SegmentPlan plan = segmentize(seq, 0.0, 3.0);
    for (const Segment& s : plan.segments) {
      const SegmentHamiltonian h(seq, s);
      for (int k = 0; k < 5; ++k) {
        const double t = s.t_a + s.length() * testing::uniform(rng, 1e-9, 1.0 - 1e-9);
        EXPECT_LE(max_abs_diff(h(t), total_hamiltonian_at(seq, t)), 1e-14);
      }
    }
  }
}

TEST(FormatPlan, Layout) {
  std::vector<Pulse> pulses{box(0.0, 2.0, 1.0, "a"), box(1.0, 2.0)};
  const PulseSequence seq(std::move(pulses));
  EXPECT_EQ(format_plan(seq, segmentize(seq, 0.0, 4.0)),
            "2 pulses / 4 segments\n"
            "0 1 a\n"
            "1 2 a,P2\n"
            "2 3 P2\n"
            "3 4 -\n");
}

}  // namespace
}  // namespace pulsevo
