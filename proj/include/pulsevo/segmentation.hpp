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
#include <string>
#include <vector>

#include "pulsevo/linalg.hpp"
#include "pulsevo/pulse.hpp"

namespace pulsevo {

/// Boundaries closer than this (seconds) are merged into one.
inline constexpr double kDefaultMergeTolerance = 1e-12;

/// Interval [t_a, t_b) on which the set of active pulses is constant.
struct Segment {
  double t_a = 0.0;
  double t_b = 0.0;
  /// Sorted indices into PulseSequence::pulses().
  std::vector<std::size_t> active;

  double length() const noexcept { return t_b - t_a; }

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Consecutive segments tiling [window_start, window_end).
struct SegmentPlan {
  double window_start = 0.0;
  double window_end = 0.0;
  std::vector<Segment> segments;

  std::size_t size() const noexcept { return segments.size(); }
};

/// Splits [t0, t1] at every pulse start and end strictly inside the window.
///
/// Boundaries closer than `merge_tolerance` collapse into one (the window
/// edges always survive). Each segment's active set is evaluated at its
/// midpoint, and neighbours with identical active sets are merged, so the
/// plan is minimal. Segments with no active pulse are kept: the static
/// Hamiltonian still acts there. Throws TimingError unless t1 > t0.
SegmentPlan segmentize(const PulseSequence& seq, double t0, double t1,
                       double merge_tolerance = kDefaultMergeTolerance);

/// H(t) restricted to one segment: the static part plus only the pulses
/// active in that segment. Evaluation performs no window checks, so it is
/// valid only for t inside the segment it was built for.
class SegmentHamiltonian {
 public:
  SegmentHamiltonian(const PulseSequence& seq, const Segment& segment);

  std::size_t dim() const noexcept { return dim_; }
  /// Number of pulse terms evaluated per call.
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_constant() const noexcept { return terms_.empty(); }

  /// Writes H(t) into `out` and returns the number of pulse terms evaluated.
  std::size_t evaluate_into(double t, ComplexMatrix& out) const;
  ComplexMatrix operator()(double t) const;

 private:
  std::size_t dim_;
  ComplexMatrix base_;
  std::vector<const Pulse*> terms_;
};

/// Closure form of SegmentHamiltonian. The closure borrows `seq`.
SegmentHamiltonian segment_hamiltonian(const PulseSequence& seq, const Segment& segment);

/// Human-readable dump, one segment per line:
///   "<n> pulses / <m> segments" header, then "t_a t_b label,label,..."
/// Pulses without a label are shown as P<index + 1>.
std::string format_plan(const PulseSequence& seq, const SegmentPlan& plan);

}  // namespace pulsevo
