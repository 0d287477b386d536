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

#include "pulsevo/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pulsevo/errors.hpp"
#include "pulsevo/format.hpp"

namespace pulsevo {

SegmentPlan segmentize(const PulseSequence& seq, double t0, double t1, double merge_tolerance) {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw TimingError("window", "segmentation window needs t1 > t0");
  }

  std::vector<double> cuts;
  cuts.reserve(2 * seq.pulses().size());
  for (const Pulse& p : seq.pulses()) {
    for (double edge : {p.start(), p.end()}) {
      if (edge > t0 && edge < t1) cuts.push_back(edge);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  std::vector<double> bounds{t0};
  for (double c : cuts) {
    if (c - bounds.back() > merge_tolerance) bounds.push_back(c);
  }
  // The window end always survives; drop an interior cut that crowds it.
  while (bounds.size() > 1 && t1 - bounds.back() <= merge_tolerance) bounds.pop_back();
  bounds.push_back(t1);

  SegmentPlan plan{t0, t1, {}};
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    Segment s{bounds[k], bounds[k + 1], {}};
    const double mid = 0.5 * (s.t_a + s.t_b);
    for (std::size_t i = 0; i < seq.pulses().size(); ++i) {
      if (seq.pulses()[i].is_active(mid)) s.active.push_back(i);
    }
    if (!plan.segments.empty() && plan.segments.back().active == s.active) {
      plan.segments.back().t_b = s.t_b;
    } else {
      plan.segments.push_back(std::move(s));
    }
  }
  return plan;
}

SegmentHamiltonian::SegmentHamiltonian(const PulseSequence& seq, const Segment& segment)
    : dim_(seq.dim()), base_(seq.static_hamiltonian().value_or(ComplexMatrix(seq.dim()))) {
  terms_.reserve(segment.active.size());
  for (std::size_t i : segment.active) terms_.push_back(&seq.pulses().at(i));
}

std::size_t SegmentHamiltonian::evaluate_into(double t, ComplexMatrix& out) const {
  std::copy(base_.data().begin(), base_.data().end(), out.data().begin());
  for (const Pulse* p : terms_) out.add_scaled(p->recipe().op(), p->envelope_at(t));
  return terms_.size();
}

ComplexMatrix SegmentHamiltonian::operator()(double t) const {
  ComplexMatrix h(dim_);
  evaluate_into(t, h);
  return h;
}

SegmentHamiltonian segment_hamiltonian(const PulseSequence& seq, const Segment& segment) {
  return SegmentHamiltonian(seq, segment);
}

std::string format_plan(const PulseSequence& seq, const SegmentPlan& plan) {
  std::ostringstream os;
  os << seq.pulses().size() << " pulses / " << plan.size() << " segments\n";
  for (const Segment& s : plan.segments) {
    os << format_double(s.t_a) << ' ' << format_double(s.t_b) << ' ';
    if (s.active.empty()) os << '-';
    for (std::size_t k = 0; k < s.active.size(); ++k) {
      const Pulse& p = seq.pulses()[s.active[k]];
      if (k > 0) os << ',';
      if (p.label().empty()) {
        os << 'P' << (s.active[k] + 1);
      } else {
        os << p.label();
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace pulsevo
