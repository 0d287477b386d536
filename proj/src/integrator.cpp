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

#include "pulsevo/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pulsevo/errors.hpp"

namespace pulsevo {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer's DOPRI5 dense output).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
constexpr double kUnderflowFraction = 1e-15;

bool finite(const StateVector& v) {
  return std::all_of(v.begin(), v.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

class Stepper {
 public:
  Stepper(const RhsClosure& rhs, std::size_t n)
      : rhs_(rhs), n_(n), k1_(n), k2_(n), k3_(n), k4_(n), k5_(n), k6_(n), k7_(n), tmp_(n) {}

  void eval(double t, std::span<const cplx> y, StateVector& out) {
    rhs_.f(t, y, out);
    ++stats.rhs_evaluations;
  }

  /// Hairer-Norsett-Wanner starting step.
  double initial_step(double t, const StateVector& y, double h_max, const OdeOptions& o) {
    // Max-norm variant of the usual RMS estimate; squaring the scale would
    // underflow for tiny tolerances.
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = o.atol + o.rtol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sk);
      d1n = std::max(d1n, std::abs(k1_[i]) / sk);
    }
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    if (!std::isfinite(h0) || !(h0 > 0.0)) h0 = 1e-6;
    h0 = std::min(h0, h_max);

    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h0 * k1_[i];
    eval(t + h0, tmp_, k2_);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = o.atol + o.rtol * std::abs(y[i]);
      d2 = std::max(d2, std::abs(k2_[i] - k1_[i]) / sk);
    }
    d2 /= h0;

    const double dmax = std::max(d1n, d2);
    double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    if (std::isnan(h1)) h1 = h0;
    return std::min({100.0 * h0, h1, h_max});
  }

  /// One trial step from (t, y) with k1 = f(t, y) already in place. Writes
  /// the 5th-order solution into y_new and returns the scaled error.
  double attempt(double t, double h, const StateVector& y, StateVector& y_new, const OdeOptions& o) {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a21 * k1_[i]);
    eval(t + c2 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    eval(t + c3 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    }
    eval(t + c4 * h, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    }
    eval(t + c5 * h, tmp_, k5_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
    }
    eval(t + h, tmp_, k6_);
    for (std::size_t i = 0; i < n; ++i) {
      y_new[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    }
    eval(t + h, y_new, k7_);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                          e7 * k7_[i]);
      const double scale = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double ratio = std::abs(e) / scale;
      if (std::isnan(ratio)) return ratio;
      err = std::max(err, ratio);
    }
    return err;
  }

  /// Dense output at theta in (0, 1) of the step (t, t + h) just accepted.
  void interpolate(double theta, double h, const StateVector& y, const StateVector& y_new,
                   StateVector& out) const {
    const double theta1 = 1.0 - theta;
    for (std::size_t i = 0; i < n_; ++i) {
      const cplx diff = y_new[i] - y[i];
      const cplx bspl = h * k1_[i] - diff;
      const cplx r4 = diff - h * k7_[i] - bspl;
      const cplx r5 = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                           d7 * k7_[i]);
      out[i] = y[i] + theta * (diff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
    }
  }

  StateVector& k1() { return k1_; }
  /// First-same-as-last: f(t + h, y_new) becomes the next k1.
  void advance() { std::swap(k1_, k7_); }

  IntegrationStats stats;

 private:
  const RhsClosure& rhs_;
  std::size_t n_;
  StateVector k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_;
};

}  // namespace

void OdeOptions::validate() const {
  if (!(rtol > 0.0) || !std::isfinite(rtol)) throw ValidationError("rtol", "rtol must be > 0");
  if (!(atol > 0.0) || !std::isfinite(atol)) throw ValidationError("atol", "atol must be > 0");
  if (max_step && !(*max_step > 0.0)) throw ValidationError("max_step", "max_step must be > 0");
  if (initial_step && !(*initial_step > 0.0)) {
    throw ValidationError("initial_step", "initial_step must be > 0");
  }
  if (max_steps == 0) throw ValidationError("max_steps", "max_steps must be >= 1");
}

IntegrationResult integrate(const RhsClosure& rhs, std::span<const cplx> y0, double t_a, double t_b,
                            std::span<const double> eval_times, const OdeOptions& opts) {
  opts.validate();
  if (!std::isfinite(t_a) || !std::isfinite(t_b) || !(t_b > t_a)) {
    throw TimingError("interval", "integration interval needs t_b > t_a");
  }
  if (y0.size() != rhs.dim) {
    throw DimensionError("initial state has " + std::to_string(y0.size()) +
                         " entries, right-hand side expects " + std::to_string(rhs.dim));
  }
  for (std::size_t k = 0; k < eval_times.size(); ++k) {
    if (eval_times[k] < t_a || eval_times[k] > t_b || (k > 0 && eval_times[k] < eval_times[k - 1])) {
      throw TimingError("eval_times", "evaluation times must be sorted and inside [t_a, t_b]");
    }
  }

  const std::size_t n = rhs.dim;
  const double span = t_b - t_a;
  const double h_max = std::min(opts.max_step.value_or(span), span);
  const double h_min = kUnderflowFraction * span;

  IntegrationResult result;
  result.samples.reserve(eval_times.size());
  StateVector y(y0.begin(), y0.end());
  if (!finite(y)) throw NumericsError("initial state contains NaN or Inf");
  StateVector y_new(n);

  std::size_t next = 0;
  while (next < eval_times.size() && eval_times[next] == t_a) {
    result.samples.push_back(y);
    ++next;
  }

  Stepper stepper(rhs, n);
  stepper.eval(t_a, y, stepper.k1());
  if (!finite(stepper.k1())) throw NumericsError("right-hand side returned NaN or Inf at t_a");

  double h = opts.initial_step ? std::min(*opts.initial_step, h_max)
                               : stepper.initial_step(t_a, y, h_max, opts);
  double t = t_a;
  bool last_rejected = false;

  while (t < t_b) {
    if (stepper.stats.accepted_steps + stepper.stats.rejected_steps >= opts.max_steps) {
      throw BudgetError("integrator exceeded " + std::to_string(opts.max_steps) + " steps at t=" +
                        std::to_string(t));
    }
    bool lands = false;
    if (t + h >= t_b || t_b - (t + h) < h_min) {
      h = t_b - t;
      lands = true;
    }
    if (h < h_min) {
      throw StiffnessError("step size underflow (h=" + std::to_string(h) + ") at t=" +
                           std::to_string(t));
    }

    const double err = stepper.attempt(t, h, y, y_new, opts);
    if (std::isnan(err)) throw NumericsError("state became NaN at t=" + std::to_string(t));
    if (err <= 1.0) {
      if (!finite(y_new)) throw NumericsError("state became NaN or Inf at t=" + std::to_string(t));
      const double t_new = lands ? t_b : t + h;
      while (next < eval_times.size() && eval_times[next] <= t_new) {
        if (eval_times[next] == t_new) {
          result.samples.push_back(y_new);
        } else {
          StateVector out(n);
          stepper.interpolate((eval_times[next] - t) / h, h, y, y_new, out);
          result.samples.push_back(std::move(out));
        }
        ++next;
      }
      ++stepper.stats.accepted_steps;
      std::swap(y, y_new);
      stepper.advance();
      t = t_new;

      double factor = err == 0.0 ? kMaxFactor : kSafety * std::pow(err, -0.2);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      if (last_rejected) factor = std::min(factor, 1.0);
      h = std::min(h * factor, h_max);
      last_rejected = false;
    } else {
      ++stepper.stats.rejected_steps;
      const double factor = std::isinf(err) ? kMinFactor
                                            : std::max(kMinFactor, kSafety * std::pow(err, -0.2));
      h *= factor;
      last_rejected = true;
    }
  }

  result.final_state = std::move(y);
  result.stats = stepper.stats;
  return result;
}

}  // namespace pulsevo
