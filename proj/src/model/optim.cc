// src/model/optim.cc

// Copyright 2026  phonadv authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "phonadv/optim.h"

#include <cmath>
#include <string>

namespace phonadv {

ModelState AdamStep(ModelState state, const Vector& grad, double lr,
                    const AdamOptions& o) {
  if (grad.size() != state.params.size())
    throw std::invalid_argument("adam: gradient size mismatch");
  if (!grad.allFinite())
    throw NonFiniteGradientError("adam: non-finite gradient, update rejected");
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);
  state.adam_m = o.beta1 * state.adam_m + (1.0 - o.beta1) * grad;
  state.adam_v = o.beta2 * state.adam_v + (1.0 - o.beta2) * grad.cwiseAbs2();
  state.params.array() -= lr * (state.adam_m.array() / correction1) /
                          ((state.adam_v.array() / correction2).sqrt() + o.eps);
  return state;
}

void ScheduleSpec::Validate() const {
  if (!(lr_max > 0.0)) throw std::invalid_argument("schedule.lr_max must be positive");
  double sum = 0.0;
  for (double f : phases) {
    if (!(f >= 0.0)) throw std::invalid_argument("schedule.phases must be nonnegative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("schedule.phases must sum to 1");
  if (total_steps < 0) throw std::invalid_argument("schedule.total_steps must be nonnegative");
}

double LrAt(const ScheduleSpec& s, int step) {
  if (step < 0 || step >= s.total_steps)
    throw std::out_of_range("lr_at: step " + std::to_string(step) + " outside [0, " +
                            std::to_string(s.total_steps) + ")");
  const int warmup = static_cast<int>(std::floor(s.phases[0] * s.total_steps));
  const int hold = static_cast<int>(std::floor(s.phases[1] * s.total_steps));
  const int decay_start = warmup + hold;
  if (step < warmup) {
    const double frac = warmup > 1 ? static_cast<double>(step) / (warmup - 1) : 0.0;
    return s.lr_max * (kWarmupFloor + (1.0 - kWarmupFloor) * frac);
  }
  if (step < decay_start) return s.lr_max;
  const int decay_steps = s.total_steps - decay_start;
  const double frac =
      decay_steps > 1 ? static_cast<double>(step - decay_start) / (decay_steps - 1) : 1.0;
  return s.lr_max * std::pow(kDecayFloor, frac);
}

}  // namespace phonadv
