// include/phonadv/optim.h

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

#ifndef PHONADV_OPTIM_H_
#define PHONADV_OPTIM_H_

#include <array>
#include <filesystem>
#include <stdexcept>

#include "phonadv/model.h"

namespace phonadv {

class NonFiniteGradientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update. Rejects non-finite gradients without
/// touching the state.
ModelState AdamStep(ModelState state, const Vector& grad, double lr,
                    const AdamOptions& options = {});

/// Tri-stage schedule: linear warmup from 0.01 * lr_max, constant hold,
/// then exponential decay reaching 0.05 * lr_max at the last step.
struct ScheduleSpec {
  double lr_max = 3e-3;
  std::array<double, 3> phases{0.1, 0.4, 0.5};
  int total_steps = 2000;

  void Validate() const;
};

inline constexpr double kWarmupFloor = 0.01;
inline constexpr double kDecayFloor = 0.05;

double LrAt(const ScheduleSpec& schedule, int step);

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Versioned little-endian binary: magic, version, layout, step_count, then
/// params, adam_m and adam_v as raw IEEE doubles. Round trips bit-exactly.
void SaveCheckpoint(const ModelState& state, const std::filesystem::path& path);
ModelState LoadCheckpoint(const std::filesystem::path& path);

}  // namespace phonadv

#endif  // PHONADV_OPTIM_H_
