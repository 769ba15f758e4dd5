// include/phonadv/adversary.h

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

#ifndef PHONADV_ADVERSARY_H_
#define PHONADV_ADVERSARY_H_

#include <string>
#include <vector>

#include "phonadv/augment.h"
#include "phonadv/ctc.h"
#include "phonadv/frontend.h"
#include "phonadv/model.h"
#include "phonadv/rng.h"

namespace phonadv {

/// l-infinity attack settings. The ball is always centered on the clean
/// input. pat/wapat take a single step of size epsilon; `alpha` and `steps`
/// configure multi-step PGD.
struct AttackConfig {
  double epsilon = 0.01;
  double alpha = 0.01;
  int steps = 1;
  bool guidance = false;
  double guidance_weight = 1.0;  // weight of the guidance term in the ascent objective

  void Validate() const;
};

/// z + U[-epsilon, epsilon] entrywise.
Matrix UniformInit(const Matrix& z, double epsilon, Rng& rng);
std::vector<double> UniformInit(const std::vector<double>& x, double epsilon, Rng& rng);

/// Entrywise clamp of `candidate` to [center - epsilon, center + epsilon].
Matrix ProjectBall(const Matrix& candidate, const Matrix& center, double epsilon);

/// Entrywise sign with sign(0) = 0.
Matrix Sign(const Matrix& m);

struct LossAndGrad {
  double loss = 0.0;
  Matrix grad;  // d loss / d input frames
};

/// CTC loss of `ids` at input frames z and its gradient with respect to z.
LossAndGrad CtcInputGradient(const LogitsModel& model, const Matrix& z,
                             const std::vector<int>& ids);

/// Phoneme-space PGD: x0 = UniformInit(z), then `steps` iterations of
/// x <- Project(x + alpha * sign(grad CTC(x))).
Matrix PgdAttack(const Matrix& z, const std::vector<int>& ids,
                 const LogitsModel& model, const AttackConfig& cfg, Rng& rng);

/// Waveform-space PGD baseline: the ball lives on raw samples and gradients
/// flow through the frozen frontend.
Waveform PgdAttack(const Waveform& x, const std::vector<int>& ids,
                   const LogitsModel& model, const Frontend& frontend,
                   const AttackConfig& cfg, Rng& rng);

struct WagResult {
  double value = 0.0;  // -mean_t KL(p(z1)_t || p(z2)_t) over min(T1, T2) frames
  Matrix grad_z1;      // gradient of value w.r.t. z1; z2 is held constant
};

WagResult WagLoss(const Matrix& z1, const Matrix& z2, const LogitsModel& model);

struct AttackResult {
  Matrix adversary;
  double init_loss = 0.0;   // CTC loss at the random start z0
  double wag_term = 0.0;    // guidance value at the candidate pair (0 for pat)
  double delta_inf = 0.0;   // ||adversary - z_clean||_inf
};

/// Single-step phoneme adversary: Project(z0 + epsilon * sign(grad CTC(z0))).
AttackResult PatStep(const Matrix& z_clean, const std::vector<int>& ids,
                     const LogitsModel& model, const AttackConfig& cfg, Rng& rng);

/// Augmentation-guided single-step adversary. With z0 drawn in the ball
/// around z_clean and z_aug the representation of the augmented waveform:
///   eta1 = grad CTC(z0), eta2 = grad CTC(z_aug)
///   c1 = z0 + eps sign(eta1), c2 = z_aug + eps sign(eta2)
///   delta = eta1 + w * grad_c1 Wag(c1, c2)     (eta held constant)
///   adversary = Project(z0 + eps sign(delta))
/// The random draw matches PatStep, so w = 0 reproduces it bit-for-bit.
AttackResult WapatStep(const Matrix& z_clean, const Matrix& z_aug,
                       const std::vector<int>& ids, const LogitsModel& model,
                       const AttackConfig& cfg, Rng& rng);

/// Waveform-level entry point: tokenizes x and ApplyTransform(x, transform).
AttackResult WapatStep(const Waveform& x, const LabelSeq& y,
                       const LogitsModel& model, const Frontend& frontend,
                       const AttackConfig& cfg, const AugmentKind& transform,
                       const NoiseBank& noise, Rng& rng);

/// Per-attack record emitted as one JSON object per line.
struct AttackDiagnostics {
  double clean_loss = 0.0;
  double adv_loss = 0.0;
  double wag_term = 0.0;
  double delta_inf = 0.0;

  std::string ToJsonLine() const;
};

AttackDiagnostics Diagnose(const Matrix& z_clean, const AttackResult& attack,
                           const std::vector<int>& ids, const LogitsModel& model);

}  // namespace phonadv

#endif  // PHONADV_ADVERSARY_H_
