// src/adversary/adversary.cc

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

#include "phonadv/adversary.h"

#include <cmath>
#include "json.hpp"
#include <stdexcept>

namespace phonadv {
namespace {

double SignOf(double v) { return static_cast<double>((0.0 < v) - (v < 0.0)); }

void CheckShapes(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

}  // namespace

void AttackConfig::Validate() const {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("attack.epsilon must be nonnegative");
  if (!(alpha >= 0.0)) throw std::invalid_argument("attack.alpha must be nonnegative");
  if (steps < 1) throw std::invalid_argument("attack.steps must be at least 1");
  if (steps == 1 && alpha > epsilon)
    throw std::invalid_argument("attack.alpha must not exceed attack.epsilon for single-step attacks");
  if (!(guidance_weight >= 0.0))
    throw std::invalid_argument("attack.guidance_weight must be nonnegative");
}

Matrix UniformInit(const Matrix& z, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("uniform_init: negative epsilon");
  Matrix out = z;
  if (epsilon == 0.0) return out;
  std::uniform_real_distribution<double> u(-epsilon, epsilon);
  // Column-major traversal fixes the draw order.
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] += u(rng);
  return out;
}

std::vector<double> UniformInit(const std::vector<double>& x, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("uniform_init: negative epsilon");
  std::vector<double> out = x;
  if (epsilon == 0.0) return out;
  std::uniform_real_distribution<double> u(-epsilon, epsilon);
  for (double& v : out) v += u(rng);
  return out;
}

Matrix ProjectBall(const Matrix& candidate, const Matrix& center, double epsilon) {
  CheckShapes(candidate, center, "project_ball");
  return candidate.array().max(center.array() - epsilon).min(center.array() + epsilon).matrix();
}

Matrix Sign(const Matrix& m) { return m.unaryExpr(&SignOf); }

LossAndGrad CtcInputGradient(const LogitsModel& model, const Matrix& z,
                             const std::vector<int>& ids) {
  const auto lin = model.Linearize(z);
  const CtcResult ctc = CtcForward(lin.logits, ids);
  return {ctc.loss, lin.input_vjp(ctc.grad)};
}

Matrix PgdAttack(const Matrix& z, const std::vector<int>& ids,
                 const LogitsModel& model, const AttackConfig& cfg, Rng& rng) {
  cfg.Validate();
  Matrix x = UniformInit(z, cfg.epsilon, rng);
  for (int step = 0; step < cfg.steps; ++step) {
    const LossAndGrad lg = CtcInputGradient(model, x, ids);
    x = ProjectBall(x + cfg.alpha * Sign(lg.grad), z, cfg.epsilon);
  }
  return x;
}

Waveform PgdAttack(const Waveform& x, const std::vector<int>& ids,
                   const LogitsModel& model, const Frontend& frontend,
                   const AttackConfig& cfg, Rng& rng) {
  cfg.Validate();
  const auto& clean = x.samples();
  std::vector<double> adv = UniformInit(clean, cfg.epsilon, rng);
  for (int step = 0; step < cfg.steps; ++step) {
    const Waveform current(adv, x.sample_rate_hz());
    const PhonemeRepr z = frontend.Tokenize(current);
    const LossAndGrad lg = CtcInputGradient(model, z.frames, ids);
    const std::vector<double> grad = frontend.InputGradient(current, lg.grad);
    for (std::size_t i = 0; i < adv.size(); ++i) {
      const double moved = adv[i] + cfg.alpha * SignOf(grad[i]);
      adv[i] = std::clamp(moved, clean[i] - cfg.epsilon, clean[i] + cfg.epsilon);
    }
  }
  return Waveform(std::move(adv), x.sample_rate_hz());
}

WagResult WagLoss(const Matrix& z1, const Matrix& z2, const LogitsModel& model) {
  const auto lin = model.Linearize(z1);
  const Matrix logits2 = model.Logits(z2);
  const Eigen::Index frames = std::min(lin.logits.rows(), logits2.rows());
  WagResult r;
  Matrix grad_logits = Matrix::Zero(lin.logits.rows(), lin.logits.cols());
  if (frames == 0) {
    r.grad_z1 = Matrix::Zero(z1.rows(), z1.cols());
    return r;
  }
  const Matrix logp = LogSoftmaxRows(lin.logits.topRows(frames));
  const Matrix logq = LogSoftmaxRows(logits2.topRows(frames));
  const Matrix p = logp.array().exp().matrix();
  const double inv = 1.0 / static_cast<double>(frames);
  double kl_sum = 0.0;
  for (Eigen::Index t = 0; t < frames; ++t) {
    const auto diff = (logp.row(t) - logq.row(t)).array();
    const double kl = (p.row(t).array() * diff).sum();
    kl_sum += kl;
    // d KL_t / d logit_k = p_k (log p_k - log q_k - KL_t); value carries -1/T.
    grad_logits.row(t) = -inv * (p.row(t).array() * (diff - kl)).matrix();
  }
  r.value = -kl_sum * inv;
  r.grad_z1 = lin.input_vjp(grad_logits);
  return r;
}

AttackResult PatStep(const Matrix& z_clean, const std::vector<int>& ids,
                     const LogitsModel& model, const AttackConfig& cfg, Rng& rng) {
  cfg.Validate();
  AttackResult r;
  const Matrix z0 = UniformInit(z_clean, cfg.epsilon, rng);
  const LossAndGrad lg = CtcInputGradient(model, z0, ids);
  r.init_loss = lg.loss;
  r.adversary = ProjectBall(z0 + cfg.epsilon * Sign(lg.grad), z_clean, cfg.epsilon);
  r.delta_inf = (r.adversary - z_clean).cwiseAbs().maxCoeff();
  return r;
}

AttackResult WapatStep(const Matrix& z_clean, const Matrix& z_aug,
                       const std::vector<int>& ids, const LogitsModel& model,
                       const AttackConfig& cfg, Rng& rng) {
  cfg.Validate();
  if (z_aug.cols() != z_clean.cols())
    throw std::invalid_argument("wapat: augmented representation width mismatch");
  AttackResult r;
  const Matrix z0 = UniformInit(z_clean, cfg.epsilon, rng);
  const LossAndGrad eta1 = CtcInputGradient(model, z0, ids);
  r.init_loss = eta1.loss;

  // A length-changing augmentation can leave too few frames for the target;
  // the augmented candidate then stays at z_aug.
  Matrix eta2_sign = Matrix::Zero(z_aug.rows(), z_aug.cols());
  try {
    eta2_sign = Sign(CtcInputGradient(model, z_aug, ids).grad);
  } catch (const CtcInfeasibleError&) {
  }

  const Matrix c1 = z0 + cfg.epsilon * Sign(eta1.grad);
  const Matrix c2 = z_aug + cfg.epsilon * eta2_sign;
  const WagResult wag = WagLoss(c1, c2, model);
  r.wag_term = wag.value;

  const Matrix delta = eta1.grad + cfg.guidance_weight * wag.grad_z1;
  r.adversary = ProjectBall(z0 + cfg.epsilon * Sign(delta), z_clean, cfg.epsilon);
  r.delta_inf = (r.adversary - z_clean).cwiseAbs().maxCoeff();
  return r;
}

AttackResult WapatStep(const Waveform& x, const LabelSeq& y,
                       const LogitsModel& model, const Frontend& frontend,
                       const AttackConfig& cfg, const AugmentKind& transform,
                       const NoiseBank& noise, Rng& rng) {
  const PhonemeRepr z = frontend.Tokenize(x);
  const PhonemeRepr z_aug = frontend.Tokenize(ApplyTransform(x, transform, noise));
  return WapatStep(z.frames, z_aug.frames, y.ids, model, cfg, rng);
}

std::string AttackDiagnostics::ToJsonLine() const {
  nlohmann::ordered_json j;
  j["clean_loss"] = clean_loss;
  j["adv_loss"] = adv_loss;
  j["wag_term"] = wag_term;
  j["delta_inf"] = delta_inf;
  return j.dump();
}

AttackDiagnostics Diagnose(const Matrix& z_clean, const AttackResult& attack,
                           const std::vector<int>& ids, const LogitsModel& model) {
  AttackDiagnostics d;
  d.clean_loss = CtcForward(model.Logits(z_clean), ids).loss;
  d.adv_loss = CtcForward(model.Logits(attack.adversary), ids).loss;
  d.wag_term = attack.wag_term;
  d.delta_inf = attack.delta_inf;
  return d;
}

}  // namespace phonadv
