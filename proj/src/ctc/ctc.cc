// src/ctc/ctc.cc

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

#include "phonadv/ctc.h"

#include <cmath>
#include <limits>

namespace phonadv {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void CheckLabels(const Matrix& logits, const std::vector<int>& ids) {
  const auto blank = static_cast<int>(logits.cols()) - 1;
  if (blank < 1) throw std::invalid_argument("ctc: logits need at least 2 columns");
  for (int id : ids) {
    if (id < 0 || id >= blank)
      throw std::invalid_argument("ctc: label " + std::to_string(id) +
                                  " outside [0, " + std::to_string(blank) + ")");
  }
}

}  // namespace

int CtcMinFrames(const std::vector<int>& ids) {
  int n = static_cast<int>(ids.size());
  for (std::size_t i = 1; i < ids.size(); ++i)
    if (ids[i] == ids[i - 1]) ++n;
  return n;
}

Matrix LogSoftmaxRows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    const double hi = logits.row(t).maxCoeff();
    const double lse = hi + std::log((logits.row(t).array() - hi).exp().sum());
    out.row(t) = logits.row(t).array() - lse;
  }
  return out;
}

Matrix FramePosteriors(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    const double hi = logits.row(t).maxCoeff();
    const auto e = (logits.row(t).array() - hi).exp();
    out.row(t) = e / e.sum();
  }
  return out;
}

CtcResult CtcForward(const Matrix& logits, const std::vector<int>& ids) {
  CheckLabels(logits, ids);
  const auto frames = static_cast<int>(logits.rows());
  const int blank = static_cast<int>(logits.cols()) - 1;
  if (frames < CtcMinFrames(ids))
    throw CtcInfeasibleError("ctc: target of length " + std::to_string(ids.size()) +
                             " needs " + std::to_string(CtcMinFrames(ids)) +
                             " frames, got " + std::to_string(frames));

  // Extended lattice: blank, y1, blank, y2, ..., blank.
  const int states = 2 * static_cast<int>(ids.size()) + 1;
  std::vector<int> ext(states, blank);
  for (std::size_t u = 0; u < ids.size(); ++u) ext[2 * u + 1] = ids[u];
  auto can_skip = [&](int s) { return s >= 2 && ext[s] != blank && ext[s] != ext[s - 2]; };

  const Matrix logp = LogSoftmaxRows(logits);
  Matrix alpha = Matrix::Constant(frames, states, kNegInf);
  Matrix beta = Matrix::Constant(frames, states, kNegInf);

  alpha(0, 0) = logp(0, ext[0]);
  if (states > 1) alpha(0, 1) = logp(0, ext[1]);
  for (int t = 1; t < frames; ++t) {
    for (int s = 0; s < states; ++s) {
      double acc = alpha(t - 1, s);
      if (s >= 1) acc = LogAdd(acc, alpha(t - 1, s - 1));
      if (can_skip(s)) acc = LogAdd(acc, alpha(t - 1, s - 2));
      if (acc != kNegInf) alpha(t, s) = acc + logp(t, ext[s]);
    }
  }

  // beta(t, s): log-probability of emitting frames t+1.. given state s at t.
  beta(frames - 1, states - 1) = 0.0;
  if (states > 1) beta(frames - 1, states - 2) = 0.0;
  for (int t = frames - 2; t >= 0; --t) {
    for (int s = 0; s < states; ++s) {
      double acc = beta(t + 1, s) + logp(t + 1, ext[s]);
      if (s + 1 < states) acc = LogAdd(acc, beta(t + 1, s + 1) + logp(t + 1, ext[s + 1]));
      if (s + 2 < states && can_skip(s + 2))
        acc = LogAdd(acc, beta(t + 1, s + 2) + logp(t + 1, ext[s + 2]));
      beta(t, s) = acc;
    }
  }

  double log_total = alpha(frames - 1, states - 1);
  if (states > 1) log_total = LogAdd(log_total, alpha(frames - 1, states - 2));
  if (log_total == kNegInf) throw CtcInfeasibleError("ctc: zero-probability target");

  CtcResult result;
  result.loss = -log_total;
  result.grad = logp.array().exp().matrix();
  std::vector<double> occupancy(static_cast<std::size_t>(blank) + 1);
  for (int t = 0; t < frames; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), kNegInf);
    for (int s = 0; s < states; ++s) {
      const double v = alpha(t, s) + beta(t, s);
      occupancy[static_cast<std::size_t>(ext[s])] = LogAdd(occupancy[static_cast<std::size_t>(ext[s])], v);
    }
    for (int k = 0; k <= blank; ++k) {
      const double occ = occupancy[static_cast<std::size_t>(k)];
      if (occ != kNegInf) result.grad(t, k) -= std::exp(occ - log_total);
    }
  }
  return result;
}

double CtcBruteForce(const Matrix& logits, const std::vector<int>& ids) {
  CheckLabels(logits, ids);
  const auto frames = static_cast<int>(logits.rows());
  const int symbols = static_cast<int>(logits.cols());
  if (frames > 8 || symbols - 1 > 4)
    throw std::invalid_argument("ctc brute force: needs T <= 8 and V <= 4");
  const int blank = symbols - 1;
  const Matrix logp = LogSoftmaxRows(logits);

  std::vector<int> path(static_cast<std::size_t>(frames), 0);
  std::vector<int> collapsed;
  double total = 0.0;
  while (true) {
    collapsed.clear();
    int prev = -1;
    double log_path = 0.0;
    for (int t = 0; t < frames; ++t) {
      const int k = path[static_cast<std::size_t>(t)];
      log_path += logp(t, k);
      if (k != blank && k != prev) collapsed.push_back(k);
      prev = k;
    }
    if (collapsed == ids) total += std::exp(log_path);
    int t = frames - 1;
    while (t >= 0 && ++path[static_cast<std::size_t>(t)] == symbols) {
      path[static_cast<std::size_t>(t)] = 0;
      --t;
    }
    if (t < 0) break;
  }
  if (!(total > 0.0))
    throw CtcInfeasibleError("ctc brute force: no path collapses to the target");
  return -std::log(total);
}

std::vector<int> GreedyDecode(const Matrix& logits) {
  const int blank = static_cast<int>(logits.cols()) - 1;
  std::vector<int> out;
  int prev = -1;
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    int best = 0;
    for (int k = 1; k <= blank; ++k)
      if (logits(t, k) > logits(t, best)) best = k;
    if (best != blank && best != prev) out.push_back(best);
    prev = best;
  }
  return out;
}

}  // namespace phonadv
