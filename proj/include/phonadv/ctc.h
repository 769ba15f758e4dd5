// include/phonadv/ctc.h

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

#ifndef PHONADV_CTC_H_
#define PHONADV_CTC_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "phonadv/types.h"

namespace phonadv {

/// Target transcription: symbol ids in [0, V) plus its word rendering.
/// The CTC blank is index V, the last logit column.
struct LabelSeq {
  std::vector<int> ids;
  std::string words;
};

class CtcInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CtcResult {
  double loss = 0.0;
  Matrix grad;  // d loss / d logits, same shape as the logits
};

/// Minimum frame count for a CTC path: |y| plus one blank per adjacent repeat.
int CtcMinFrames(const std::vector<int>& ids);

/// -log P(y | softmax(logits)) by log-space forward-backward over the
/// blank-augmented label lattice, with the gradient softmax - posteriors.
/// Throws CtcInfeasibleError when the target does not fit in the frames.
CtcResult CtcForward(const Matrix& logits, const std::vector<int>& ids);

/// Reference loss by enumerating every (V+1)^T frame labelling; only for
/// T <= 8 and V <= 4.
double CtcBruteForce(const Matrix& logits, const std::vector<int>& ids);

/// Best-path decoding: per-frame argmax (lowest index wins ties), collapse
/// repeats, drop blanks.
std::vector<int> GreedyDecode(const Matrix& logits);

/// Row-wise softmax.
Matrix FramePosteriors(const Matrix& logits);

/// Row-wise log-softmax.
Matrix LogSoftmaxRows(const Matrix& logits);

}  // namespace phonadv

#endif  // PHONADV_CTC_H_
