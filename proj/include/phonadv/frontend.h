// include/phonadv/frontend.h

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

#ifndef PHONADV_FRONTEND_H_
#define PHONADV_FRONTEND_H_

#include <cstdint>
#include <vector>

#include "phonadv/types.h"
#include "phonadv/waveform.h"

namespace phonadv {

struct FrontendSpec {
  int n_mels = 80;
  double window_ms = 25.0;
  double hop_ms = 10.0;
  int d = 32;
  uint64_t projection_seed = 17;

  void Validate() const;
  bool operator==(const FrontendSpec&) const = default;
};

/// Frame-level representation z = T(x): one row per frame, d columns.
struct PhonemeRepr {
  Matrix frames;
  double frame_hop_ms = 10.0;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

/// Frozen tokenizer: Hann-windowed power spectrum, n_mels log-mel energies
/// (floored at 1e-10) and a fixed projection to width d whose entries are
/// N(0, 1) / sqrt(n_mels) drawn from projection_seed. Nothing here is ever
/// trained; two instances built from equal specs produce bit-identical output.
class Frontend {
 public:
  explicit Frontend(const FrontendSpec& spec,
                    int sample_rate_hz = kCanonicalSampleRate);

  const FrontendSpec& spec() const { return spec_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t window_samples() const { return window_; }
  std::size_t hop_samples() const { return hop_; }
  std::size_t fft_size() const { return n_fft_; }

  /// 1 + floor((num_samples - window) / hop); 0 when shorter than a window.
  std::size_t NumFrames(std::size_t num_samples) const;

  PhonemeRepr Tokenize(const Waveform& x) const;

  /// Log-mel energies before projection (num_frames x n_mels).
  Matrix LogMel(const Waveform& x) const;

  /// Vector-Jacobian product: gradient of sum(grad_frames .* Tokenize(x))
  /// with respect to the waveform samples.
  std::vector<double> InputGradient(const Waveform& x,
                                    const Matrix& grad_frames) const;

  const Matrix& projection() const { return projection_; }  // d x n_mels
  const Matrix& mel_filters() const { return mel_filters_; }  // n_mels x bins

 private:
  void CheckInput(const Waveform& x) const;

  FrontendSpec spec_;
  int sample_rate_hz_;
  std::size_t window_;
  std::size_t hop_;
  std::size_t n_fft_;
  std::vector<double> hann_;
  Matrix mel_filters_;
  Matrix projection_;
};

}  // namespace phonadv

#endif  // PHONADV_FRONTEND_H_
