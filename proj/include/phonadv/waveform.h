// include/phonadv/waveform.h

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

#ifndef PHONADV_WAVEFORM_H_
#define PHONADV_WAVEFORM_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace phonadv {

inline constexpr int kCanonicalSampleRate = 16000;

class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mono sample sequence with its sample rate. Samples are nominally in
/// [-1, 1]; intermediate results (e.g. noise mixes before clipping) may
/// exceed that range, but every sample is finite and there is at least one.
class Waveform {
 public:
  Waveform(std::vector<double> samples, int sample_rate_hz);

  const std::vector<double>& samples() const { return samples_; }
  std::vector<double>& mutable_samples() { return samples_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t size() const { return samples_.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_hz_;
};

/// Reads a RIFF/WAVE PCM 16-bit file; multichannel input keeps channel 0.
/// Chunks other than `fmt ` and `data` are skipped.
Waveform ReadWav(const std::filesystem::path& path);

/// Parses an in-memory WAV image (same rules as ReadWav).
Waveform ParseWav(const std::string& bytes);

/// Writes 16-bit mono PCM: word = clamp(round(sample * 32768), -32768, 32767),
/// the exact inverse of the reader's 1/32768 scaling (1.0 saturates to 32767).
void WriteWav(const Waveform& w, const std::filesystem::path& path);

std::string EncodeWav(const Waveform& w);

/// Band-limited resampling by `factor` in [0.5, 2]: output sample m is the
/// windowed-sinc interpolation of the input at time m * factor, and the output
/// length is round(len / factor). The kernel spans 32 zero crossings on each
/// side of the lowpass (cutoff min(1, 1/factor) of the input Nyquist).
Waveform Resample(const Waveform& w, double factor);

double Rms(const std::vector<double>& x);
double PeakAbs(const std::vector<double>& x);

}  // namespace phonadv

#endif  // PHONADV_WAVEFORM_H_
