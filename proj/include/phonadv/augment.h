// include/phonadv/augment.h

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

#ifndef PHONADV_AUGMENT_H_
#define PHONADV_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phonadv/rng.h"
#include "phonadv/room.h"
#include "phonadv/waveform.h"

namespace phonadv {

// Parameter ranges of the waveform augmentation family.
inline constexpr double kMaxPitchCents = 300.0;
inline constexpr double kMinSnrDb = 0.0;
inline constexpr double kMaxSnrDb = 40.0;
inline constexpr double kMaxRejectWidthHz = 150.0;
inline constexpr int kTimeMaskCount = 10;
inline constexpr double kMaxTimeMaskMs = 2000.0;

enum class AugmentTag { kPitch, kAdd, kBandReject, kTimeMask, kReverb };
inline constexpr int kNumAugmentTags = 5;

std::string_view TagName(AugmentTag tag);
AugmentTag ParseTag(std::string_view name);

struct PitchParams {
  double cents = 0.0;
};
struct AddNoiseParams {
  double snr_db = 20.0;
  std::size_t noise_index = 0;  // entry of the noise bank
  std::size_t noise_offset = 0; // start sample inside that entry
};
struct BandRejectParams {
  double center_hz = 1000.0;
  double width_hz = 100.0;
};
struct TimeMaskParams {
  uint64_t seed = 0;  // drives the interval draw at application time
};
struct ReverbParams {
  RoomSpec room;
};

/// One member of the augmentation family with its parameters. The factory
/// functions reject parameters outside the declared ranges.
class AugmentKind {
 public:
  using Params = std::variant<PitchParams, AddNoiseParams, BandRejectParams,
                              TimeMaskParams, ReverbParams>;

  static AugmentKind Pitch(double cents);
  static AugmentKind AddNoise(double snr_db, std::size_t noise_index,
                              std::size_t noise_offset);
  static AugmentKind BandReject(double center_hz, double width_hz);
  static AugmentKind TimeMask(uint64_t seed);
  static AugmentKind Reverb(const RoomSpec& room);

  AugmentTag tag() const { return static_cast<AugmentTag>(params_.index()); }
  const Params& params() const { return params_; }
  std::string Describe() const;

 private:
  explicit AugmentKind(Params p) : params_(std::move(p)) {}
  Params params_;
};

struct NoiseClip {
  std::string tag;
  Waveform audio;
};

/// Noise sources for additive-noise augmentation.
class NoiseBank {
 public:
  NoiseBank() = default;
  explicit NoiseBank(std::vector<NoiseClip> clips);

  /// White, pink and babble-like amplitude-modulated noise, `seconds` long
  /// each, deterministic in `seed`.
  static NoiseBank Synthetic(uint64_t seed, double seconds = 4.0,
                             int sample_rate_hz = kCanonicalSampleRate);
  /// Newline-delimited `path<TAB>tag` records; relative paths resolve against
  /// the manifest's directory.
  static NoiseBank FromManifest(const std::filesystem::path& manifest);

  std::size_t size() const { return clips_.size(); }
  bool empty() const { return clips_.empty(); }
  const NoiseClip& at(std::size_t i) const { return clips_.at(i); }

 private:
  std::vector<NoiseClip> clips_;
};

Waveform PitchShift(const Waveform& w, double cents);

/// Mixes `noise` (tiled or cropped to len(w)) at gain
/// rms(w) / (rms(noise) * 10^(snr_db / 20)), then clips to [-1, 1].
Waveform AddNoise(const Waveform& w, const Waveform& noise, double snr_db);

/// The scaled noise that AddNoise would add, before clipping.
std::vector<double> ScaledNoise(const Waveform& w, const Waveform& noise,
                                double snr_db);

/// Zeroes the real-FFT bins of the whole signal whose frequency lies in
/// [center - width/2, center + width/2].
Waveform BandReject(const Waveform& w, double center_hz, double width_hz);

struct MaskInterval {
  std::size_t start = 0;
  std::size_t length = 0;
};

/// Exactly kTimeMaskCount intervals: start uniform over samples, length
/// uniform over [0, min(2000 ms, samples remaining)]. Intervals may overlap.
std::vector<MaskInterval> DrawTimeMasks(std::size_t num_samples,
                                        int sample_rate_hz, Rng& rng);
Waveform ApplyTimeMasks(const Waveform& w,
                        const std::vector<MaskInterval>& masks);
Waveform TimeMask(const Waveform& w, Rng& rng);

/// Convolves with `rir`, truncates to len(w) and rescales to w's peak.
Waveform Reverb(const Waveform& w, const Waveform& rir);

struct TransformSamplerOptions {
  std::size_t noise_bank_size = 0;
  std::size_t noise_clip_samples = 0;  // length of the shortest bank entry
  int sample_rate_hz = kCanonicalSampleRate;
  int rir_max_order = 6;
};

/// Uniform over the five kinds; parameters uniform over their ranges.
AugmentKind SampleTransform(Rng& rng, const TransformSamplerOptions& options);

/// Random shoebox room used by SampleTransform for reverberation.
RoomSpec SampleRoom(Rng& rng, int max_order);

TransformSamplerOptions SamplerOptionsFor(const NoiseBank& bank,
                                          int sample_rate_hz, int rir_max_order);

Waveform ApplyTransform(const Waveform& w, const AugmentKind& kind,
                        const NoiseBank& bank);

}  // namespace phonadv

#endif  // PHONADV_AUGMENT_H_
