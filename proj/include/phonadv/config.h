// include/phonadv/config.h

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

#ifndef PHONADV_CONFIG_H_
#define PHONADV_CONFIG_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "phonadv/datagen.h"
#include "phonadv/frontend.h"
#include "phonadv/trainer.h"

namespace phonadv {

/// Names the offending field, e.g. "attack.epsilon: must be >= 0".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sizes of the generated splits.
struct SplitSizes {
  int train = 400;
  int val = 50;
  int test = 100;
  int domain = 100;  // per held-out domain
};

/// Everything one run needs. JSON layout (all keys optional, unknown keys
/// rejected):
///   frontend  { n_mels, window_ms, hop_ms, d, projection_seed }
///   corpus    { vocab_size, min_symbols, max_symbols, seed, noise_seed,
///               rir_max_order, splits { train, val, test, domain },
///               symbols { base_hz, semitone_step, duration_ms, ramp_ms,
///                         harmonics, jitter_cents, gain_lo, gain_hi,
///                         edge_silence_ms, noise_floor_snr_db } }
///   model     { hidden }
///   train     { mode, batch_seconds, seed, threads, waveform_pgd_steps }
///   attack    { epsilon, alpha, steps, guidance_weight }
///   schedule  { lr_max, phases [3], total_steps }
///   paths     { data_dir, out_dir, noise_manifest }
struct RunConfig {
  FrontendSpec frontend;
  CorpusSpec corpus;
  SplitSizes splits;
  TrainConfig train;
  std::filesystem::path data_dir = "data";
  std::filesystem::path out_dir = "out";
  std::filesystem::path noise_manifest;  // empty: synthetic bank from corpus.noise_seed

  /// Range checks on every section; throws ConfigError.
  void Validate() const;
  /// Keeps attack.guidance consistent with train.mode.
  void SyncMode();
};

RunConfig ParseRunConfig(const std::string& json_text);
RunConfig LoadRunConfig(const std::filesystem::path& path);
/// Canonical JSON with every field spelled out.
std::string RunConfigToJson(const RunConfig& cfg);

}  // namespace phonadv

#endif  // PHONADV_CONFIG_H_
