// include/phonadv/datagen.h

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

#ifndef PHONADV_DATAGEN_H_
#define PHONADV_DATAGEN_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phonadv/augment.h"
#include "phonadv/corpus.h"
#include "phonadv/frontend.h"

namespace phonadv {

/// One perturbation applied to every utterance of a domain. `lo`/`hi` bound
/// the kind's main parameter: cents (pitch), SNR dB (add), notch center Hz
/// (band_rej, width 150 Hz), absorption (reverb); unused for time_mask.
struct ProfileEntry {
  AugmentTag kind = AugmentTag::kAdd;
  double lo = 0.0;
  double hi = 0.0;
};

/// Tone-template speech proxy: symbol s is a harmonic tone with fundamental
/// base_hz * 2^(s * semitone_step / 12), lasting duration_ms with raised-
/// cosine ramps of ramp_ms at both ends.
struct SymbolTemplateSpec {
  double base_hz = 220.0;
  double semitone_step = 4.0;
  double duration_ms = 120.0;
  double ramp_ms = 10.0;
  int harmonics = 3;
  double jitter_cents = 20.0;      // per-occurrence detuning, uniform +-
  double gain_lo = 0.3;            // per-utterance peak gain range
  double gain_hi = 0.8;
  double edge_silence_ms = 30.0;   // silence before and after the utterance
  double noise_floor_snr_db = -1;  // background white noise SNR; < 0 disables
};

struct CorpusSpec {
  int vocab_size = 10;
  int min_symbols = 3;
  int max_symbols = 6;
  int n_utterances = 100;
  SymbolTemplateSpec symbols;
  std::vector<ProfileEntry> domain_profile;
  uint64_t seed = 1;
  uint64_t noise_seed = 7;  // synthetic noise bank used by add entries
  int rir_max_order = 6;

  void Validate() const;
};

double SymbolFrequency(const SymbolTemplateSpec& spec, int symbol);

/// Deterministic in spec.seed. Every utterance satisfies
/// frames >= 2 |label| + 1 at the given frontend, otherwise the spec is
/// rejected as infeasible.
Corpus GenerateCorpus(const CorpusSpec& spec, const Frontend& frontend);

struct NamedDomain {
  std::string name;
  std::vector<ProfileEntry> profile;
};

/// Held-out domains: noisy, reverberant, pitched, notched, combined.
std::vector<NamedDomain> DefaultDomains();

struct ManifestEntry {
  Waveform audio;
  std::string transcript;
};

/// Newline-delimited `wav_path<TAB>transcript`; the transcript is everything
/// after the first tab. Relative paths resolve against the manifest's folder.
std::vector<ManifestEntry> LoadManifest(const std::filesystem::path& path);

/// Writes <dir>/<name>/<index>.wav files and <dir>/<name>.tsv.
void ExportCorpus(const Corpus& corpus, const std::filesystem::path& dir,
                  const std::string& name);

/// Loads a manifest and maps transcripts onto symbol ids.
Corpus LoadCorpus(const std::filesystem::path& manifest, const Vocabulary& vocab);

}  // namespace phonadv

#endif  // PHONADV_DATAGEN_H_
