// src/datagen/datagen.cc

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

#include "phonadv/datagen.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace phonadv {
namespace {

std::vector<double> RenderSymbol(const SymbolTemplateSpec& spec, int symbol,
                                 int rate, Rng& rng) {
  const auto n = static_cast<std::size_t>(std::lround(spec.duration_ms * rate / 1000.0));
  const auto ramp = static_cast<std::size_t>(std::lround(spec.ramp_ms * rate / 1000.0));
  const double detune = Uniform(rng, -spec.jitter_cents, spec.jitter_cents);
  const double f0 = SymbolFrequency(spec, symbol) * std::pow(2.0, detune / 1200.0);
  std::vector<double> phases(static_cast<std::size_t>(spec.harmonics));
  for (double& p : phases) p = Uniform(rng, 0.0, 2.0 * std::numbers::pi);

  std::vector<double> out(n, 0.0);
  double norm = 0.0;
  for (int h = 1; h <= spec.harmonics; ++h) norm += 1.0 / h;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    double v = 0.0;
    for (int h = 1; h <= spec.harmonics; ++h) {
      const double f = f0 * h;
      if (f >= rate / 2.0) break;
      v += std::sin(2.0 * std::numbers::pi * f * t + phases[static_cast<std::size_t>(h - 1)]) / h;
    }
    double env = 1.0;
    if (ramp > 0 && i < ramp)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / ramp);
    else if (ramp > 0 && i >= n - ramp)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(n - 1 - i) / ramp);
    out[i] = env * v / norm;
  }
  return out;
}

Waveform ApplyProfile(const Waveform& w, const std::vector<ProfileEntry>& profile,
                      const NoiseBank& bank, int rir_max_order, Rng& rng) {
  Waveform out = w;
  for (const auto& e : profile) {
    switch (e.kind) {
      case AugmentTag::kPitch:
        out = PitchShift(out, Uniform(rng, e.lo, e.hi));
        break;
      case AugmentTag::kAdd: {
        const auto index = static_cast<std::size_t>(
            UniformInt(rng, 0, static_cast<int64_t>(bank.size()) - 1));
        const Waveform& noise = bank.at(index).audio;
        const auto offset = static_cast<std::size_t>(
            UniformInt(rng, 0, static_cast<int64_t>(noise.size()) - 1));
        std::vector<double> rotated(noise.size());
        for (std::size_t i = 0; i < rotated.size(); ++i)
          rotated[i] = noise.samples()[(offset + i) % noise.size()];
        out = AddNoise(out, Waveform(std::move(rotated), noise.sample_rate_hz()),
                       Uniform(rng, e.lo, e.hi));
        break;
      }
      case AugmentTag::kBandReject:
        out = BandReject(out, Uniform(rng, e.lo, e.hi), kMaxRejectWidthHz);
        break;
      case AugmentTag::kTimeMask:
        out = TimeMask(out, rng);
        break;
      case AugmentTag::kReverb: {
        RoomSpec room = SampleRoom(rng, rir_max_order);
        room.absorption = Uniform(rng, e.lo, e.hi);
        out = Reverb(out, MakeRir(room, out.sample_rate_hz()));
        break;
      }
    }
  }
  return out;
}

}  // namespace

void CorpusSpec::Validate() const {
  if (vocab_size <= 0) throw std::invalid_argument("corpus.vocab_size must be positive");
  if (min_symbols <= 0) throw std::invalid_argument("corpus.min_symbols must be positive");
  if (max_symbols < min_symbols)
    throw std::invalid_argument("corpus.max_symbols must be >= corpus.min_symbols");
  if (n_utterances < 0) throw std::invalid_argument("corpus.n_utterances must be nonnegative");
  if (!(symbols.duration_ms > 0.0)) throw std::invalid_argument("corpus.symbols.duration_ms must be positive");
  if (symbols.ramp_ms < 0.0 || 2.0 * symbols.ramp_ms > symbols.duration_ms)
    throw std::invalid_argument("corpus.symbols.ramp_ms must lie in [0, duration_ms / 2]");
  if (symbols.harmonics <= 0) throw std::invalid_argument("corpus.symbols.harmonics must be positive");
  if (!(symbols.base_hz > 0.0)) throw std::invalid_argument("corpus.symbols.base_hz must be positive");
  if (!(symbols.gain_lo > 0.0 && symbols.gain_hi >= symbols.gain_lo && symbols.gain_hi <= 1.0))
    throw std::invalid_argument("corpus.symbols.gain_lo/gain_hi must satisfy 0 < gain_lo <= gain_hi <= 1");
  for (const auto& e : domain_profile) {
    if (e.hi < e.lo) throw std::invalid_argument("corpus.domain_profile: hi < lo");
  }
}

double SymbolFrequency(const SymbolTemplateSpec& spec, int symbol) {
  return spec.base_hz * std::pow(2.0, symbol * spec.semitone_step / 12.0);
}

Corpus GenerateCorpus(const CorpusSpec& spec, const Frontend& frontend) {
  spec.Validate();
  const int rate = frontend.sample_rate_hz();
  if (spec.symbols.duration_ms < frontend.spec().window_ms)
    throw std::invalid_argument("corpus: symbol templates (" +
                                std::to_string(spec.symbols.duration_ms) +
                                " ms) are shorter than one frontend window");
  const double top = SymbolFrequency(spec.symbols, spec.vocab_size - 1);
  if (top >= rate / 2.0)
    throw std::invalid_argument("corpus: highest symbol frequency exceeds Nyquist");

  bool needs_noise = false;
  for (const auto& e : spec.domain_profile) needs_noise |= e.kind == AugmentTag::kAdd;
  const NoiseBank bank =
      needs_noise ? NoiseBank::Synthetic(spec.noise_seed, 4.0, rate) : NoiseBank();
  const auto edge = static_cast<std::size_t>(std::lround(spec.symbols.edge_silence_ms * rate / 1000.0));

  Corpus corpus;
  corpus.reserve(static_cast<std::size_t>(spec.n_utterances));
  for (int u = 0; u < spec.n_utterances; ++u) {
    Rng rng = StreamRng(spec.seed, {0xC0, static_cast<uint64_t>(u)});
    const int length = static_cast<int>(UniformInt(rng, spec.min_symbols, spec.max_symbols));
    const double gain = Uniform(rng, spec.symbols.gain_lo, spec.symbols.gain_hi);
    LabelSeq label;
    std::vector<double> samples(edge, 0.0);
    for (int k = 0; k < length; ++k) {
      const int symbol = static_cast<int>(UniformInt(rng, 0, spec.vocab_size - 1));
      label.ids.push_back(symbol);
      for (double v : RenderSymbol(spec.symbols, symbol, rate, rng)) samples.push_back(gain * v);
    }
    samples.insert(samples.end(), edge, 0.0);
    if (spec.symbols.noise_floor_snr_db >= 0.0) {
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> noise(samples.size());
      for (double& v : noise) v = normal(rng);
      samples = AddNoise(Waveform(samples, rate), Waveform(std::move(noise), rate),
                         spec.symbols.noise_floor_snr_db)
                    .samples();
    }
    label.words = Vocabulary::Synthetic(spec.vocab_size).Render(label.ids);
    Waveform audio(std::move(samples), rate);
    if (!spec.domain_profile.empty())
      audio = ApplyProfile(audio, spec.domain_profile, bank, spec.rir_max_order, rng);

    const std::size_t frames = frontend.NumFrames(audio.size());
    if (frames < 2 * label.ids.size() + 1)
      throw std::invalid_argument("corpus: utterance " + std::to_string(u) + " has " +
                                  std::to_string(frames) + " frames for " +
                                  std::to_string(label.ids.size()) +
                                  " symbols; templates too short for the frontend");
    corpus.push_back({std::move(audio), std::move(label)});
  }
  return corpus;
}

std::vector<NamedDomain> DefaultDomains() {
  using T = AugmentTag;
  return {
      {"noisy", {{T::kAdd, 5.0, 15.0}}},
      {"reverberant", {{T::kReverb, 0.05, 0.2}}},
      {"pitched", {{T::kPitch, -150.0, 150.0}}},
      {"notched", {{T::kBandReject, 200.0, 2000.0},
                   {T::kBandReject, 200.0, 2000.0},
                   {T::kBandReject, 200.0, 2000.0}}},
      {"combined", {{T::kPitch, -75.0, 75.0}, {T::kReverb, 0.2, 0.5}, {T::kAdd, 10.0, 20.0}}},
  };
}

std::vector<ManifestEntry> LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed line, expected wav_path<TAB>transcript");
    std::filesystem::path wav = line.substr(0, tab);
    if (wav.is_relative()) wav = path.parent_path() / wav;
    if (!std::filesystem::exists(wav))
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": missing file " + wav.string());
    out.push_back({ReadWav(wav), line.substr(tab + 1)});
  }
  return out;
}

void ExportCorpus(const Corpus& corpus, const std::filesystem::path& dir,
                  const std::string& name) {
  std::filesystem::create_directories(dir / name);
  std::ofstream manifest(dir / (name + ".tsv"), std::ios::trunc);
  if (!manifest) throw std::runtime_error("cannot write manifest in " + dir.string());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string rel = name + "/" + std::to_string(i) + ".wav";
    WriteWav(corpus[i].audio, dir / rel);
    manifest << rel << '\t' << corpus[i].label.words << '\n';
  }
}

Corpus LoadCorpus(const std::filesystem::path& manifest, const Vocabulary& vocab) {
  Corpus corpus;
  for (auto& e : LoadManifest(manifest))
    corpus.push_back({std::move(e.audio), vocab.Label(e.transcript)});
  return corpus;
}

}  // namespace phonadv
