// src/augment/augment.cc

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

#include "phonadv/augment.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "phonadv/fft.h"

namespace phonadv {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> TileNoise(const Waveform& noise, std::size_t n,
                              std::size_t offset) {
  const auto& src = noise.samples();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = src[(offset + i) % src.size()];
  return out;
}

std::vector<double> ScaledNoiseImpl(const Waveform& w,
                                    std::vector<double> noise, double snr_db) {
  const double signal_rms = Rms(w.samples());
  if (!(signal_rms > 0.0))
    throw std::invalid_argument("add_noise: silent signal (rms = 0)");
  const double noise_rms = Rms(noise);
  if (!(noise_rms > 0.0))
    throw std::invalid_argument("add_noise: silent noise (rms = 0)");
  const double gain = signal_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));
  for (double& v : noise) v *= gain;
  return noise;
}

Waveform MixAndClip(const Waveform& w, const std::vector<double>& scaled) {
  std::vector<double> out(w.samples());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::clamp(out[i] + scaled[i], -1.0, 1.0);
  return Waveform(std::move(out), w.sample_rate_hz());
}

void CheckSnr(double snr_db) {
  if (!(snr_db >= kMinSnrDb && snr_db <= kMaxSnrDb))
    throw std::invalid_argument("add_noise: snr_db " + std::to_string(snr_db) +
                                " outside [0, 40]");
}

// Gaussian noise shaped in the frequency domain by `shape(freq_hz)`.
std::vector<double> ShapedNoise(Rng& rng, std::size_t n, int rate,
                                double (*shape)(double)) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> white(n);
  for (double& v : white) v = normal(rng);
  RealFft fft(n);
  std::vector<std::complex<double>> spec(fft.bins());
  fft.Forward(white, spec);
  for (std::size_t k = 0; k < spec.size(); ++k)
    spec[k] *= shape(static_cast<double>(k) * rate / static_cast<double>(n));
  std::vector<double> out(n);
  fft.Inverse(spec, out);
  return out;
}

std::vector<double> NormalizeRms(std::vector<double> x, double target) {
  const double r = Rms(x);
  for (double& v : x) v *= target / r;
  return x;
}

}  // namespace

std::string_view TagName(AugmentTag tag) {
  switch (tag) {
    case AugmentTag::kPitch: return "pitch";
    case AugmentTag::kAdd: return "add";
    case AugmentTag::kBandReject: return "band_rej";
    case AugmentTag::kTimeMask: return "time_mask";
    case AugmentTag::kReverb: return "reverb";
  }
  return "unknown";
}

AugmentTag ParseTag(std::string_view name) {
  for (int i = 0; i < kNumAugmentTags; ++i) {
    const auto tag = static_cast<AugmentTag>(i);
    if (TagName(tag) == name) return tag;
  }
  throw std::invalid_argument("unknown augmentation '" + std::string(name) + "'");
}

AugmentKind AugmentKind::Pitch(double cents) {
  if (!(std::abs(cents) <= kMaxPitchCents))
    throw std::invalid_argument("pitch: cents " + std::to_string(cents) +
                                " outside [-300, 300]");
  return AugmentKind(PitchParams{cents});
}

AugmentKind AugmentKind::AddNoise(double snr_db, std::size_t noise_index,
                                  std::size_t noise_offset) {
  CheckSnr(snr_db);
  return AugmentKind(AddNoiseParams{snr_db, noise_index, noise_offset});
}

AugmentKind AugmentKind::BandReject(double center_hz, double width_hz) {
  if (!(width_hz > 0.0 && width_hz <= kMaxRejectWidthHz))
    throw std::invalid_argument("band_rej: width " + std::to_string(width_hz) +
                                " outside (0, 150]");
  if (!(center_hz - width_hz / 2 > 0.0))
    throw std::invalid_argument("band_rej: band extends below 0 Hz");
  return AugmentKind(BandRejectParams{center_hz, width_hz});
}

AugmentKind AugmentKind::TimeMask(uint64_t seed) {
  return AugmentKind(TimeMaskParams{seed});
}

AugmentKind AugmentKind::Reverb(const RoomSpec& room) {
  room.Validate();
  return AugmentKind(ReverbParams{room});
}

std::string AugmentKind::Describe() const {
  std::ostringstream os;
  os << TagName(tag());
  std::visit(Overloaded{
                 [&](const PitchParams& p) { os << "(cents=" << p.cents << ")"; },
                 [&](const AddNoiseParams& p) {
                   os << "(snr_db=" << p.snr_db << ",noise=" << p.noise_index
                      << ")";
                 },
                 [&](const BandRejectParams& p) {
                   os << "(center_hz=" << p.center_hz
                      << ",width_hz=" << p.width_hz << ")";
                 },
                 [&](const TimeMaskParams& p) { os << "(seed=" << p.seed << ")"; },
                 [&](const ReverbParams& p) {
                   os << "(room=" << p.room.dims_m[0] << "x" << p.room.dims_m[1]
                      << "x" << p.room.dims_m[2]
                      << ",absorption=" << p.room.absorption << ")";
                 }},
             params_);
  return os.str();
}

NoiseBank::NoiseBank(std::vector<NoiseClip> clips) : clips_(std::move(clips)) {
  for (const auto& c : clips_) {
    if (!(Rms(c.audio.samples()) > 0.0))
      throw std::invalid_argument("noise bank: silent clip '" + c.tag + "'");
  }
}

NoiseBank NoiseBank::Synthetic(uint64_t seed, double seconds,
                               int sample_rate_hz) {
  const auto n = static_cast<std::size_t>(std::lround(seconds * sample_rate_hz));
  const double rate = sample_rate_hz;
  std::vector<NoiseClip> clips;

  Rng white_rng = StreamRng(seed, {1});
  clips.push_back(
      {"white", Waveform(NormalizeRms(ShapedNoise(white_rng, n, sample_rate_hz,
                                                  [](double) { return 1.0; }),
                                      0.1),
                         sample_rate_hz)});

  Rng pink_rng = StreamRng(seed, {2});
  clips.push_back(
      {"pink", Waveform(NormalizeRms(ShapedNoise(pink_rng, n, sample_rate_hz,
                                                 [](double f) {
                                                   return 1.0 / std::sqrt(
                                                              std::max(f, 20.0));
                                                 }),
                                     0.1),
                        sample_rate_hz)});

  // Several speech-band noise "talkers", each gated by a slow syllabic
  // envelope at its own rate and phase.
  Rng babble_rng = StreamRng(seed, {3});
  std::vector<double> babble(n, 0.0);
  for (int talker = 0; talker < 6; ++talker) {
    const auto band = ShapedNoise(babble_rng, n, sample_rate_hz, [](double f) {
      return (f >= 200.0 && f <= 3500.0) ? 1.0 / std::sqrt(f / 200.0) : 0.0;
    });
    const double am_hz = Uniform(babble_rng, 3.0, 6.0);
    const double phase = Uniform(babble_rng, 0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
      const double env =
          0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * am_hz * static_cast<double>(i) / rate +
                                phase));
      babble[i] += band[i] * env * env;
    }
  }
  clips.push_back(
      {"babble", Waveform(NormalizeRms(std::move(babble), 0.1), sample_rate_hz)});
  return NoiseBank(std::move(clips));
}

NoiseBank NoiseBank::FromManifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open noise manifest " + manifest.string());
  std::vector<NoiseClip> clips;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw std::runtime_error(manifest.string() + ":" + std::to_string(line_no) +
                               ": expected path<TAB>tag");
    std::filesystem::path path = line.substr(0, tab);
    if (path.is_relative()) path = manifest.parent_path() / path;
    clips.push_back({line.substr(tab + 1), ReadWav(path)});
  }
  return NoiseBank(std::move(clips));
}

Waveform PitchShift(const Waveform& w, double cents) {
  if (!(std::abs(cents) <= kMaxPitchCents))
    throw std::invalid_argument("pitch: cents outside [-300, 300]");
  return Resample(w, std::pow(2.0, cents / 1200.0));
}

std::vector<double> ScaledNoise(const Waveform& w, const Waveform& noise,
                                double snr_db) {
  CheckSnr(snr_db);
  return ScaledNoiseImpl(w, TileNoise(noise, w.size(), 0), snr_db);
}

Waveform AddNoise(const Waveform& w, const Waveform& noise, double snr_db) {
  return MixAndClip(w, ScaledNoise(w, noise, snr_db));
}

Waveform BandReject(const Waveform& w, double center_hz, double width_hz) {
  const double rate = w.sample_rate_hz();
  const double lo = center_hz - width_hz / 2.0;
  const double hi = center_hz + width_hz / 2.0;
  if (!(width_hz > 0.0 && width_hz <= kMaxRejectWidthHz))
    throw std::invalid_argument("band_rej: width outside (0, 150]");
  if (!(lo > 0.0 && hi < rate / 2.0))
    throw std::invalid_argument("band_rej: band outside (0, Nyquist)");

  const std::size_t n = w.size();
  RealFft fft(n);
  std::vector<std::complex<double>> spec(fft.bins());
  fft.Forward(w.samples(), spec);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) * rate / static_cast<double>(n);
    if (f >= lo && f <= hi) spec[k] = 0.0;
  }
  std::vector<double> out(n);
  fft.Inverse(spec, out);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return Waveform(std::move(out), w.sample_rate_hz());
}

std::vector<MaskInterval> DrawTimeMasks(std::size_t num_samples,
                                        int sample_rate_hz, Rng& rng) {
  const auto max_len = static_cast<std::size_t>(
      std::lround(kMaxTimeMaskMs / 1000.0 * sample_rate_hz));
  std::vector<MaskInterval> masks(kTimeMaskCount);
  for (auto& m : masks) {
    m.start = static_cast<std::size_t>(
        UniformInt(rng, 0, static_cast<int64_t>(num_samples) - 1));
    const std::size_t cap = std::min(max_len, num_samples - m.start);
    m.length = static_cast<std::size_t>(
        UniformInt(rng, 0, static_cast<int64_t>(cap)));
  }
  return masks;
}

Waveform ApplyTimeMasks(const Waveform& w,
                        const std::vector<MaskInterval>& masks) {
  std::vector<double> out(w.samples());
  for (const auto& m : masks) {
    const std::size_t end = std::min(out.size(), m.start + m.length);
    for (std::size_t i = m.start; i < end; ++i) out[i] = 0.0;
  }
  return Waveform(std::move(out), w.sample_rate_hz());
}

Waveform TimeMask(const Waveform& w, Rng& rng) {
  return ApplyTimeMasks(w, DrawTimeMasks(w.size(), w.sample_rate_hz(), rng));
}

namespace {

// Kernels with few taps are convolved directly, longer ones through the FFT.
constexpr std::size_t kDirectReverbTaps = 64;

Waveform PeakMatched(std::vector<double> out, const Waveform& w) {
  const double out_peak = PeakAbs(out);
  if (out_peak > 0.0) {
    const double scale = PeakAbs(w.samples()) / out_peak;
    for (double& v : out) v *= scale;
  }
  return Waveform(std::move(out), w.sample_rate_hz());
}

}  // namespace

Waveform Reverb(const Waveform& w, const Waveform& rir) {
  const auto& x = w.samples();
  const auto& h = rir.samples();
  const std::size_t taps = std::min(h.size(), x.size());
  std::vector<double> out(x.size(), 0.0);
  const auto nonzero = static_cast<std::size_t>(
      std::count_if(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(taps),
                    [](double v) { return v != 0.0; }));
  if (nonzero <= kDirectReverbTaps) {
    for (std::size_t j = 0; j < taps; ++j) {
      if (h[j] == 0.0) continue;
      for (std::size_t i = j; i < x.size(); ++i) out[i] += h[j] * x[i - j];
    }
    return PeakMatched(std::move(out), w);
  }
  std::size_t n = 1;
  while (n < x.size() + taps - 1) n <<= 1;
  RealFft fft(n);
  std::vector<double> buf(n, 0.0);
  std::vector<std::complex<double>> xs(fft.bins()), hs(fft.bins());
  std::copy(x.begin(), x.end(), buf.begin());
  fft.Forward(buf, xs);
  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(taps), buf.begin());
  fft.Forward(buf, hs);
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] *= hs[k];
  fft.Inverse(xs, buf);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i] * inv_n;
  return PeakMatched(std::move(out), w);
}

RoomSpec SampleRoom(Rng& rng, int max_order) {
  RoomSpec room;
  room.dims_m = {Uniform(rng, 3.0, 10.0), Uniform(rng, 3.0, 8.0),
                 Uniform(rng, 2.5, 4.5)};
  constexpr double kMargin = 0.5;
  for (int a = 0; a < 3; ++a) {
    room.source_m[a] = Uniform(rng, kMargin, room.dims_m[a] - kMargin);
    room.mic_m[a] = Uniform(rng, kMargin, room.dims_m[a] - kMargin);
  }
  room.absorption = Uniform(rng, 0.2, 0.8);
  room.max_order = max_order;
  return room;
}

AugmentKind SampleTransform(Rng& rng, const TransformSamplerOptions& options) {
  const auto tag = static_cast<AugmentTag>(UniformInt(rng, 0, kNumAugmentTags - 1));
  switch (tag) {
    case AugmentTag::kPitch:
      return AugmentKind::Pitch(Uniform(rng, -kMaxPitchCents, kMaxPitchCents));
    case AugmentTag::kAdd: {
      if (options.noise_bank_size == 0)
        throw std::invalid_argument("sample_transform: empty noise bank");
      const double snr = Uniform(rng, kMinSnrDb, kMaxSnrDb);
      const auto index = static_cast<std::size_t>(
          UniformInt(rng, 0, static_cast<int64_t>(options.noise_bank_size) - 1));
      const auto offset = static_cast<std::size_t>(UniformInt(
          rng, 0, static_cast<int64_t>(std::max<std::size_t>(1, options.noise_clip_samples)) - 1));
      return AugmentKind::AddNoise(snr, index, offset);
    }
    case AugmentTag::kBandReject: {
      // (0, 150]: 1 - u maps [0, 1) onto (0, 1].
      const double width =
          kMaxRejectWidthHz * (1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng));
      const double nyquist = options.sample_rate_hz / 2.0;
      const double center =
          Uniform(rng, width / 2.0 + 1.0, nyquist - width / 2.0 - 1.0);
      return AugmentKind::BandReject(center, width);
    }
    case AugmentTag::kTimeMask:
      return AugmentKind::TimeMask(rng());
    case AugmentTag::kReverb:
      return AugmentKind::Reverb(SampleRoom(rng, options.rir_max_order));
  }
  throw std::logic_error("unreachable");
}

TransformSamplerOptions SamplerOptionsFor(const NoiseBank& bank,
                                          int sample_rate_hz, int rir_max_order) {
  TransformSamplerOptions opts;
  opts.noise_bank_size = bank.size();
  opts.sample_rate_hz = sample_rate_hz;
  opts.rir_max_order = rir_max_order;
  std::size_t shortest = 0;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const std::size_t len = bank.at(i).audio.size();
    shortest = (i == 0) ? len : std::min(shortest, len);
  }
  opts.noise_clip_samples = shortest;
  return opts;
}

Waveform ApplyTransform(const Waveform& w, const AugmentKind& kind,
                        const NoiseBank& bank) {
  return std::visit(
      Overloaded{
          [&](const PitchParams& p) { return PitchShift(w, p.cents); },
          [&](const AddNoiseParams& p) {
            const Waveform& noise = bank.at(p.noise_index).audio;
            return MixAndClip(
                w, ScaledNoiseImpl(w, TileNoise(noise, w.size(), p.noise_offset),
                                   p.snr_db));
          },
          [&](const BandRejectParams& p) {
            return BandReject(w, p.center_hz, p.width_hz);
          },
          [&](const TimeMaskParams& p) {
            Rng rng(p.seed);
            return TimeMask(w, rng);
          },
          [&](const ReverbParams& p) {
            return Reverb(w, MakeRir(p.room, w.sample_rate_hz()));
          }},
      kind.params());
}

}  // namespace phonadv
