// tests/unit/augment_test.cc

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

#include <cmath>
#include <complex>
#include <map>

#include <gtest/gtest.h>

#include "phonadv/augment.h"
#include "phonadv/fft.h"
#include "test_util.h"

namespace phonadv {
namespace {

using testing::Tone;

double PeakHz(const Waveform& w) {
  RealFft fft(w.size());
  std::vector<std::complex<double>> spec(fft.bins());
  fft.Forward(w.samples(), spec);
  std::size_t best = 1;
  for (std::size_t k = 1; k < spec.size(); ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  return static_cast<double>(best) * w.sample_rate_hz() / static_cast<double>(w.size());
}

Waveform RandomSignal(std::size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> s(n);
  for (auto& v : s) v = Uniform(rng, -0.5, 0.5);
  return Waveform(s, 16000);
}

double RelRms(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) num += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(num / a.size()) / Rms(b);
}

TEST(PitchTest, ZeroCentsIsIdentity) {
  const Waveform w = RandomSignal(3000, 1);
  const Waveform out = PitchShift(w, 0.0);
  ASSERT_EQ(out.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(out.samples()[i], w.samples()[i], 1e-6);
}

TEST(PitchTest, UpThreeHundredCentsMovesToneFrequency) {
  const Waveform out = PitchShift(Tone(100.0, 16000), 300.0);
  EXPECT_NEAR(PeakHz(out), 100.0 * std::pow(2.0, 0.25), 1.5);
  EXPECT_NEAR(PeakHz(out), 118.9, 1.5);
}

TEST(PitchTest, DownThreeHundredCentsLength) {
  EXPECT_EQ(PitchShift(Tone(100.0, 16000), -300.0).size(), 19027u);
  EXPECT_EQ(static_cast<long>(std::lround(16000 * std::pow(2.0, 0.25))), 19027);
}

TEST(PitchTest, RangeChecked) {
  EXPECT_THROW(PitchShift(Tone(100.0, 100), 300.5), std::invalid_argument);
  EXPECT_THROW(AugmentKind::Pitch(-301.0), std::invalid_argument);
}

TEST(AddNoiseTest, EqualPowerAtZeroDb) {
  const Waveform w = Tone(440.0, 4000, 0.1);
  const Waveform noise = RandomSignal(1000, 2);
  const auto scaled = ScaledNoise(w, noise, 0.0);
  EXPECT_LE(testing::RelErr(Rms(scaled), Rms(w.samples())), 1e-9);
}

TEST(AddNoiseTest, TwentyDbIsTenfoldAmplitude) {
  const Waveform w = Tone(440.0, 4000, 0.1);
  const auto scaled = ScaledNoise(w, RandomSignal(4000, 3), 20.0);
  EXPECT_LE(testing::RelErr(Rms(scaled), Rms(w.samples()) / 10.0), 1e-9);
}

TEST(AddNoiseTest, SelfNoiseDoubles) {
  const Waveform w = Tone(440.0, 4000, 0.2);
  const Waveform out = AddNoise(w, w, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(out.samples()[i], 2.0 * w.samples()[i], 1e-12);
}

TEST(AddNoiseTest, AchievedSnrMatchesRequestProperty) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Waveform w = RandomSignal(static_cast<std::size_t>(UniformInt(rng, 10, 5000)), 100 + trial);
    const Waveform noise = RandomSignal(static_cast<std::size_t>(UniformInt(rng, 10, 5000)), 900 + trial);
    const double snr = Uniform(rng, 0.0, 40.0);
    const auto scaled = ScaledNoise(w, noise, snr);
    ASSERT_EQ(scaled.size(), w.size());
    EXPECT_NEAR(20.0 * std::log10(Rms(w.samples()) / Rms(scaled)), snr, 1e-6);
    const Waveform out = AddNoise(w, noise, snr);
    EXPECT_LE(PeakAbs(out.samples()), 1.0);
  }
}

TEST(AddNoiseTest, RejectsSilenceAndRange) {
  const Waveform w = Tone(440.0, 100);
  const Waveform silent(std::vector<double>(100, 0.0), 16000);
  EXPECT_THROW(AddNoise(w, silent, 10.0), std::invalid_argument);
  EXPECT_THROW(AddNoise(silent, w, 10.0), std::invalid_argument);
  EXPECT_THROW(AddNoise(w, w, 40.5), std::invalid_argument);
  EXPECT_THROW(AddNoise(w, w, -0.1), std::invalid_argument);
}

TEST(BandRejectTest, ToneAtCenterRemoved) {
  const Waveform w = Tone(1000.0, 16000);
  const Waveform out = BandReject(w, 1000.0, 100.0);
  EXPECT_LE(Rms(out.samples()), 1e-6 * Rms(w.samples()));
}

TEST(BandRejectTest, DistantTonePasses) {
  const Waveform w = Tone(3000.0, 16000);
  const Waveform out = BandReject(w, 1000.0, 150.0);
  EXPECT_LE(RelRms(out.samples(), w.samples()), 1e-6);
}

TEST(BandRejectTest, AdjacentNotchesCommute) {
  const Waveform w = RandomSignal(8000, 5);
  const Waveform ab = BandReject(BandReject(w, 1000.0, 100.0), 1100.0, 100.0);
  const Waveform ba = BandReject(BandReject(w, 1100.0, 100.0), 1000.0, 100.0);
  double err = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) err += std::pow(ab.samples()[i] - ba.samples()[i], 2);
  EXPECT_LE(std::sqrt(err / w.size()), 1e-9);
}

TEST(BandRejectTest, BinContractProperty) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(UniformInt(rng, 256, 4000));
    const Waveform w = RandomSignal(n, 200 + trial);
    const double width = Uniform(rng, 1.0, 150.0);
    const double center = Uniform(rng, width / 2 + 1, 8000 - width / 2 - 1);
    const Waveform out = BandReject(w, center, width);
    ASSERT_EQ(out.size(), n);
    RealFft fft(n);
    std::vector<std::complex<double>> in_spec(fft.bins()), out_spec(fft.bins());
    fft.Forward(w.samples(), in_spec);
    fft.Forward(out.samples(), out_spec);
    double peak = 0.0;
    for (const auto& c : in_spec) peak = std::max(peak, std::abs(c));
    for (std::size_t k = 0; k < in_spec.size(); ++k) {
      const double f = static_cast<double>(k) * 16000.0 / static_cast<double>(n);
      if (f >= center - width / 2 && f <= center + width / 2) {
        EXPECT_LE(std::abs(out_spec[k]), 1e-9 * peak);
      } else {
        EXPECT_LE(std::abs(out_spec[k] - in_spec[k]), 1e-9 * std::max(std::abs(in_spec[k]), 1e-3 * peak));
      }
    }
  }
}

TEST(BandRejectTest, RejectsBandsOutsideNyquist) {
  const Waveform w = Tone(100.0, 1000);
  EXPECT_THROW(BandReject(w, 50.0, 150.0), std::invalid_argument);
  EXPECT_THROW(BandReject(w, 7990.0, 40.0), std::invalid_argument);
  EXPECT_THROW(BandReject(w, 1000.0, 151.0), std::invalid_argument);
  EXPECT_THROW(BandReject(w, 1000.0, 0.0), std::invalid_argument);
}

TEST(TimeMaskTest, EmptyIntervalsAreIdentity) {
  const Waveform w = RandomSignal(1000, 7);
  std::vector<MaskInterval> masks(kTimeMaskCount);
  for (std::size_t i = 0; i < masks.size(); ++i) masks[i] = {i * 50, 0};
  EXPECT_EQ(ApplyTimeMasks(w, masks).samples(), w.samples());
}

TEST(TimeMaskTest, DrawContractProperty) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(UniformInt(rng, 1, 80000));
    const Waveform w = RandomSignal(n, 300 + trial);
    Rng draw(trial);
    const auto masks = DrawTimeMasks(n, 16000, draw);
    ASSERT_EQ(masks.size(), 10u);
    std::vector<bool> covered(n, false);
    for (const auto& m : masks) {
      EXPECT_LT(m.start, n);
      EXPECT_LE(m.length, 32000u);
      EXPECT_LE(m.start + m.length, n);
      for (std::size_t i = m.start; i < m.start + m.length; ++i) covered[i] = true;
    }
    const Waveform out = ApplyTimeMasks(w, masks);
    std::size_t modified = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (covered[i]) {
        EXPECT_EQ(out.samples()[i], 0.0);
        ++modified;
      } else {
        EXPECT_EQ(out.samples()[i], w.samples()[i]);
      }
    }
    EXPECT_LE(modified, 320000u);
    EXPECT_EQ(ApplyTimeMasks(out, masks).samples(), out.samples());
  }
}

TEST(TimeMaskTest, SeededDrawIsDeterministic) {
  const Waveform w = RandomSignal(50000, 9);
  Rng a(11), b(11);
  EXPECT_EQ(TimeMask(w, a).samples(), TimeMask(w, b).samples());
}

TEST(RirTest, DirectPathOnlyRoom) {
  RoomSpec room;
  room.max_order = 0;
  const Waveform rir = MakeRir(room);
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < rir.size(); ++i)
    if (rir.samples()[i] != 0.0) nonzero.push_back(i);
  ASSERT_EQ(nonzero.size(), 1u);
  EXPECT_EQ(nonzero[0], static_cast<std::size_t>(std::lround(std::sqrt(5.25) / 343.0 * 16000.0)));
  EXPECT_EQ(nonzero[0], 107u);
  EXPECT_DOUBLE_EQ(rir.samples()[107], 1.0);
}

TEST(RirTest, FullAbsorptionKillsReflections) {
  RoomSpec room;
  room.max_order = 0;
  const Waveform direct = MakeRir(room);
  room.absorption = 1.0;
  room.max_order = 3;
  const Waveform absorbed = MakeRir(room);
  const std::size_t n = std::max(direct.size(), absorbed.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < direct.size() ? direct.samples()[i] : 0.0;
    const double b = i < absorbed.size() ? absorbed.samples()[i] : 0.0;
    EXPECT_EQ(a, b) << i;
  }
}

TEST(RirTest, FirstTapAndTapCountProperty) {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const int order = static_cast<int>(UniformInt(rng, 0, 4));
    const RoomSpec room = SampleRoom(rng, order);
    room.Validate();
    const Waveform rir = MakeRir(room);
    const double dist = std::sqrt(std::pow(room.source_m[0] - room.mic_m[0], 2) +
                                  std::pow(room.source_m[1] - room.mic_m[1], 2) +
                                  std::pow(room.source_m[2] - room.mic_m[2], 2));
    std::size_t first = rir.size(), taps = 0;
    double peak = 0.0;
    for (std::size_t i = 0; i < rir.size(); ++i) {
      if (rir.samples()[i] != 0.0) {
        first = std::min(first, i);
        ++taps;
      }
      peak = std::max(peak, std::abs(rir.samples()[i]));
    }
    EXPECT_EQ(first, static_cast<std::size_t>(std::lround(dist / 343.0 * 16000.0)));
    EXPECT_LE(taps, static_cast<std::size_t>(std::pow(2 * order + 1, 3)));
    EXPECT_DOUBLE_EQ(peak, 1.0);
  }
}

TEST(RirTest, InvalidRoomsRejected) {
  RoomSpec room;
  room.dims_m[1] = 0.0;
  EXPECT_THROW(room.Validate(), std::invalid_argument);
  room = RoomSpec{};
  room.mic_m = room.source_m;
  EXPECT_THROW(room.Validate(), std::invalid_argument);
  room = RoomSpec{};
  room.source_m[2] = 3.5;
  EXPECT_THROW(room.Validate(), std::invalid_argument);
  room = RoomSpec{};
  room.absorption = 0.0;
  EXPECT_THROW(room.Validate(), std::invalid_argument);
}

TEST(ReverbTest, UnitAndShiftKernels) {
  const Waveform w = RandomSignal(64, 12);
  EXPECT_EQ(Reverb(w, Waveform({1.0}, 16000)).samples(), w.samples());
  const Waveform shifted = Reverb(w, Waveform({0.0, 1.0}, 16000));
  ASSERT_EQ(shifted.size(), w.size());
  EXPECT_EQ(shifted.samples()[0], 0.0);
  // Peak renormalization can only move values if the dropped last sample held the peak.
  const double scale = PeakAbs(w.samples()) / PeakAbs(std::vector<double>(w.samples().begin(), w.samples().end() - 1));
  for (std::size_t k = 1; k < w.size(); ++k) EXPECT_NEAR(shifted.samples()[k], scale * w.samples()[k - 1], 1e-12);
}

TEST(ReverbTest, TailCarriesEnergyAndMatchesDirectConvolution) {
  const Waveform w = RandomSignal(16, 13);
  const Waveform rir({0.0, 1.0, 0.0, 0.5, -0.25}, 16000);
  const Waveform out = Reverb(w, rir);
  std::vector<double> ref(16, 0.0);
  for (std::size_t n = 0; n < 16; ++n)
    for (std::size_t j = 0; j < rir.size() && j <= n; ++j) ref[n] += rir.samples()[j] * w.samples()[n - j];
  const double scale = PeakAbs(w.samples()) / PeakAbs(ref);
  double tail = 0.0;
  for (std::size_t n = 0; n < 16; ++n) {
    EXPECT_NEAR(out.samples()[n], scale * ref[n], 1e-12);
    const double direct = n >= 1 ? w.samples()[n - 1] * scale : 0.0;
    tail += std::pow(out.samples()[n] - direct, 2);
  }
  EXPECT_GT(tail, 0.0);
}

TEST(ReverbTest, LongKernelMatchesDirectConvolution) {
  const Waveform w = RandomSignal(6000, 14);
  Rng rng(15);
  const Waveform rir = MakeRir(SampleRoom(rng, 3));
  const Waveform out = Reverb(w, rir);
  std::vector<double> ref(w.size(), 0.0);
  for (std::size_t j = 0; j < rir.size() && j < w.size(); ++j)
    for (std::size_t n = j; n < w.size(); ++n) ref[n] += rir.samples()[j] * w.samples()[n - j];
  const double scale = PeakAbs(w.samples()) / PeakAbs(ref);
  for (std::size_t n = 0; n < w.size(); ++n) EXPECT_NEAR(out.samples()[n], scale * ref[n], 1e-9);
}

TEST(SampleTransformTest, KindsAreUniform) {
  Rng rng(16);
  TransformSamplerOptions opts;
  opts.noise_bank_size = 3;
  opts.noise_clip_samples = 1000;
  std::map<AugmentTag, int> counts;
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) counts[SampleTransform(rng, opts).tag()]++;
  ASSERT_EQ(counts.size(), 5u);
  for (const auto& [tag, c] : counts) {
    const double f = static_cast<double>(c) / draws;
    EXPECT_GE(f, 0.18) << TagName(tag);
    EXPECT_LE(f, 0.22) << TagName(tag);
  }
}

TEST(SampleTransformTest, DeterministicAndInRange) {
  TransformSamplerOptions opts;
  opts.noise_bank_size = 3;
  opts.noise_clip_samples = 1000;
  Rng a(17), b(17);
  for (int i = 0; i < 5000; ++i) {
    const AugmentKind k = SampleTransform(a, opts);
    EXPECT_EQ(k.Describe(), SampleTransform(b, opts).Describe());
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, PitchParams>) {
            EXPECT_LE(std::abs(p.cents), 300.0);
          } else if constexpr (std::is_same_v<P, AddNoiseParams>) {
            EXPECT_GE(p.snr_db, 0.0);
            EXPECT_LE(p.snr_db, 40.0);
            EXPECT_LT(p.noise_index, 3u);
            EXPECT_LT(p.noise_offset, 1000u);
          } else if constexpr (std::is_same_v<P, BandRejectParams>) {
            EXPECT_GT(p.width_hz, 0.0);
            EXPECT_LE(p.width_hz, 150.0);
            EXPECT_GT(p.center_hz - p.width_hz / 2, 0.0);
            EXPECT_LT(p.center_hz + p.width_hz / 2, 8000.0);
          } else if constexpr (std::is_same_v<P, ReverbParams>) {
            EXPECT_NO_THROW(p.room.Validate());
          }
        },
        k.params());
  }
}

TEST(SampleTransformTest, AllKindsPreserveRateAndMostPreserveLength) {
  const NoiseBank bank = NoiseBank::Synthetic(3, 1.0);
  const auto opts = SamplerOptionsFor(bank, 16000, 2);
  Rng rng(18);
  const Waveform w = Tone(300.0, 8000);
  for (int i = 0; i < 60; ++i) {
    const AugmentKind k = SampleTransform(rng, opts);
    const Waveform out = ApplyTransform(w, k, bank);
    EXPECT_EQ(out.sample_rate_hz(), 16000);
    if (k.tag() != AugmentTag::kPitch) EXPECT_EQ(out.size(), w.size()) << k.Describe();
  }
}

TEST(SampleTransformTest, EmptyBankCannotDrawNoise) {
  Rng rng(19);
  TransformSamplerOptions opts;
  bool threw = false;
  for (int i = 0; i < 100 && !threw; ++i) {
    try {
      SampleTransform(rng, opts);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
  }
  EXPECT_TRUE(threw);
}

TEST(TagTest, NamesRoundTrip) {
  for (int i = 0; i < kNumAugmentTags; ++i) {
    const auto tag = static_cast<AugmentTag>(i);
    EXPECT_EQ(ParseTag(TagName(tag)), tag);
  }
  EXPECT_THROW(ParseTag("echo"), std::invalid_argument);
}

}  // namespace
}  // namespace phonadv
