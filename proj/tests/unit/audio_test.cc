// tests/unit/audio_test.cc

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
#include <fstream>

#include <gtest/gtest.h>

#include "phonadv/fft.h"
#include "phonadv/waveform.h"
#include "test_util.h"

namespace phonadv {
namespace {

// Hand-built RIFF image with optional extra chunk and channel count.
std::string MakeWav(const std::vector<int16_t>& words, int channels = 1, bool extra_chunk = false,
                    uint16_t format = 1, uint16_t bits = 16) {
  auto u16 = [](std::string& s, uint16_t v) {
    s.push_back(static_cast<char>(v & 0xFF));
    s.push_back(static_cast<char>(v >> 8));
  };
  auto u32 = [&](std::string& s, uint32_t v) {
    u16(s, static_cast<uint16_t>(v & 0xFFFF));
    u16(s, static_cast<uint16_t>(v >> 16));
  };
  std::string body = "WAVE";
  if (extra_chunk) {
    body += "LIST";
    u32(body, 4);
    body += "abcd";
  }
  body += "fmt ";
  u32(body, 16);
  u16(body, format);
  u16(body, static_cast<uint16_t>(channels));
  u32(body, 16000);
  u32(body, 16000u * 2u * static_cast<uint32_t>(channels));
  u16(body, static_cast<uint16_t>(2 * channels));
  u16(body, bits);
  body += "data";
  u32(body, static_cast<uint32_t>(words.size() * 2));
  for (int16_t w : words) u16(body, static_cast<uint16_t>(w));
  std::string out = "RIFF";
  u32(out, static_cast<uint32_t>(body.size()));
  return out + body;
}

std::vector<int16_t> Words(const std::string& wav) {
  std::vector<int16_t> out;
  const std::size_t data = wav.find("data") + 8;
  for (std::size_t i = data; i + 1 < wav.size(); i += 2)
    out.push_back(static_cast<int16_t>(static_cast<uint8_t>(wav[i]) |
                                       (static_cast<uint8_t>(wav[i + 1]) << 8)));
  return out;
}

std::size_t PeakBin(const Waveform& w) {
  RealFft fft(w.size());
  std::vector<std::complex<double>> spec(fft.bins());
  fft.Forward(w.samples(), spec);
  std::size_t best = 0;
  for (std::size_t k = 1; k < spec.size(); ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  return best;
}

TEST(WavTest, ReadsZeroAndMostNegativeWords) {
  EXPECT_EQ(ParseWav(MakeWav({0})).samples(), std::vector<double>{0.0});
  EXPECT_EQ(ParseWav(MakeWav({-32768})).samples(), std::vector<double>{-1.0});
  EXPECT_EQ(ParseWav(MakeWav({0})).sample_rate_hz(), 16000);
}

TEST(WavTest, WritesBoundaryWords) {
  EXPECT_EQ(Words(EncodeWav(Waveform({0.0}, 16000))), std::vector<int16_t>{0});
  EXPECT_EQ(Words(EncodeWav(Waveform({1.0}, 16000))), std::vector<int16_t>{32767});
  EXPECT_EQ(Words(EncodeWav(Waveform({-1.0}, 16000))), std::vector<int16_t>{-32768});
  EXPECT_EQ(Words(EncodeWav(Waveform({3.0, -3.0}, 16000))), (std::vector<int16_t>{32767, -32768}));
}

TEST(WavTest, PcmWordsRoundTrip) {
  Rng rng(1);
  std::vector<int16_t> words(1000);
  for (auto& w : words) w = static_cast<int16_t>(UniformInt(rng, -32768, 32767));
  const std::string wav = MakeWav(words);
  EXPECT_EQ(Words(EncodeWav(ParseWav(wav))), words);
}

TEST(WavTest, SampleRoundTripWithinQuantization) {
  Rng rng(2);
  std::vector<double> s(1000);
  for (auto& v : s) v = Uniform(rng, -1.0, 1.0);
  const Waveform w(s, 16000);
  const auto path = testing::ScratchDir("wav") / "x.wav";
  WriteWav(w, path);
  const Waveform r = ReadWav(path);
  ASSERT_EQ(r.size(), w.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_LE(std::abs(r.samples()[i] - s[i]), 1.0 / 32768.0);
    EXPECT_LE(std::abs(r.samples()[i]), 1.0);
  }
}

TEST(WavTest, MultichannelKeepsFirstAndSkipsExtraChunks) {
  const Waveform w = ParseWav(MakeWav({100, -5, 200, -6}, 2, true));
  EXPECT_EQ(w.samples(), (std::vector<double>{100 / 32768.0, 200 / 32768.0}));
}

TEST(WavTest, RejectsBadFiles) {
  EXPECT_THROW(ParseWav("garbage"), WavError);
  EXPECT_THROW(ParseWav(MakeWav({1}, 1, false, 3)), WavError);
  EXPECT_THROW(ParseWav(MakeWav({1}, 1, false, 1, 24)), WavError);
  EXPECT_THROW(ParseWav(MakeWav({})), WavError);
  EXPECT_THROW(ReadWav("/nonexistent/dir/x.wav"), WavError);
  EXPECT_THROW(WriteWav(Waveform({0.0}, 16000), "/nonexistent/dir/x.wav"), WavError);
}

TEST(WaveformTest, Validation) {
  EXPECT_THROW(Waveform({}, 16000), std::invalid_argument);
  EXPECT_THROW(Waveform({0.0}, 0), std::invalid_argument);
  EXPECT_THROW(Waveform({std::nan("")}, 16000), std::invalid_argument);
}

TEST(ResampleTest, IdentityFactor) {
  Rng rng(3);
  std::vector<double> s(500);
  for (auto& v : s) v = Uniform(rng, -1.0, 1.0);
  const Waveform r = Resample(Waveform(s, 16000), 1.0);
  ASSERT_EQ(r.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(r.samples()[i], s[i], 1e-6);
}

TEST(ResampleTest, LengthContract) {
  const Waveform w = testing::Tone(100.0, 1000);
  EXPECT_EQ(Resample(w, 0.5).size(), 2000u);
  EXPECT_EQ(Resample(w, 2.0).size(), 500u);
  EXPECT_EQ(Resample(w, 1.3).size(), static_cast<std::size_t>(std::lround(1000 / 1.3)));
  EXPECT_THROW(Resample(w, 0.49), std::invalid_argument);
  EXPECT_THROW(Resample(w, 2.01), std::invalid_argument);
}

TEST(ResampleTest, FactorTwoDoublesToneFrequency) {
  const Waveform w = testing::Tone(100.0, 16000);
  const Waveform r = Resample(w, 2.0);
  // 100 Hz over 1 s is bin 100; the 0.5 s output holds 200 Hz at bin 100 of 8000.
  const double hz = static_cast<double>(PeakBin(r)) * 16000.0 / static_cast<double>(r.size());
  EXPECT_NEAR(hz, 200.0, 2.0);
  EXPECT_NEAR(static_cast<double>(PeakBin(w)), 100.0, 0.5);
}

TEST(ResampleTest, ForwardBackRecoversBandLimitedSignal) {
  for (double f : {0.7, 1.25, 1.9}) {
    std::vector<double> s(4000);
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] = 0.3 * std::sin(2 * std::numbers::pi * 300.0 * i / 16000.0) +
             0.2 * std::sin(2 * std::numbers::pi * 1100.0 * i / 16000.0 + 1.0);
    const Waveform w(s, 16000);
    const Waveform back = Resample(Resample(w, f), 1.0 / f);
    EXPECT_LE(std::abs(static_cast<long>(back.size()) - static_cast<long>(w.size())), 1);
    double err = 0.0, ref = 0.0;
    const std::size_t n = std::min(back.size(), w.size());
    for (std::size_t i = 64; i + 64 < n; ++i) {
      err += std::pow(back.samples()[i] - s[i], 2);
      ref += s[i] * s[i];
    }
    EXPECT_LE(std::sqrt(err / ref), 1e-2) << "factor " << f;
  }
}

// Windowed-sinc interpolation evaluated tap by tap.
std::vector<double> OracleResample(const std::vector<double>& in, double factor) {
  const long n_out = std::lround(static_cast<double>(in.size()) / factor);
  const double cutoff = std::min(1.0, 1.0 / factor);
  const double half = 32.0 / cutoff;
  std::vector<double> out(static_cast<std::size_t>(n_out));
  for (long m = 0; m < n_out; ++m) {
    const double t = m * factor;
    double acc = 0.0;
    for (long k = 0; k < static_cast<long>(in.size()); ++k) {
      const double tau = t - k;
      if (std::abs(tau) > half) continue;
      const double x = std::numbers::pi * cutoff * tau;
      const double sinc = tau == 0.0 ? 1.0 : std::sin(x) / x;
      acc += in[static_cast<std::size_t>(k)] * cutoff * sinc * 0.5 * (1.0 + std::cos(std::numbers::pi * tau / half));
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return out;
}

TEST(ResampleTest, MatchesTapByTapOracle) {
  Rng rng(5);
  for (double f : {0.5, 0.77, 1.0, 1.19, 2.0}) {
    std::vector<double> s(700);
    for (auto& v : s) v = Uniform(rng, -1.0, 1.0);
    const auto ref = OracleResample(s, f);
    const Waveform r = Resample(Waveform(s, 16000), f);
    ASSERT_EQ(r.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(r.samples()[i], ref[i], 1e-10) << f;
  }
}

TEST(FftTest, InverseOfForwardScaledByN) {
  Rng rng(4);
  std::vector<double> x(64), y(64);
  for (auto& v : x) v = Uniform(rng, -1.0, 1.0);
  RealFft fft(64);
  std::vector<std::complex<double>> spec(fft.bins());
  fft.Forward(x, spec);
  fft.Inverse(spec, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i] / 64.0, x[i], 1e-12);
}

}  // namespace
}  // namespace phonadv
