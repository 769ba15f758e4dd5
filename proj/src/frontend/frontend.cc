// src/frontend/frontend.cc

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

#include "phonadv/frontend.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "phonadv/fft.h"
#include "phonadv/rng.h"

namespace phonadv {
namespace {

constexpr double kLogFloor = 1e-10;
constexpr double kMelLowHz = 20.0;

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

void FrontendSpec::Validate() const {
  if (n_mels <= 0) throw std::invalid_argument("frontend.n_mels must be positive");
  if (!(window_ms > 0.0)) throw std::invalid_argument("frontend.window_ms must be positive");
  if (!(hop_ms > 0.0)) throw std::invalid_argument("frontend.hop_ms must be positive");
  if (d <= 0) throw std::invalid_argument("frontend.d must be positive");
}

Frontend::Frontend(const FrontendSpec& spec, int sample_rate_hz)
    : spec_(spec), sample_rate_hz_(sample_rate_hz) {
  spec_.Validate();
  window_ = static_cast<std::size_t>(std::lround(spec_.window_ms * sample_rate_hz / 1000.0));
  hop_ = static_cast<std::size_t>(std::lround(spec_.hop_ms * sample_rate_hz / 1000.0));
  if (window_ < 2 || hop_ < 1)
    throw std::invalid_argument("frontend: window/hop too short for sample rate");
  n_fft_ = 1;
  while (n_fft_ < window_) n_fft_ <<= 1;

  hann_.resize(window_);
  for (std::size_t n = 0; n < window_; ++n)
    hann_[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                    static_cast<double>(window_ - 1));

  const std::size_t bins = n_fft_ / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(n_fft_);
  const double mel_lo = HzToMel(kMelLowHz);
  const double mel_hi = HzToMel(sample_rate_hz / 2.0);
  mel_filters_ = Matrix::Zero(spec_.n_mels, static_cast<Eigen::Index>(bins));
  for (int m = 0; m < spec_.n_mels; ++m) {
    const double left = MelToHz(mel_lo + (mel_hi - mel_lo) * m / (spec_.n_mels + 1));
    const double center = MelToHz(mel_lo + (mel_hi - mel_lo) * (m + 1) / (spec_.n_mels + 1));
    const double right = MelToHz(mel_lo + (mel_hi - mel_lo) * (m + 2) / (spec_.n_mels + 1));
    bool any = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double weight = 0.0;
      if (f > left && f <= center) weight = (f - left) / (center - left);
      else if (f > center && f < right) weight = (right - f) / (right - center);
      if (weight > 0.0) {
        mel_filters_(m, static_cast<Eigen::Index>(k)) = weight;
        any = true;
      }
    }
    // Low filters can be narrower than one bin; give them the nearest bin.
    if (!any) {
      const auto k = static_cast<Eigen::Index>(std::lround(center / bin_hz));
      mel_filters_(m, k) = 1.0;
    }
  }

  Rng rng(spec_.projection_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  projection_.resize(spec_.d, spec_.n_mels);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec_.n_mels));
  for (int i = 0; i < spec_.d; ++i)
    for (int j = 0; j < spec_.n_mels; ++j) projection_(i, j) = normal(rng) * scale;
}

std::size_t Frontend::NumFrames(std::size_t num_samples) const {
  if (num_samples < window_) return 0;
  return 1 + (num_samples - window_) / hop_;
}

void Frontend::CheckInput(const Waveform& x) const {
  if (x.sample_rate_hz() != sample_rate_hz_)
    throw std::invalid_argument("tokenize: sample rate " +
                                std::to_string(x.sample_rate_hz()) +
                                " does not match frontend rate " +
                                std::to_string(sample_rate_hz_));
  if (x.size() < window_)
    throw std::invalid_argument("tokenize: input of " + std::to_string(x.size()) +
                                " samples is shorter than one window (" +
                                std::to_string(window_) + ")");
}

Matrix Frontend::LogMel(const Waveform& x) const {
  CheckInput(x);
  const std::size_t frames = NumFrames(x.size());
  const std::size_t bins = n_fft_ / 2 + 1;
  RealFft fft(n_fft_);
  std::vector<double> buf(n_fft_, 0.0);
  std::vector<std::complex<double>> spec(bins);
  Vector power(static_cast<Eigen::Index>(bins));
  Matrix logmel(static_cast<Eigen::Index>(frames), spec_.n_mels);
  const auto& s = x.samples();
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t offset = t * hop_;
    for (std::size_t n = 0; n < window_; ++n) buf[n] = s[offset + n] * hann_[n];
    fft.Forward(buf, spec);
    for (std::size_t k = 0; k < bins; ++k) power(static_cast<Eigen::Index>(k)) = std::norm(spec[k]);
    const Vector energy = mel_filters_ * power;
    for (int m = 0; m < spec_.n_mels; ++m)
      logmel(static_cast<Eigen::Index>(t), m) = std::log(std::max(energy(m), kLogFloor));
  }
  return logmel;
}

PhonemeRepr Frontend::Tokenize(const Waveform& x) const {
  PhonemeRepr z;
  const Matrix logmel = LogMel(x);
  z.frames.resize(logmel.rows(), spec_.d);
  // Frame by frame, so a frame's value never depends on its position.
  for (Eigen::Index t = 0; t < logmel.rows(); ++t)
    z.frames.row(t).noalias() = (projection_ * logmel.row(t).transpose()).transpose();
  z.frame_hop_ms = spec_.hop_ms;
  return z;
}

std::vector<double> Frontend::InputGradient(const Waveform& x,
                                            const Matrix& grad_frames) const {
  CheckInput(x);
  const std::size_t frames = NumFrames(x.size());
  if (grad_frames.rows() != static_cast<Eigen::Index>(frames) ||
      grad_frames.cols() != spec_.d)
    throw std::invalid_argument("tokenize backward: gradient shape mismatch");
  const std::size_t bins = n_fft_ / 2 + 1;
  RealFft fft(n_fft_);
  std::vector<double> buf(n_fft_, 0.0), frame_grad(n_fft_);
  std::vector<std::complex<double>> spec(bins);
  Vector power(static_cast<Eigen::Index>(bins));
  const Matrix grad_logmel = grad_frames * projection_;
  std::vector<double> grad(x.size(), 0.0);
  const auto& s = x.samples();
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t offset = t * hop_;
    for (std::size_t n = 0; n < window_; ++n) buf[n] = s[offset + n] * hann_[n];
    std::fill(buf.begin() + static_cast<long>(window_), buf.end(), 0.0);
    fft.Forward(buf, spec);
    for (std::size_t k = 0; k < bins; ++k) power(static_cast<Eigen::Index>(k)) = std::norm(spec[k]);
    const Vector energy = mel_filters_ * power;
    Vector grad_energy(spec_.n_mels);
    for (int m = 0; m < spec_.n_mels; ++m) {
      grad_energy(m) = energy(m) > kLogFloor
                           ? grad_logmel(static_cast<Eigen::Index>(t), m) / energy(m)
                           : 0.0;
    }
    const Vector grad_power = mel_filters_.transpose() * grad_energy;
    // d|X_k|^2 / d f_n = 2 Re(X_k e^{+i 2 pi k n / N}); the c2r transform sums
    // interior bins twice, so the edge bins carry the explicit factor 2.
    for (std::size_t k = 0; k < bins; ++k) {
      double g = grad_power(static_cast<Eigen::Index>(k));
      if (k == 0 || k == bins - 1) g *= 2.0;
      spec[k] *= g;
    }
    fft.Inverse(spec, frame_grad);
    for (std::size_t n = 0; n < window_; ++n) grad[offset + n] += frame_grad[n] * hann_[n];
  }
  return grad;
}

}  // namespace phonadv
