// src/audio/resample.cc

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
#include <numbers>

#include "phonadv/waveform.h"

namespace phonadv {
namespace {

constexpr double kZeroCrossings = 32.0;

}  // namespace

Waveform Resample(const Waveform& w, double factor) {
  if (!(factor >= 0.5 && factor <= 2.0))
    throw std::invalid_argument("Resample: factor " + std::to_string(factor) +
                                " outside [0.5, 2.0]");
  const auto& in = w.samples();
  const auto n_in = static_cast<long>(in.size());
  const long n_out =
      std::max(1L, std::lround(static_cast<double>(n_in) / factor));
  const double cutoff = std::min(1.0, 1.0 / factor);
  const double half_width = kZeroCrossings / cutoff;

  std::vector<double> out(static_cast<std::size_t>(n_out), 0.0);
  for (long m = 0; m < n_out; ++m) {
    const double t = static_cast<double>(m) * factor;
    const long lo = std::max(0L, static_cast<long>(std::ceil(t - half_width)));
    const long hi =
        std::min(n_in - 1, static_cast<long>(std::floor(t + half_width)));
    // sin(pi c tau) and cos(pi tau / half_width) advance by fixed rotations
    // as k steps, so only the first tap needs trig calls.
    const double tau0 = t - static_cast<double>(lo);
    const double a = std::numbers::pi * cutoff;
    const double b = std::numbers::pi / half_width;
    std::complex<double> sinc_phase = std::polar(1.0, a * tau0);
    std::complex<double> window_phase = std::polar(1.0, b * tau0);
    const std::complex<double> sinc_step = std::polar(1.0, -a);
    const std::complex<double> window_step = std::polar(1.0, -b);
    double acc = 0.0;
    for (long k = lo; k <= hi; ++k) {
      const double tau = t - static_cast<double>(k);
      const double window = 0.5 * (1.0 + window_phase.real());
      const double sinc = tau == 0.0 ? 1.0 : sinc_phase.imag() / (a * tau);
      acc += in[static_cast<std::size_t>(k)] * cutoff * sinc * window;
      sinc_phase *= sinc_step;
      window_phase *= window_step;
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return Waveform(std::move(out), w.sample_rate_hz());
}

}  // namespace phonadv
