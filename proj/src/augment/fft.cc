// src/augment/fft.cc

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

#include "phonadv/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace phonadv {
namespace {

std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("RealFft: length must be positive");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  real_ = fftw_alloc_real(n_);
  auto* spec = fftw_alloc_complex(bins());
  spectrum_ = spec;
  const int len = static_cast<int>(n_);
  forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(len, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != bins())
    throw std::invalid_argument("RealFft::Forward: size mismatch");
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::memcpy(static_cast<void*>(out.data()), spectrum_,
              bins() * sizeof(fftw_complex));
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  if (in.size() != bins() || out.size() != n_)
    throw std::invalid_argument("RealFft::Inverse: size mismatch");
  // c2r destroys its input array, so it always works on the owned copy.
  std::memcpy(spectrum_, static_cast<const void*>(in.data()),
              bins() * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::copy(real_, real_ + n_, out.begin());
}

}  // namespace phonadv
