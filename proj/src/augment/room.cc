// src/augment/room.cc

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

#include "phonadv/room.h"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace phonadv {
namespace {

// Position of the i-th 1-D image of coordinate s in a segment [0, length];
// |i| is the number of wall reflections along that axis.
double ImageCoordinate(int i, double s, double length) {
  if (i % 2 == 0) return i * length + s;
  return (i + 1) * length - s;
}

}  // namespace

void RoomSpec::Validate() const {
  static const char* kAxis[] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    if (!(dims_m[a] > 0.0))
      throw std::invalid_argument(std::string("room: degenerate dimension ") +
                                  kAxis[a]);
  }
  for (int a = 0; a < 3; ++a) {
    if (!(source_m[a] > 0.0 && source_m[a] < dims_m[a]))
      throw std::invalid_argument(std::string("room: source outside room on ") +
                                  kAxis[a]);
    if (!(mic_m[a] > 0.0 && mic_m[a] < dims_m[a]))
      throw std::invalid_argument(std::string("room: mic outside room on ") +
                                  kAxis[a]);
  }
  if (source_m == mic_m)
    throw std::invalid_argument("room: source and mic coincide");
  if (!(absorption > 0.0 && absorption <= 1.0))
    throw std::invalid_argument("room: absorption must lie in (0, 1]");
  if (max_order < 0) throw std::invalid_argument("room: negative max_order");
  if (!(speed_of_sound_mps > 0.0))
    throw std::invalid_argument("room: speed of sound must be positive");
}

double DirectPathDistance(const RoomSpec& room) {
  double acc = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = room.source_m[a] - room.mic_m[a];
    acc += d * d;
  }
  return std::sqrt(acc);
}

Waveform MakeRir(const RoomSpec& room, int sample_rate_hz) {
  room.Validate();
  const int n = room.max_order;
  const double reflection = 1.0 - room.absorption;
  const double samples_per_meter = sample_rate_hz / room.speed_of_sound_mps;

  struct Tap {
    long index;
    double gain;
  };
  std::vector<Tap> taps;
  long max_index = 0;
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      for (int k = -n; k <= n; ++k) {
        const int order = std::abs(i) + std::abs(j) + std::abs(k);
        if (order > n) continue;
        const double gain = order == 0 ? 1.0 : std::pow(reflection, order);
        if (gain == 0.0) continue;
        const double dx =
            ImageCoordinate(i, room.source_m[0], room.dims_m[0]) - room.mic_m[0];
        const double dy =
            ImageCoordinate(j, room.source_m[1], room.dims_m[1]) - room.mic_m[1];
        const double dz =
            ImageCoordinate(k, room.source_m[2], room.dims_m[2]) - room.mic_m[2];
        const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
        const long index = std::lround(dist * samples_per_meter);
        taps.push_back({index, gain / dist});
        max_index = std::max(max_index, index);
      }
    }
  }

  std::vector<double> rir(static_cast<std::size_t>(max_index) + 1, 0.0);
  for (const Tap& t : taps) rir[static_cast<std::size_t>(t.index)] += t.gain;
  const double peak = PeakAbs(rir);
  for (double& v : rir) v /= peak;
  return Waveform(std::move(rir), sample_rate_hz);
}

}  // namespace phonadv
