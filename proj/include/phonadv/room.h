// include/phonadv/room.h

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

#ifndef PHONADV_ROOM_H_
#define PHONADV_ROOM_H_

#include <array>

#include "phonadv/waveform.h"

namespace phonadv {

/// Shoebox room for image-source impulse responses. Eleven scalar fields when
/// serialized: dims (3), source (3), mic (3), absorption, max_order.
struct RoomSpec {
  std::array<double, 3> dims_m{5.0, 4.0, 3.0};
  std::array<double, 3> source_m{1.0, 1.0, 1.0};
  std::array<double, 3> mic_m{3.0, 2.0, 1.5};
  double absorption = 0.5;  // in (0, 1]; reflection gain is (1 - absorption)^bounces
  int max_order = 6;
  double speed_of_sound_mps = 343.0;

  /// Throws std::invalid_argument describing the first violated constraint.
  void Validate() const;
};

double DirectPathDistance(const RoomSpec& room);

/// Image-source room impulse response with frequency-independent absorption.
/// Each image of total reflection order <= max_order contributes
/// (1 - absorption)^order / distance at sample round(distance / c * rate).
/// The result is normalized so that its peak |tap| is 1.
Waveform MakeRir(const RoomSpec& room, int sample_rate_hz = kCanonicalSampleRate);

}  // namespace phonadv

#endif  // PHONADV_ROOM_H_
