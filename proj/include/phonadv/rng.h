// include/phonadv/rng.h

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

#ifndef PHONADV_RNG_H_
#define PHONADV_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace phonadv {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
inline uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: the same (seed, keys) always yields the same
/// generator, independent of how many other streams were drawn before.
inline Rng StreamRng(uint64_t seed, std::initializer_list<uint64_t> keys) {
  uint64_t h = MixBits(seed);
  for (uint64_t k : keys) h = MixBits(h ^ MixBits(k + 0x632be59bd9b4e019ULL));
  return Rng(h);
}

/// Uniform real in [lo, hi]; returns lo when the interval is degenerate.
inline double Uniform(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform integer in [lo, hi] inclusive.
inline int64_t UniformInt(Rng& rng, int64_t lo, int64_t hi) {
  if (hi <= lo) return lo;
  return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

}  // namespace phonadv

#endif  // PHONADV_RNG_H_
