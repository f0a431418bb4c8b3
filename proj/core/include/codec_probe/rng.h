// core/include/codec_probe/rng.h

// Copyright 2026  The codec-probe Authors

// See the top-level LICENSE file for clarification regarding multiple authors
//
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

#ifndef CODEC_PROBE_RNG_H_
#define CODEC_PROBE_RNG_H_

#include <cstdint>
#include <string_view>

namespace codec_probe {

/// Counter-based generator: value i of stream `seed` is the SplitMix64
/// finalizer applied to seed + (i + 1) * 0x9E3779B97F4A7C15 (mod 2^64).
/// Outputs depend only on (seed, i), never on call order, so streams can be
/// split across threads and reproduce bit-for-bit on any platform.
///
/// Uniform(i) = ((Bits(i) >> 11) + 0.5) * 2^-53, in the open interval (0, 1).
/// Normal pairs use Box-Muller on uniforms 2j and 2j+1:
///   r = sqrt(-2 ln u0), z0 = r cos(2 pi u1), z1 = r sin(2 pi u1).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t Bits(std::uint64_t counter) const;
  double Uniform(std::uint64_t counter) const;
  /// Standard normal sample number i (uses uniforms 2*(i/2) and 2*(i/2)+1).
  double Normal(std::uint64_t i) const;

  /// Sequential convenience cursor over the same stream.
  std::uint64_t NextBits() { return Bits(cursor_++); }
  double NextUniform() { return Uniform(cursor_++); }
  /// Uniform integer in [0, n) by rejection (n > 0).
  std::uint64_t NextBelow(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t cursor_ = 0;
};

std::uint64_t SplitMix64(std::uint64_t x);

/// Derives a sub-stream seed from a parent seed and a string key (FNV-1a of
/// the key mixed through SplitMix64).
std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view key);

}  // namespace codec_probe

#endif  // CODEC_PROBE_RNG_H_
