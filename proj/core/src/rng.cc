// core/src/rng.cc

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

#include "codec_probe/rng.h"

#include <cmath>
#include <numbers>

namespace codec_probe {

std::uint64_t SplitMix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::Bits(std::uint64_t counter) const {
  return SplitMix64(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::Uniform(std::uint64_t counter) const {
  return (static_cast<double>(Bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::Normal(std::uint64_t i) const {
  std::uint64_t pair = i / 2;
  double u0 = Uniform(2 * pair);
  double u1 = Uniform(2 * pair + 1);
  double r = std::sqrt(-2.0 * std::log(u0));
  double theta = 2.0 * std::numbers::pi * u1;
  return (i % 2 == 0) ? r * std::cos(theta) : r * std::sin(theta);
}

std::uint64_t CounterRng::NextBelow(std::uint64_t n) {
  // Rejection keeps the draw unbiased for any n.
  const std::uint64_t limit = ~0ULL - (~0ULL % n);
  for (;;) {
    std::uint64_t v = NextBits();
    if (v < limit) return v % n;
  }
}

std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(parent ^ SplitMix64(h));
}

}  // namespace codec_probe
