// core/src/waveform.cc

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

#include "codec_probe/waveform.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "codec_probe/error.h"

namespace codec_probe {

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0)
    throw Error(Errc::kInvalidArgument,
                "sample rate must be positive, got " +
                    std::to_string(sample_rate_));
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i]))
      throw Error(Errc::kInvalidArgument,
                  "non-finite sample at index " + std::to_string(i));
  }
}

Waveform Waveform::Slice(std::size_t begin, std::size_t count) const {
  begin = std::min(begin, samples_.size());
  count = std::min(count, samples_.size() - begin);
  return Waveform(std::vector<double>(samples_.begin() + begin,
                                      samples_.begin() + begin + count),
                  sample_rate_);
}

Waveform Waveform::Scaled(double alpha) const {
  std::vector<double> out(samples_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * samples_[i];
  return Waveform(std::move(out), sample_rate_);
}

Waveform Add(const Waveform &a, const Waveform &b) {
  if (a.sample_rate() != b.sample_rate())
    throw Error(Errc::kRateMismatch,
                std::to_string(a.sample_rate()) + " vs " +
                    std::to_string(b.sample_rate()));
  std::size_t n = std::min(a.size(), b.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
  return Waveform(std::move(out), a.sample_rate());
}

}  // namespace codec_probe
