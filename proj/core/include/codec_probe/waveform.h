// core/include/codec_probe/waveform.h

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

#ifndef CODEC_PROBE_WAVEFORM_H_
#define CODEC_PROBE_WAVEFORM_H_

#include <cstddef>
#include <span>
#include <vector>

namespace codec_probe {

/// Mono sample buffer at a fixed sample rate. Samples are 64-bit reals with
/// nominal full scale +-1.0; quantization only happens at file boundaries.
/// Immutable once constructed. The constructor rejects non-positive rates and
/// non-finite samples with Errc::kInvalidArgument.
class Waveform {
 public:
  Waveform(std::vector<double> samples, int sample_rate);

  int sample_rate() const { return sample_rate_; }
  std::span<const double> samples() const { return samples_; }
  const std::vector<double> &data() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  /// Copy of [begin, begin + count), clipped to the buffer.
  Waveform Slice(std::size_t begin, std::size_t count) const;
  /// Elementwise alpha * x.
  Waveform Scaled(double alpha) const;

  friend bool operator==(const Waveform &a, const Waveform &b) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

/// Elementwise sum truncated to the shorter operand. Rates must match.
Waveform Add(const Waveform &a, const Waveform &b);

}  // namespace codec_probe

#endif  // CODEC_PROBE_WAVEFORM_H_
