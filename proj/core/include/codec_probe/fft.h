// core/include/codec_probe/fft.h

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

#ifndef CODEC_PROBE_FFT_H_
#define CODEC_PROBE_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace codec_probe {

/// Real-input DFT of length n backed by FFTW. Plans are created once per
/// size and cached process-wide; execution is thread-safe.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }

  /// in.size() <= n; shorter input is zero-padded. Returns n/2+1 bins.
  std::vector<std::complex<double>> Forward(std::span<const double> in) const;

  /// Unnormalized inverse of Forward: Inverse(Forward(x)) == n * x.
  std::vector<double> Inverse(
      std::span<const std::complex<double>> spectrum) const;

 private:
  std::size_t n_;
  void *forward_plan_;
  void *inverse_plan_;
};

/// Smallest power of two >= n.
std::size_t NextPow2(std::size_t n);

/// Full linear convolution of a and b via FFT (length a+b-1).
std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b);

}  // namespace codec_probe

#endif  // CODEC_PROBE_FFT_H_
