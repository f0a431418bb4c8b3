// core/include/codec_probe/signal.h

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

#ifndef CODEC_PROBE_SIGNAL_H_
#define CODEC_PROBE_SIGNAL_H_

#include <cstdint>

#include "codec_probe/waveform.h"

namespace codec_probe {

/// Band-limited resampling with a Kaiser-windowed sinc (beta 8.6, cutoff at
/// 0.45 x the lower of the two rates). The kernel spans 64 zero crossings'
/// worth of samples at the lower rate, so downsampling uses proportionally
/// more input taps. Taps falling outside the signal are dropped and the
/// remaining taps renormalized to unit sum, which keeps DC exact at the edges.
/// Output length is round(len * target / source).
Waveform Resample(const Waveform &w, int target_rate);

/// Root mean square. Throws kEmptySignal on an empty buffer.
double Rms(const Waveform &w);

/// Mean of squares; 0 for an empty span.
double MeanPower(std::span<const double> x);

struct AlignResult {
  Waveform ref;
  Waveform test;
  /// test[n + lag] lines up with ref[n].
  std::int64_t lag;
};

/// Finds the lag in [-max_lag, +max_lag] seconds maximizing the normalized
/// cross-correlation sum_n ref[n] * test[n + lag] / sqrt(E_ref * E_test),
/// then shifts and truncates both signals to their common support.
/// Near-ties are resolved by exact time-domain sums, then by smallest |lag|.
/// Throws kRateMismatch, kEmptyOverlap.
AlignResult Align(const Waveform &ref, const Waveform &test, double max_lag);

}  // namespace codec_probe

#endif  // CODEC_PROBE_SIGNAL_H_
