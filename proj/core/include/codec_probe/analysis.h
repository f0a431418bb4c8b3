// core/include/codec_probe/analysis.h

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

#ifndef CODEC_PROBE_ANALYSIS_H_
#define CODEC_PROBE_ANALYSIS_H_

#include <string>
#include <utility>
#include <vector>

#include "codec_probe/codec.h"
#include "codec_probe/metrics.h"
#include "codec_probe/waveform.h"

namespace codec_probe {

struct GainLevel {
  double gain_db = 0.0;

  /// 10^(gain_db / 20); exactly 1 at 0 dB.
  double alpha() const;
};

/// The homogeneity gain ladder used by default, in dB.
std::vector<GainLevel> DefaultGainLadder();

struct DistanceSummary {
  double mean = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  std::size_t count = 0;
};

/// Mean and linearly interpolated 5th/95th percentiles.
DistanceSummary Summarize(std::vector<double> values);

struct HomogeneityPoint {
  GainLevel gain;
  DistanceSummary distance;
};

struct LinearityReport {
  std::string codec;
  std::string mode;
  DistanceSummary additivity;
  std::vector<double> additivity_per_pair;
  std::vector<HomogeneityPoint> homogeneity;
  std::size_t pair_count = 0;
  std::size_t utterance_count = 0;
};

/// Maximum lag searched when aligning the two sides of a probe.
inline constexpr double kProbeAlignSeconds = 0.1;

/// Additivity: for each pair (truncated to the shorter one) compare
/// f(X+Y) against f(X)+f(Y) by mel distance after alignment. When
/// max|X+Y| > 1 both X and Y are scaled by 0.99 / max|X+Y| first.
/// Fills the additivity fields of the returned report.
LinearityReport AdditivityProbe(
    const Codec &codec, const std::string &mode,
    const std::vector<std::pair<Waveform, Waveform>> &pairs,
    const MelConfig &cfg = {});

/// Homogeneity: for each utterance and gain compare f(aX) against a*f(X).
LinearityReport HomogeneityProbe(const Codec &codec, const std::string &mode,
                                 const std::vector<Waveform> &utterances,
                                 const std::vector<GainLevel> &gains,
                                 const MelConfig &cfg = {});

/// Single-bin DFT magnitude |sum x[n] e^{-i w n}| via the Goertzel
/// recurrence. Throws kFrequencyAboveNyquist unless 0 < freq < rate/2.
double GoertzelMagnitude(const Waveform &w, double freq);

struct ProbeSettings {
  double duration = 1.0;
  double amplitude = 1.0;
  double fade = 0.01;
  double discard = 0.1;
  double phase = 0.0;
};

/// Gain reported when the output has no energy at the probe frequency.
inline constexpr double kSilentGainDb = -180.0;

struct FrequencyResponseCurve {
  std::string codec;
  std::string mode;
  double probe_amplitude = 1.0;
  double probe_duration = 1.0;
  std::vector<std::pair<double, double>> points;  // (Hz, dB)
};

/// 64 log-spaced frequencies from 20 Hz to 0.45 * rate.
std::vector<double> DefaultProbeFrequencies(int rate, int count = 64,
                                            double fmin = 20.0);

/// Stepped-sine response: one steady tone per frequency, aligned, edges
/// discarded, gain = 20 log10(|G(out, f)| / |G(in, f)|) on the central part.
FrequencyResponseCurve FrequencyResponse(const Codec &codec,
                                         const std::string &mode,
                                         const std::vector<double> &freqs,
                                         const ProbeSettings &probe = {});

}  // namespace codec_probe

#endif  // CODEC_PROBE_ANALYSIS_H_
