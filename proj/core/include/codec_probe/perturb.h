// core/include/codec_probe/perturb.h

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

#ifndef CODEC_PROBE_PERTURB_H_
#define CODEC_PROBE_PERTURB_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codec_probe/waveform.h"

namespace codec_probe {

enum class NoiseFamily { kClean, kAmbient, kWhite, kReverb };

std::string_view NoiseFamilyName(NoiseFamily family);
NoiseFamily ParseNoiseFamily(std::string_view name);

/// One degradation setting of the evaluation grid. level_db is an SNR for
/// ambient/white and a DRR for reverb.
struct Condition {
  NoiseFamily family = NoiseFamily::kClean;
  std::optional<double> level_db;
  std::optional<std::string> noise_source;
  std::uint64_t seed = 0;

  /// Throws kInvalidArgument when the family/level/source combination is
  /// inconsistent.
  void Validate() const;
  /// Stable textual key, e.g. "white@-5" or "clean".
  std::string Label() const;
};

class RoomImpulseResponse {
 public:
  /// Throws kInvalidArgument if every tap is zero.
  RoomImpulseResponse(std::vector<double> taps, int sample_rate);
  /// Pins the direct path to a given nonzero tap instead of the argmax.
  RoomImpulseResponse(std::vector<double> taps, int sample_rate,
                      std::size_t direct_index);
  explicit RoomImpulseResponse(const Waveform &w)
      : RoomImpulseResponse(w.data(), w.sample_rate()) {}

  const std::vector<double> &taps() const { return taps_; }
  int sample_rate() const { return sample_rate_; }
  /// argmax |tap|, earliest on ties.
  std::size_t direct_index() const { return direct_index_; }

 private:
  std::vector<double> taps_;
  int sample_rate_;
  std::size_t direct_index_;
};

constexpr double kDefaultDirectWindow = 0.0025;

/// Seeded i.i.d. Gaussian noise (CounterRng::Normal), rescaled to an RMS of
/// exactly 0.1. Length is round(duration * rate).
Waveform GenWhiteNoise(double duration, int rate, std::uint64_t seed);

/// amplitude * sin(2 pi f t + phase) with raised-cosine fades of `fade`
/// seconds at both ends. Throws kFrequencyAboveNyquist.
Waveform GenSine(double freq, double duration, int rate, double amplitude,
                 double fade, double phase = 0.0);

struct MixResult {
  Waveform mixture;
  /// gain * looped/truncated noise; mixture[i] = speech[i] + scaled_noise[i]
  /// with a single rounding.
  Waveform scaled_noise;
  double gain;
};

/// Loops (wrap-around) or truncates noise to the speech length, then scales
/// it by g = rms(speech) / rms(fitted noise) * 10^(-snr/20). No clipping.
/// Throws kRateMismatch, kSilentInput.
MixResult MixAtSnrDetailed(const Waveform &speech, const Waveform &noise,
                           double snr_db);
Waveform MixAtSnr(const Waveform &speech, const Waveform &noise,
                  double snr_db);

/// 10 log10(sum direct^2 / sum tail^2), where the direct part is the taps
/// within +-direct_window seconds of the peak and the tail is every later
/// tap. Throws kEmptyTail when the tail is absent or has zero energy.
double MeasureDrr(const RoomImpulseResponse &rir,
                  double direct_window = kDefaultDirectWindow);

/// The RIR with its tail scaled so that MeasureDrr returns drr_db. The
/// direct index of the input is kept even when the scaled tail outgrows the
/// direct peak.
RoomImpulseResponse RirAtDrr(const RoomImpulseResponse &rir, double drr_db,
                             double direct_window = kDefaultDirectWindow);

/// Convolves speech with RirAtDrr(rir, drr_db), truncated to the speech
/// length. When renormalize is set the output is rescaled to the input RMS.
/// Throws kRateMismatch, kEmptyTail.
Waveform ApplyReverbAtDrr(const Waveform &speech,
                          const RoomImpulseResponse &rir, double drr_db,
                          double direct_window = kDefaultDirectWindow,
                          bool renormalize = true);

}  // namespace codec_probe

#endif  // CODEC_PROBE_PERTURB_H_
