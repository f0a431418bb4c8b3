// core/src/perturb.cc

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

#include "codec_probe/perturb.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "codec_probe/error.h"
#include "codec_probe/fft.h"
#include "codec_probe/rng.h"
#include "codec_probe/signal.h"

namespace codec_probe {

namespace {

void RequireSameRate(int a, int b) {
  if (a != b)
    throw Error(Errc::kRateMismatch,
                std::to_string(a) + " vs " + std::to_string(b));
}

struct DrrParts {
  double direct_energy = 0.0;
  double tail_energy = 0.0;
  std::size_t tail_begin = 0;
};

DrrParts SplitRir(const RoomImpulseResponse &rir, double direct_window) {
  if (direct_window <= 0.0)
    throw Error(Errc::kInvalidArgument, "direct_window must be positive");
  const auto &taps = rir.taps();
  const auto half = static_cast<std::size_t>(
      std::llround(direct_window * rir.sample_rate()));
  const std::size_t peak = rir.direct_index();
  DrrParts parts;
  std::size_t begin = peak >= half ? peak - half : 0;
  parts.tail_begin = std::min(taps.size(), peak + half + 1);
  for (std::size_t i = begin; i < parts.tail_begin; ++i)
    parts.direct_energy += taps[i] * taps[i];
  for (std::size_t i = parts.tail_begin; i < taps.size(); ++i)
    parts.tail_energy += taps[i] * taps[i];
  if (parts.tail_begin >= taps.size() || parts.tail_energy == 0.0)
    throw Error(Errc::kEmptyTail,
                "no reverberant energy after the direct window");
  return parts;
}

std::vector<double> ConvolveTruncated(std::span<const double> x,
                                      std::span<const double> h) {
  std::vector<double> out(x.size(), 0.0);
  if (x.size() * h.size() <= (1u << 22)) {
    for (std::size_t n = 0; n < x.size(); ++n) {
      double acc = 0.0;
      std::size_t kmax = std::min(h.size() - 1, n);
      for (std::size_t k = 0; k <= kmax; ++k) acc += h[k] * x[n - k];
      out[n] = acc;
    }
    return out;
  }
  auto full = FftConvolve(x, h);
  std::copy(full.begin(), full.begin() + x.size(), out.begin());
  return out;
}

}  // namespace

std::string_view NoiseFamilyName(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kClean: return "clean";
    case NoiseFamily::kAmbient: return "ambient";
    case NoiseFamily::kWhite: return "white";
    case NoiseFamily::kReverb: return "reverb";
  }
  return "clean";
}

NoiseFamily ParseNoiseFamily(std::string_view name) {
  if (name == "clean") return NoiseFamily::kClean;
  if (name == "ambient") return NoiseFamily::kAmbient;
  if (name == "white") return NoiseFamily::kWhite;
  if (name == "reverb") return NoiseFamily::kReverb;
  throw Error(Errc::kInvalidArgument,
              "unknown noise family '" + std::string(name) + "'");
}

void Condition::Validate() const {
  if (family == NoiseFamily::kClean && level_db)
    throw Error(Errc::kInvalidArgument, "clean condition cannot carry a level");
  if (family != NoiseFamily::kClean && !level_db)
    throw Error(Errc::kInvalidArgument,
                std::string(NoiseFamilyName(family)) + " condition needs a level");
  if ((family == NoiseFamily::kAmbient || family == NoiseFamily::kReverb) &&
      !noise_source)
    throw Error(Errc::kInvalidArgument,
                std::string(NoiseFamilyName(family)) +
                    " condition needs a noise source");
  if (level_db && !std::isfinite(*level_db))
    throw Error(Errc::kInvalidArgument, "level must be finite");
}

std::string Condition::Label() const {
  std::string label(NoiseFamilyName(family));
  if (level_db) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "@%g", *level_db);
    label += buf;
  }
  return label;
}

RoomImpulseResponse::RoomImpulseResponse(std::vector<double> taps,
                                         int sample_rate)
    : taps_(std::move(taps)), sample_rate_(sample_rate), direct_index_(0) {
  if (sample_rate_ <= 0)
    throw Error(Errc::kInvalidArgument, "RIR sample rate must be positive");
  double best = 0.0;
  for (std::size_t i = 0; i < taps_.size(); ++i) {
    if (!std::isfinite(taps_[i]))
      throw Error(Errc::kInvalidArgument, "non-finite RIR tap");
    if (std::abs(taps_[i]) > best) {
      best = std::abs(taps_[i]);
      direct_index_ = i;
    }
  }
  if (best == 0.0)
    throw Error(Errc::kInvalidArgument, "RIR has no nonzero tap");
}

RoomImpulseResponse::RoomImpulseResponse(std::vector<double> taps,
                                         int sample_rate,
                                         std::size_t direct_index)
    : RoomImpulseResponse(std::move(taps), sample_rate) {
  if (direct_index >= taps_.size() || taps_[direct_index] == 0.0)
    throw Error(Errc::kInvalidArgument, "direct index must be a nonzero tap");
  direct_index_ = direct_index;
}

Waveform GenWhiteNoise(double duration, int rate, std::uint64_t seed) {
  if (!(duration > 0.0))
    throw Error(Errc::kInvalidArgument, "duration must be positive");
  if (rate <= 0) throw Error(Errc::kInvalidArgument, "rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  CounterRng rng(seed);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.Normal(i);
  const double rms = std::sqrt(MeanPower(x));
  if (rms > 0.0) {
    const double scale = 0.1 / rms;
    for (double &s : x) s *= scale;
  }
  return Waveform(std::move(x), rate);
}

Waveform GenSine(double freq, double duration, int rate, double amplitude,
                 double fade, double phase) {
  if (rate <= 0) throw Error(Errc::kInvalidArgument, "rate must be positive");
  if (!(freq > 0.0) || !(freq < rate / 2.0))
    throw Error(Errc::kFrequencyAboveNyquist,
                std::to_string(freq) + " Hz at " + std::to_string(rate) +
                    " Hz sampling");
  if (duration <= 0.0 || fade < 0.0 || 2.0 * fade > duration)
    throw Error(Errc::kInvalidArgument, "need 0 <= 2*fade <= duration");
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  const auto m = static_cast<std::size_t>(std::llround(fade * rate));
  const double w = 2.0 * std::numbers::pi * freq / rate;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double gain = amplitude;
    if (m > 0) {
      std::size_t edge = std::min(i, n - 1 - i);
      if (edge < m)
        gain *= 0.5 * (1.0 - std::cos(std::numbers::pi * edge / m));
    }
    x[i] = gain * std::sin(w * static_cast<double>(i) + phase);
  }
  return Waveform(std::move(x), rate);
}

MixResult MixAtSnrDetailed(const Waveform &speech, const Waveform &noise,
                           double snr_db) {
  RequireSameRate(speech.sample_rate(), noise.sample_rate());
  if (speech.empty() || noise.empty())
    throw Error(Errc::kSilentInput, "empty speech or noise");
  std::vector<double> fitted(speech.size());
  for (std::size_t i = 0; i < fitted.size(); ++i)
    fitted[i] = noise[i % noise.size()];
  const double speech_rms = Rms(speech);
  const double noise_rms = std::sqrt(MeanPower(fitted));
  if (speech_rms == 0.0 || noise_rms == 0.0)
    throw Error(Errc::kSilentInput, "SNR undefined for a silent input");
  const double gain = speech_rms / noise_rms * std::pow(10.0, -snr_db / 20.0);
  std::vector<double> mixed(speech.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    fitted[i] *= gain;
    mixed[i] = speech[i] + fitted[i];
  }
  return MixResult{Waveform(std::move(mixed), speech.sample_rate()),
                   Waveform(std::move(fitted), speech.sample_rate()), gain};
}

Waveform MixAtSnr(const Waveform &speech, const Waveform &noise,
                  double snr_db) {
  return MixAtSnrDetailed(speech, noise, snr_db).mixture;
}

double MeasureDrr(const RoomImpulseResponse &rir, double direct_window) {
  DrrParts parts = SplitRir(rir, direct_window);
  return 10.0 * std::log10(parts.direct_energy / parts.tail_energy);
}

RoomImpulseResponse RirAtDrr(const RoomImpulseResponse &rir, double drr_db,
                             double direct_window) {
  DrrParts parts = SplitRir(rir, direct_window);
  const double measured =
      10.0 * std::log10(parts.direct_energy / parts.tail_energy);
  const double beta = std::pow(10.0, (measured - drr_db) / 20.0);
  std::vector<double> taps = rir.taps();
  if (beta != 1.0) {
    for (std::size_t i = parts.tail_begin; i < taps.size(); ++i)
      taps[i] *= beta;
  }
  return RoomImpulseResponse(std::move(taps), rir.sample_rate(),
                             rir.direct_index());
}

Waveform ApplyReverbAtDrr(const Waveform &speech,
                          const RoomImpulseResponse &rir, double drr_db,
                          double direct_window, bool renormalize) {
  RequireSameRate(speech.sample_rate(), rir.sample_rate());
  RoomImpulseResponse modified = RirAtDrr(rir, drr_db, direct_window);
  std::vector<double> out = ConvolveTruncated(speech.samples(), modified.taps());
  if (renormalize && !speech.empty()) {
    const double in_rms = std::sqrt(MeanPower(speech.samples()));
    const double out_rms = std::sqrt(MeanPower(out));
    if (out_rms > 0.0) {
      const double scale = in_rms / out_rms;
      for (double &s : out) s *= scale;
    }
  }
  return Waveform(std::move(out), speech.sample_rate());
}

}  // namespace codec_probe
