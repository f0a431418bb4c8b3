// tools/smoke_synth.cc

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

#include "smoke_synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <vector>

#include "codec_probe/error.h"
#include "codec_probe/rng.h"
#include "codec_probe/wav_io.h"

namespace codec_probe {
namespace smoke {

namespace {

constexpr double kPi = std::numbers::pi;

// Two-pole resonator, unit gain at its centre frequency (approximately).
class Resonator {
 public:
  void Set(double freq, double bandwidth, int rate) {
    const double r = std::exp(-kPi * bandwidth / rate);
    a1_ = 2.0 * r * std::cos(2.0 * kPi * freq / rate);
    a2_ = -r * r;
    gain_ = 1.0 - r;
  }
  double Step(double x) {
    double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a1_ = 0.0, a2_ = 0.0, gain_ = 1.0;
  double y1_ = 0.0, y2_ = 0.0;
};

// Formant targets (Hz) for a handful of vowel-ish sounds.
constexpr double kVowels[][3] = {
    {730, 1090, 2440}, {270, 2290, 3010}, {300, 870, 2240},
    {530, 1840, 2480}, {570, 840, 2410},  {440, 1020, 2240},
};

void PeakNormalize(std::vector<double> *x, double peak) {
  double m = 0.0;
  for (double v : *x) m = std::max(m, std::abs(v));
  if (m > 0.0)
    for (double &v : *x) v *= peak / m;
}

}  // namespace

Waveform SpeechLike(double duration, int rate, std::uint64_t seed) {
  CounterRng rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  std::vector<double> out(n, 0.0);

  const double f0_base = 90.0 + 120.0 * rng.NextUniform();
  const double syllable_rate = 3.0 + 2.5 * rng.NextUniform();
  const auto syllable_len = static_cast<std::size_t>(rate / syllable_rate);
  CounterRng noise(DeriveSeed(seed, "fricative"));

  Resonator formant[3];
  double phase = 0.0;
  std::size_t next_syllable = 0, syllable_end = 0;
  bool voiced = true;
  double target[3] = {500, 1500, 2500}, current[3] = {500, 1500, 2500};
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= next_syllable) {
      const auto &v = kVowels[rng.NextBelow(std::size(kVowels))];
      std::copy(std::begin(v), std::end(v), target);
      voiced = rng.NextUniform() > 0.2;
      syllable_end = i + syllable_len;
      next_syllable = i + syllable_len +
                      static_cast<std::size_t>(0.05 * rate * rng.NextUniform());
    }
    const double t = static_cast<double>(i) / rate;
    // Slow formant glides.
    for (int k = 0; k < 3; ++k) {
      current[k] += (target[k] - current[k]) * (30.0 / rate);
      formant[k].Set(current[k], 80.0 + 40.0 * k, rate);
    }
    double env = 0.0;
    if (i < syllable_end) {
      const double pos = static_cast<double>(syllable_end - i) / syllable_len;
      env = std::sin(kPi * pos);
    }
    double excitation;
    if (voiced) {
      const double f0 = f0_base * (1.0 + 0.08 * std::sin(2.0 * kPi * 0.7 * t) +
                                   0.03 * std::sin(2.0 * kPi * 2.3 * t));
      phase += f0 / rate;
      if (phase >= 1.0) phase -= 1.0;
      // Rosenberg-like pulse, open for 40% of the period.
      excitation = phase < 0.4 ? std::sin(kPi * phase / 0.4) : 0.0;
      excitation = excitation * excitation - 0.25;
    } else {
      excitation = 0.6 * noise.Normal(i);
    }
    double y = 0.0;
    for (int k = 0; k < 3; ++k) y += formant[k].Step(excitation) / (k + 1);
    out[i] = env * y;
  }
  // Soft onset and offset so the file boundaries stay quiet.
  const std::size_t ramp = std::min<std::size_t>(n / 2, rate / 100);
  for (std::size_t i = 0; i < ramp; ++i) {
    const double g = 0.5 - 0.5 * std::cos(kPi * i / ramp);
    out[i] *= g;
    out[n - 1 - i] *= g;
  }
  PeakNormalize(&out, 0.5);
  return Waveform(std::move(out), rate);
}

Waveform AmbientNoise(double duration, int rate, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  std::vector<double> out(n, 0.0);
  for (int talker = 0; talker < 4; ++talker) {
    Waveform w = SpeechLike(duration, rate,
                            DeriveSeed(seed, "talker" + std::to_string(talker)));
    for (std::size_t i = 0; i < n; ++i) out[i] += 0.25 * w[i];
  }
  // Pink-ish noise from a bank of leaky integrators (Voss-style approximation).
  CounterRng rng(DeriveSeed(seed, "pink"));
  double b[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rng.Normal(i);
    b[0] = 0.99765 * b[0] + w * 0.0990460;
    b[1] = 0.96300 * b[1] + w * 0.2965164;
    b[2] = 0.57000 * b[2] + w * 1.0526913;
    const double pink = b[0] + b[1] + b[2] + w * 0.1848;
    const double t = static_cast<double>(i) / rate;
    out[i] += 0.01 * pink + 0.004 * std::sin(2.0 * kPi * 50.0 * t) +
              0.002 * std::sin(2.0 * kPi * 150.0 * t);
  }
  PeakNormalize(&out, 0.3);
  return Waveform(std::move(out), rate);
}

Waveform SyntheticRir(double rt60, int rate, std::uint64_t seed) {
  CounterRng rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(rt60 * rate));
  const auto direct = static_cast<std::size_t>(0.004 * rate);
  std::vector<double> taps(n, 0.0);
  taps[direct] = 1.0;
  // Decay constant for a 60 dB drop over rt60.
  const double tau = rt60 / (3.0 * std::log(10.0));
  for (int r = 0; r < 6; ++r) {
    const auto at = direct + static_cast<std::size_t>(
                                 (0.003 + 0.02 * rng.NextUniform()) * rate);
    if (at < n)
      taps[at] += (rng.NextUniform() < 0.5 ? -1.0 : 1.0) *
                  (0.3 + 0.3 * rng.NextUniform());
  }
  CounterRng diffuse(DeriveSeed(seed, "diffuse"));
  const auto onset = direct + static_cast<std::size_t>(0.005 * rate);
  for (std::size_t i = onset; i < n; ++i) {
    const double t = static_cast<double>(i - direct) / rate;
    taps[i] += 0.2 * diffuse.Normal(i) * std::exp(-t / tau);
  }
  return Waveform(std::move(taps), rate);
}

void WriteCorpus(const std::filesystem::path &dir, int count, int rate,
                 std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "noise");
  fs::create_directories(dir / "rir");
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest)
    throw Error(Errc::kIoFailure, "cannot write " + (dir / "manifest.csv").string());
  manifest << "utterance_id,wav_path,transcript\n";
  CounterRng lengths(DeriveSeed(seed, "durations"));
  static const char *kWords[] = {"alpha", "bravo", "charlie", "delta",
                                 "echo",  "foxtrot", "golf", "hotel"};
  for (int i = 0; i < count; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "utt%02d", i);
    const double duration = 1.5 + 1.0 * lengths.NextUniform();
    Waveform w = SpeechLike(duration, rate, DeriveSeed(seed, id));
    WriteWav(w, dir / (std::string(id) + ".wav"), WavEncoding::kPcm16);
    std::string text;
    for (int k = 0; k < 3 + i % 3; ++k) {
      if (k) text += ' ';
      text += kWords[(i * 3 + k * 5) % 8];
    }
    manifest << id << ',' << id << ".wav," << text << '\n';
  }
  WriteWav(AmbientNoise(3.0, rate, DeriveSeed(seed, "ambient")),
           dir / "noise" / "ambient.wav", WavEncoding::kPcm16);
  WriteWav(SyntheticRir(0.4, rate, DeriveSeed(seed, "rir")),
           dir / "rir" / "room.wav", WavEncoding::kFloat32);
  manifest.close();
  if (!manifest) throw Error(Errc::kIoFailure, "failed writing manifest");
}

}  // namespace smoke
}  // namespace codec_probe
