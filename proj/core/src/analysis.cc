// core/src/analysis.cc

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

#include "codec_probe/analysis.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "codec_probe/error.h"
#include "codec_probe/perturb.h"
#include "codec_probe/signal.h"

namespace codec_probe {

namespace {

double Percentile(const std::vector<double> &sorted, double p) {
  if (sorted.empty()) return 0.0;
  double pos = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double PeakAbs(const Waveform &w) {
  double peak = 0.0;
  for (double s : w.samples()) peak = std::max(peak, std::abs(s));
  return peak;
}

double AlignedMelDistance(const Waveform &a, const Waveform &b,
                          const MelConfig &cfg) {
  AlignResult aligned = Align(a, b, kProbeAlignSeconds);
  return MelDistance(aligned.ref, aligned.test, cfg);
}

}  // namespace

double GainLevel::alpha() const { return std::pow(10.0, gain_db / 20.0); }

std::vector<GainLevel> DefaultGainLadder() {
  return {{-40.0}, {-20.0}, {-12.0}, {-6.0}, {0.0}, {6.0}, {12.0}};
}

DistanceSummary Summarize(std::vector<double> values) {
  DistanceSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  s.p5 = Percentile(values, 0.05);
  s.p95 = Percentile(values, 0.95);
  return s;
}

LinearityReport AdditivityProbe(
    const Codec &codec, const std::string &mode,
    const std::vector<std::pair<Waveform, Waveform>> &pairs,
    const MelConfig &cfg) {
  LinearityReport report;
  report.codec = codec.descriptor().name;
  report.mode = mode;
  for (const auto &[x_in, y_in] : pairs) {
    if (x_in.sample_rate() != y_in.sample_rate())
      throw Error(Errc::kRateMismatch, "additivity pair rates differ");
    const std::size_t n = std::min(x_in.size(), y_in.size());
    Waveform x = x_in.Slice(0, n);
    Waveform y = y_in.Slice(0, n);
    Waveform sum = Add(x, y);
    const double peak = PeakAbs(sum);
    if (peak > 1.0) {
      const double gamma = 0.99 / peak;
      x = x.Scaled(gamma);
      y = y.Scaled(gamma);
      sum = Add(x, y);
    }
    Waveform joint = codec.Process(sum, mode);
    Waveform separate = Add(codec.Process(x, mode), codec.Process(y, mode));
    report.additivity_per_pair.push_back(
        AlignedMelDistance(joint, separate, cfg));
  }
  report.additivity = Summarize(report.additivity_per_pair);
  report.pair_count = pairs.size();
  return report;
}

LinearityReport HomogeneityProbe(const Codec &codec, const std::string &mode,
                                 const std::vector<Waveform> &utterances,
                                 const std::vector<GainLevel> &gains,
                                 const MelConfig &cfg) {
  LinearityReport report;
  report.codec = codec.descriptor().name;
  report.mode = mode;
  report.utterance_count = utterances.size();
  std::vector<std::vector<double>> per_gain(gains.size());
  for (const auto &x : utterances) {
    const Waveform fx = codec.Process(x, mode);
    for (std::size_t g = 0; g < gains.size(); ++g) {
      const double alpha = gains[g].alpha();
      Waveform scaled_in = codec.Process(x.Scaled(alpha), mode);
      Waveform scaled_out = fx.Scaled(alpha);
      per_gain[g].push_back(AlignedMelDistance(scaled_in, scaled_out, cfg));
    }
  }
  for (std::size_t g = 0; g < gains.size(); ++g)
    report.homogeneity.push_back({gains[g], Summarize(per_gain[g])});
  return report;
}

double GoertzelMagnitude(const Waveform &w, double freq) {
  const double rate = w.sample_rate();
  if (!(freq > 0.0) || !(freq < rate / 2.0))
    throw Error(Errc::kFrequencyAboveNyquist,
                std::to_string(freq) + " Hz at " + std::to_string(rate) + " Hz");
  const double omega = 2.0 * std::numbers::pi * freq / rate;
  const double coeff = 2.0 * std::cos(omega);
  double s1 = 0.0, s2 = 0.0;
  for (double x : w.samples()) {
    double s0 = x + coeff * s1 - s2;
    s2 = s1;
    s1 = s0;
  }
  double power = s1 * s1 + s2 * s2 - coeff * s1 * s2;
  return std::sqrt(std::max(power, 0.0));
}

std::vector<double> DefaultProbeFrequencies(int rate, int count, double fmin) {
  const double fmax = 0.45 * rate;
  std::vector<double> out(count);
  if (count == 1) return {fmin};
  const double ratio = std::log(fmax / fmin);
  for (int i = 0; i < count; ++i)
    out[i] = fmin * std::exp(ratio * i / (count - 1));
  return out;
}

FrequencyResponseCurve FrequencyResponse(const Codec &codec,
                                         const std::string &mode,
                                         const std::vector<double> &freqs,
                                         const ProbeSettings &probe) {
  const int rate = codec.descriptor().native_rate;
  FrequencyResponseCurve curve;
  curve.codec = codec.descriptor().name;
  curve.mode = mode;
  curve.probe_amplitude = probe.amplitude;
  curve.probe_duration = probe.duration;
  double prev = 0.0;
  for (double f : freqs) {
    if (!(f > prev))
      throw Error(Errc::kInvalidArgument, "probe frequencies must increase");
    prev = f;
    if (!(f < rate / 2.0))
      throw Error(Errc::kFrequencyAboveNyquist,
                  std::to_string(f) + " Hz for a " + std::to_string(rate) +
                      " Hz codec");
    Waveform input =
        GenSine(f, probe.duration, rate, probe.amplitude, probe.fade, probe.phase);
    Waveform output = codec.Process(input, mode);
    AlignResult aligned = Align(input, output, kProbeAlignSeconds);
    const auto edge = static_cast<std::size_t>(std::llround(probe.discard * rate));
    Waveform in_c = aligned.ref, out_c = aligned.test;
    if (aligned.ref.size() > 2 * edge + 1) {
      std::size_t keep = aligned.ref.size() - 2 * edge;
      in_c = aligned.ref.Slice(edge, keep);
      out_c = aligned.test.Slice(edge, keep);
    }
    double g_in = GoertzelMagnitude(in_c, f);
    double g_out = GoertzelMagnitude(out_c, f);
    double gain_db = g_out < 1e-9 || g_in <= 0.0
                         ? kSilentGainDb
                         : 20.0 * std::log10(g_out / g_in);
    curve.points.emplace_back(f, gain_db);
  }
  return curve;
}

}  // namespace codec_probe
