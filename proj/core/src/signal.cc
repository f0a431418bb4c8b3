// core/src/signal.cc

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

#include "codec_probe/signal.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "codec_probe/error.h"
#include "codec_probe/fft.h"

namespace codec_probe {

namespace {

constexpr double kKaiserBeta = 8.6;
constexpr double kCutoffFraction = 0.45;
constexpr double kHalfTaps = 32.0;

double Sinc(double z) {
  if (z == 0.0) return 1.0;
  double pz = std::numbers::pi * z;
  return std::sin(pz) / pz;
}

}  // namespace

Waveform Resample(const Waveform &w, int target_rate) {
  if (target_rate <= 0)
    throw Error(Errc::kInvalidArgument, "target rate must be positive");
  const int source_rate = w.sample_rate();
  if (target_rate == source_rate) return w;

  const std::int64_t len = static_cast<std::int64_t>(w.size());
  const std::int64_t out_len =
      (2 * len * target_rate + source_rate) / (2 * source_rate);
  const double lower = std::min(source_rate, target_rate);
  const double cutoff = kCutoffFraction * lower / source_rate;  // cycles/input
  const double half_width = kHalfTaps * source_rate / lower;    // input samples
  const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);

  // Output n sits at input position n * up / down = base + phase / up, so the
  // kernel depends only on the phase.
  const std::int64_t g = std::gcd(source_rate, target_rate);
  const std::int64_t up = target_rate / g, down = source_rate / g;
  struct Kernel {
    std::int64_t first = 0;  // offset of taps[0] from base
    std::vector<double> taps;
  };
  auto make_kernel = [&](std::int64_t phase) {
    const double frac = static_cast<double>(phase) / static_cast<double>(up);
    Kernel k;
    k.first = static_cast<std::int64_t>(std::ceil(frac - half_width));
    const auto last = static_cast<std::int64_t>(std::floor(frac + half_width));
    for (std::int64_t j = k.first; j <= last; ++j) {
      const double u = frac - static_cast<double>(j);
      const double t = u / half_width;
      const double win =
          std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - t * t))) /
          i0_beta;
      k.taps.push_back(Sinc(2.0 * cutoff * u) * win);
    }
    return k;
  };
  const auto span = static_cast<std::int64_t>(2.0 * half_width) + 2;
  const bool tabulate = up * span <= (std::int64_t{1} << 22);
  std::vector<Kernel> table;
  if (tabulate) {
    table.reserve(static_cast<std::size_t>(up));
    for (std::int64_t p = 0; p < up; ++p) table.push_back(make_kernel(p));
  }

  std::vector<double> out(static_cast<std::size_t>(out_len), 0.0);
  Kernel scratch;
  for (std::int64_t n = 0; n < out_len; ++n) {
    const std::int64_t base = n * down / up, phase = n * down % up;
    if (!tabulate) scratch = make_kernel(phase);
    const Kernel &k = tabulate ? table[static_cast<std::size_t>(phase)] : scratch;
    const std::int64_t j0 = std::max<std::int64_t>(base + k.first, 0);
    const std::int64_t j1 = std::min<std::int64_t>(
        base + k.first + static_cast<std::int64_t>(k.taps.size()), len);
    double acc = 0.0, norm = 0.0;
    for (std::int64_t j = j0; j < j1; ++j) {
      const double h = k.taps[static_cast<std::size_t>(j - base - k.first)];
      acc += h * w[static_cast<std::size_t>(j)];
      norm += h;
    }
    out[static_cast<std::size_t>(n)] = norm != 0.0 ? acc / norm : 0.0;
  }
  return Waveform(std::move(out), target_rate);
}

double MeanPower(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double s : x) acc += s * s;
  return acc / static_cast<double>(x.size());
}

double Rms(const Waveform &w) {
  if (w.empty()) throw Error(Errc::kEmptySignal, "rms of empty signal");
  return std::sqrt(MeanPower(w.samples()));
}

AlignResult Align(const Waveform &ref, const Waveform &test, double max_lag) {
  if (ref.sample_rate() != test.sample_rate())
    throw Error(Errc::kRateMismatch,
                std::to_string(ref.sample_rate()) + " vs " +
                    std::to_string(test.sample_rate()));
  if (max_lag < 0.0)
    throw Error(Errc::kInvalidArgument, "max_lag must be non-negative");
  if (ref.empty() || test.empty())
    throw Error(Errc::kEmptyOverlap, "cannot align an empty signal");

  const auto lr = static_cast<std::int64_t>(ref.size());
  const auto lt = static_cast<std::int64_t>(test.size());
  const auto lag_limit =
      static_cast<std::int64_t>(std::llround(max_lag * ref.sample_rate()));
  const std::int64_t min_lag = std::max(-lag_limit, -(lr - 1));
  const std::int64_t max_lag_samples = std::min(lag_limit, lt - 1);

  std::int64_t best_lag = 0;
  if (max_lag_samples > min_lag) {
    RealFft fft(NextPow2(static_cast<std::size_t>(lr + lt)));
    auto fr = fft.Forward(ref.samples());
    auto ftest = fft.Forward(test.samples());
    for (std::size_t k = 0; k < fr.size(); ++k)
      fr[k] = std::conj(fr[k]) * ftest[k];
    const auto corr = fft.Inverse(fr);
    const auto n = static_cast<std::int64_t>(fft.size());
    auto at = [&](std::int64_t lag) {
      return corr[static_cast<std::size_t>(lag >= 0 ? lag : n + lag)];
    };

    double peak = -std::numeric_limits<double>::infinity();
    for (std::int64_t lag = min_lag; lag <= max_lag_samples; ++lag)
      peak = std::max(peak, at(lag));
    // Global energy normalization is a constant factor, so ranking the raw
    // correlation is equivalent; it only matters for the tie tolerance.
    const double energy = std::sqrt(MeanPower(ref.samples()) * lr *
                                    MeanPower(test.samples()) * lt);
    const double tol = 1e-9 * std::max(energy, 1e-300);
    std::vector<std::int64_t> candidates;
    for (std::int64_t lag = min_lag; lag <= max_lag_samples; ++lag) {
      if (at(lag) >= peak - tol) candidates.push_back(lag);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](std::int64_t a, std::int64_t b) {
                auto aa = std::abs(a), ab = std::abs(b);
                return aa != ab ? aa < ab : a < b;
              });
    if (candidates.size() > 16) candidates.resize(16);

    double best_exact = -std::numeric_limits<double>::infinity();
    for (std::int64_t lag : candidates) {
      double acc = 0.0;
      std::int64_t begin = std::max<std::int64_t>(0, -lag);
      std::int64_t end = std::min(lr, lt - lag);
      for (std::int64_t i = begin; i < end; ++i)
        acc += ref[static_cast<std::size_t>(i)] *
               test[static_cast<std::size_t>(i + lag)];
      // Candidates are ordered by |lag|, so strict improvement keeps the
      // smallest shift on exact ties.
      if (acc > best_exact) {
        best_exact = acc;
        best_lag = lag;
      }
    }
  }

  std::int64_t ref_begin = best_lag >= 0 ? 0 : -best_lag;
  std::int64_t test_begin = best_lag >= 0 ? best_lag : 0;
  std::int64_t common = std::min(lr - ref_begin, lt - test_begin);
  if (common <= 0)
    throw Error(Errc::kEmptyOverlap,
                "lag " + std::to_string(best_lag) + " leaves no overlap");
  return AlignResult{
      ref.Slice(static_cast<std::size_t>(ref_begin),
                static_cast<std::size_t>(common)),
      test.Slice(static_cast<std::size_t>(test_begin),
                 static_cast<std::size_t>(common)),
      best_lag};
}

}  // namespace codec_probe
