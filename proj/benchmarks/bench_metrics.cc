// benchmarks/bench_metrics.cc

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

#include <cmath>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "codec_probe/metrics.h"
#include "smoke_synth.h"

namespace {

using namespace codec_probe;

void BM_MelDistance(benchmark::State &state) {
  const double seconds = static_cast<double>(state.range(0));
  Waveform a = smoke::SpeechLike(seconds, 16000, 1);
  Waveform b = smoke::SpeechLike(seconds, 16000, 2);
  const MelConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(MelDistance(a, b, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(a.size()));
}
BENCHMARK(BM_MelDistance)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Eer(benchmark::State &state) {
  std::vector<ScoreRecord> scores;
  for (int i = 0; i < state.range(0); ++i)
    scores.push_back({std::to_string(i), std::sin(i * 0.37) + (i % 2) * 0.5,
                      i % 2 ? TrialLabel::kGenuine : TrialLabel::kImpostor});
  for (auto _ : state) benchmark::DoNotOptimize(ComputeEer(scores));
}
BENCHMARK(BM_Eer)->Arg(1000)->Arg(100000);

}  // namespace
