// benchmarks/bench_signal.cc

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

#include <benchmark/benchmark.h>

#include "codec_probe/signal.h"
#include "smoke_synth.h"

namespace {

using namespace codec_probe;

void BM_Resample(benchmark::State &state) {
  const Waveform w = smoke::SpeechLike(1.0, 16000, 3);
  const int to = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Resample(w, to));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(w.size()));
}
BENCHMARK(BM_Resample)->Arg(8000)->Arg(24000)->Arg(44100)->Unit(benchmark::kMillisecond);

void BM_Align(benchmark::State &state) {
  const Waveform ref = smoke::SpeechLike(static_cast<double>(state.range(0)), 16000, 4);
  std::vector<double> shifted(ref.size(), 0.0);
  for (std::size_t i = 0; i + 123 < ref.size(); ++i) shifted[i + 123] = ref.data()[i];
  const Waveform test(shifted, 16000);
  for (auto _ : state) benchmark::DoNotOptimize(Align(ref, test, 0.1));
}
BENCHMARK(BM_Align)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
