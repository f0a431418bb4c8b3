// benchmarks/bench_rvq.cc

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

#include "codec_probe/rvq.h"
#include "smoke_synth.h"

namespace {

using namespace codec_probe;

const RvqModel &Model() {
  static const RvqModel model = [] {
    std::vector<Waveform> corpus;
    for (int i = 0; i < 4; ++i) corpus.push_back(smoke::SpeechLike(2.0, 16000, 10 + i));
    return TrainRvq(corpus, 8, 8, 64, 7);
  }();
  return model;
}

void BM_RvqEncode(benchmark::State &state) {
  const Waveform w = smoke::SpeechLike(1.0, 16000, 99);
  const int k = static_cast<int>(state.range(0));
  const RvqModel &model = Model();
  for (auto _ : state) benchmark::DoNotOptimize(Encode(model, w, k));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(w.size()));
}
BENCHMARK(BM_RvqEncode)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_RvqDecode(benchmark::State &state) {
  const CodeSequence codes = Encode(Model(), smoke::SpeechLike(1.0, 16000, 99), 8);
  for (auto _ : state) benchmark::DoNotOptimize(Decode(Model(), codes));
}
BENCHMARK(BM_RvqDecode);

void BM_RvqTrain(benchmark::State &state) {
  std::vector<Waveform> corpus{smoke::SpeechLike(2.0, 16000, 5)};
  for (auto _ : state) benchmark::DoNotOptimize(TrainRvq(corpus, 8, 2, 32, 1));
}
BENCHMARK(BM_RvqTrain)->Unit(benchmark::kMillisecond);

}  // namespace
