// tools/smoke_synth.h

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

#ifndef CODEC_PROBE_TOOLS_SMOKE_SYNTH_H_
#define CODEC_PROBE_TOOLS_SMOKE_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "codec_probe/waveform.h"

namespace codec_probe {
namespace smoke {

/// Voiced/unvoiced babble: a glottal pulse train with drifting pitch through
/// three formant resonators, syllable-rate envelope, occasional fricative
/// bursts. Peak normalized to 0.5. Deterministic in seed.
Waveform SpeechLike(double duration, int rate, std::uint64_t seed);

/// Background clip: overlapping quiet talkers, 1/f noise and mains hum.
Waveform AmbientNoise(double duration, int rate, std::uint64_t seed);

/// Synthetic room response: a direct tap after a short delay, sparse early
/// reflections and an exponentially decaying diffuse tail (given RT60).
Waveform SyntheticRir(double rt60, int rate, std::uint64_t seed);

/// Writes utt00..utt{count-1}.wav, noise/ambient.wav, rir/room.wav and
/// manifest.csv under dir. Utterances are PCM-16.
void WriteCorpus(const std::filesystem::path &dir, int count, int rate,
                 std::uint64_t seed);

}  // namespace smoke
}  // namespace codec_probe

#endif  // CODEC_PROBE_TOOLS_SMOKE_SYNTH_H_
