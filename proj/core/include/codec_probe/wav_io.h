// core/include/codec_probe/wav_io.h

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

#ifndef CODEC_PROBE_WAV_IO_H_
#define CODEC_PROBE_WAV_IO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "codec_probe/waveform.h"

namespace codec_probe {

enum class WavEncoding { kPcm16, kPcm24, kFloat32 };

struct WavHeader {
  int sample_rate = 0;
  int channels = 0;
  WavEncoding encoding = WavEncoding::kPcm16;
  std::uint64_t frame_count = 0;
};

/// Decoded samples without the finiteness check of Waveform. Used where a
/// NaN in a file is a distinct error (codec output) rather than a bad file.
struct RawAudio {
  std::vector<double> samples;
  int sample_rate = 0;
};

/// Parses the RIFF header only. Throws kMissingFile, kMalformedContainer,
/// kUnsupportedEncoding or kMultichannelInput.
WavHeader ReadWavHeader(const std::filesystem::path &path);

RawAudio ReadWavRaw(const std::filesystem::path &path);

/// Reads a mono PCM-16, PCM-24 or IEEE float-32 file. Integer PCM is scaled
/// by 2^-(bits-1); float samples pass through. Non-finite float samples are
/// reported as kMalformedContainer.
Waveform ReadWav(const std::filesystem::path &path);

/// Writes pcm16 (round half away from zero, saturating) or float32. PCM-24
/// is read-only. Throws kIoFailure.
void WriteWav(const Waveform &w, const std::filesystem::path &path,
              WavEncoding encoding);

}  // namespace codec_probe

#endif  // CODEC_PROBE_WAV_IO_H_
