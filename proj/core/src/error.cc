// core/src/error.cc

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

#include "codec_probe/error.h"

namespace codec_probe {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kMissingFile: return "MissingFile";
    case Errc::kMalformedContainer: return "MalformedContainer";
    case Errc::kUnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::kMultichannelInput: return "MultichannelInput";
    case Errc::kIoFailure: return "IoFailure";
    case Errc::kEmptySignal: return "EmptySignal";
    case Errc::kRateMismatch: return "RateMismatch";
    case Errc::kEmptyOverlap: return "EmptyOverlap";
    case Errc::kFrequencyAboveNyquist: return "FrequencyAboveNyquist";
    case Errc::kSilentInput: return "SilentInput";
    case Errc::kEmptyTail: return "EmptyTail";
    case Errc::kCodecCrashed: return "CodecCrashed";
    case Errc::kTimeout: return "Timeout";
    case Errc::kMalformedOutput: return "MalformedOutput";
    case Errc::kNonFiniteOutput: return "NonFiniteOutput";
    case Errc::kSpawnFailure: return "SpawnFailure";
    case Errc::kUnknownMode: return "UnknownMode";
    case Errc::kInsufficientData: return "InsufficientData";
    case Errc::kDegenerateCorpus: return "DegenerateCorpus";
    case Errc::kStageOutOfRange: return "StageOutOfRange";
    case Errc::kModelMismatch: return "ModelMismatch";
    case Errc::kEmptyReference: return "EmptyReference";
    case Errc::kMissingClass: return "MissingClass";
    case Errc::kIdMismatch: return "IdMismatch";
    case Errc::kMalformedManifest: return "MalformedManifest";
    case Errc::kMissingAudio: return "MissingAudio";
    case Errc::kConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace codec_probe
