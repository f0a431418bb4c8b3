// core/include/codec_probe/error.h

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

#ifndef CODEC_PROBE_ERROR_H_
#define CODEC_PROBE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace codec_probe {

/// Error classes raised across the toolkit. The harness records the class
/// name of a failed row, so names are part of the report format.
enum class Errc {
  kInvalidArgument,
  kMissingFile,
  kMalformedContainer,
  kUnsupportedEncoding,
  kMultichannelInput,
  kIoFailure,
  kEmptySignal,
  kRateMismatch,
  kEmptyOverlap,
  kFrequencyAboveNyquist,
  kSilentInput,
  kEmptyTail,
  kCodecCrashed,
  kTimeout,
  kMalformedOutput,
  kNonFiniteOutput,
  kSpawnFailure,
  kUnknownMode,
  kInsufficientData,
  kDegenerateCorpus,
  kStageOutOfRange,
  kModelMismatch,
  kEmptyReference,
  kMissingClass,
  kIdMismatch,
  kMalformedManifest,
  kMissingAudio,
  kConfigInvalid,
};

std::string_view ErrcName(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &message)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace codec_probe

#endif  // CODEC_PROBE_ERROR_H_
