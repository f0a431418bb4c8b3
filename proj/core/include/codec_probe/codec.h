// core/include/codec_probe/codec.h

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

#ifndef CODEC_PROBE_CODEC_H_
#define CODEC_PROBE_CODEC_H_

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "codec_probe/waveform.h"

namespace codec_probe {

class RvqModel;

enum class CodecKind { kBuiltin, kExternal };

struct BitrateMode {
  std::string id;
  double bits_per_second = 0.0;
};

struct CodecDescriptor {
  std::string name;
  CodecKind kind = CodecKind::kBuiltin;
  int native_rate = 16000;
  std::vector<BitrateMode> bitrate_modes;
  /// External only. Placeholders {input}, {output} and {mode} are replaced
  /// before the command runs under /bin/sh -c.
  std::string command_template;
  double timeout_seconds = 600.0;

  /// nullptr when the mode is not declared.
  const BitrateMode *FindMode(std::string_view id) const;
};

/// A codec treated as a black-box waveform transform f(x).
class Codec {
 public:
  virtual ~Codec() = default;

  const CodecDescriptor &descriptor() const { return descriptor_; }

  /// Runs the codec on w (which must be at the native rate) in the given
  /// mode. Throws kRateMismatch, kUnknownMode, kNonFiniteOutput and whatever
  /// the implementation raises (kCodecCrashed, kTimeout, kMalformedOutput,
  /// kSpawnFailure for externals).
  Waveform Process(const Waveform &w, std::string_view mode) const;

 protected:
  explicit Codec(CodecDescriptor descriptor)
      : descriptor_(std::move(descriptor)) {}

 private:
  virtual std::vector<double> Run(const Waveform &w,
                                  const BitrateMode &mode) const = 0;

  CodecDescriptor descriptor_;
};

using CodecPtr = std::shared_ptr<const Codec>;

/// Mode id used by single-mode builtins.
inline constexpr std::string_view kDefaultMode = "default";

/// Descriptors for identity, mulaw-{4,6,8}, hardclip-{0.1,0.5}, gain-0.5,
/// movavg-2 and, when a model is supplied, rvq (modes k1..kK).
std::vector<CodecDescriptor> BuiltinCatalog(int native_rate = 16000,
                                            const RvqModel *rvq = nullptr);

/// Instantiates a builtin by catalog name. "rvq" requires a model and runs
/// at the model's rate. Throws kInvalidArgument for an unknown name.
CodecPtr MakeBuiltinCodec(std::string_view name, int native_rate = 16000,
                          std::shared_ptr<const RvqModel> rvq = nullptr);

/// mu-law companding quantizer with 2^bits - 1 levels (mu = 2^bits - 1).
/// Exposed for tests; the mulaw codec applies it samplewise.
double MulawRoundTrip(double x, int bits);

using LogSink = std::function<void(std::string_view)>;

/// Wraps a descriptor with a command template. Each call spawns one process.
/// Non-empty stderr of successful runs is forwarded to `log` when set.
CodecPtr MakeExternalCodec(CodecDescriptor descriptor, LogSink log = nullptr);

/// The subprocess round trip: writes a float-32 WAV, substitutes the
/// placeholders, runs the command with CODEC_PROBE_MODE set, and reads the
/// output WAV back. Temporary files are removed on every path. The exchange
/// directory is $CODEC_PROBE_TMPDIR or the system temp directory.
/// Returns raw samples (finiteness is checked by Codec::Process).
std::vector<double> InvokeExternal(const CodecDescriptor &descriptor,
                                   const Waveform &w, std::string_view mode,
                                   std::string *captured_stderr = nullptr);

/// Runs the codec twice on w and reports whether outputs are bit-identical.
bool IsRepeatable(const Codec &codec, const Waveform &w,
                  std::string_view mode);

}  // namespace codec_probe

#endif  // CODEC_PROBE_CODEC_H_
