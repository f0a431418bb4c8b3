// core/include/codec_probe/metrics.h

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

#ifndef CODEC_PROBE_METRICS_H_
#define CODEC_PROBE_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "codec_probe/waveform.h"

namespace codec_probe {

/// Log-mel spectrogram settings. fmax <= 0 means Nyquist.
struct MelConfig {
  int n_mels = 80;
  int fft_size = 1024;
  int hop = 256;
  double floor = 1e-5;
  double fmin = 0.0;
  double fmax = 0.0;

  void Validate() const;
};

/// Slaney-style mel filterbank (linear below 1 kHz, logarithmic above,
/// triangles area-normalized), n_mels x (fft_size/2 + 1), row-major.
std::vector<double> MelFilterbank(const MelConfig &cfg, int sample_rate);

/// log10(max(mel(|STFT|^2), floor)), frames x n_mels row-major. Periodic Hann
/// window, frames at multiples of hop, the last frame zero-padded; a signal
/// shorter than fft_size yields one frame.
std::vector<double> LogMelSpectrogram(const Waveform &w, const MelConfig &cfg,
                                      std::size_t *frames_out = nullptr);

/// Mean absolute difference of the log-mel spectrograms after truncating
/// both signals to the common length. Throws kRateMismatch, kEmptySignal.
double MelDistance(const Waveform &ref, const Waveform &test,
                   const MelConfig &cfg = {});

struct TranscriptPair {
  std::string utterance_id;
  std::vector<std::string> reference;
  std::vector<std::string> hypothesis;
};

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
};

/// Token-level minimum edit alignment with uniform costs. On equal-cost
/// paths the backtrace prefers substitution, then insertion, then deletion.
EditCounts AlignTokens(const std::vector<std::string> &reference,
                       const std::vector<std::string> &hypothesis);

struct WerResult {
  double wer = 0.0;  // percent
  EditCounts totals;
};

/// Corpus-level WER = 100 * (S + D + I) / sum |reference|.
/// Throws kEmptyReference.
WerResult ComputeWer(const std::vector<TranscriptPair> &pairs);

enum class TrialLabel { kGenuine, kImpostor };

struct ScoreRecord {
  std::string trial_id;
  double score = 0.0;
  TrialLabel label = TrialLabel::kGenuine;
};

/// Equal error rate in percent. Operating points are taken at every distinct
/// score t (accept when score >= t) plus the reject-all point; EER is where
/// the lower convex hull of (FRR, FAR) crosses FRR == FAR, linearly
/// interpolated between hull vertices. Invariant to strictly increasing
/// score transforms. Throws kMissingClass, kInvalidArgument (non-finite).
double ComputeEer(const std::vector<ScoreRecord> &scores);

using LabelList = std::vector<std::pair<std::string, std::string>>;

/// 100 * matching / total. Throws kIdMismatch unless both lists cover the
/// same ids exactly once.
double ComputeAccuracy(const LabelList &reference, const LabelList &hypothesis);

/// UTF-8 "id<TAB>text" lines; text is split on whitespace.
std::vector<std::pair<std::string, std::vector<std::string>>> ReadTranscripts(
    const std::filesystem::path &path);
/// Joins reference and hypothesis transcript files on utterance id.
std::vector<TranscriptPair> JoinTranscripts(
    const std::filesystem::path &reference,
    const std::filesystem::path &hypothesis);
/// CSV "trial_id,score,label" with label genuine|impostor; an optional
/// header row is skipped.
std::vector<ScoreRecord> ReadScores(const std::filesystem::path &path);
/// CSV "id,label"; optional header row skipped.
LabelList ReadLabels(const std::filesystem::path &path);

}  // namespace codec_probe

#endif  // CODEC_PROBE_METRICS_H_
