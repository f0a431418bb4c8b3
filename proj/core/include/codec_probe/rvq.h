// core/include/codec_probe/rvq.h

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

#ifndef CODEC_PROBE_RVQ_H_
#define CODEC_PROBE_RVQ_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "codec_probe/codec.h"
#include "codec_probe/waveform.h"

namespace codec_probe {

/// Reference residual-vector-quantization codec.
///
/// The encoder is framing: each non-overlapping frame of `frame_size`
/// samples (times the analysis window, all ones) is a latent vector of
/// dimension d = frame_size, so the frame rate is sample_rate / frame_size.
/// K residual stages each hold C entries. The decoder sums the selected
/// entries per frame, divides by the window and concatenates frames.
class RvqModel {
 public:
  RvqModel(int sample_rate, int frame_size, int entries,
           std::vector<std::vector<double>> codebooks,
           std::vector<double> training_stats, std::uint64_t seed);

  int sample_rate() const { return sample_rate_; }
  int frame_size() const { return frame_size_; }
  int hop() const { return frame_size_; }
  int dimension() const { return frame_size_; }
  int stages() const { return static_cast<int>(codebooks_.size()); }
  int entries() const { return entries_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double> &window() const { return window_; }
  /// Mean per-frame residual energy after each stage, recorded at training.
  const std::vector<double> &training_stats() const { return training_stats_; }
  /// Row-major C x d matrix of stage s.
  std::span<const double> codebook(int stage) const { return codebooks_[stage]; }
  std::span<const double> entry(int stage, int index) const;
  /// FNV-1a hash of the serialized model; CodeSequences carry it.
  std::uint64_t id() const { return id_; }

  /// Versioned little-endian container: "RVQM", u32 version, u32 rate,
  /// u32 frame_size, u32 hop, u32 K, u32 C, u64 seed, f64 window[d],
  /// f64 codebooks[K][C][d], f64 training_stats[K].
  std::vector<unsigned char> Serialize() const;
  static RvqModel Deserialize(std::span<const unsigned char> bytes);
  /// Human-readable twin of the binary container.
  std::string ToJson() const;

  void Save(const std::filesystem::path &path) const;
  static RvqModel Load(const std::filesystem::path &path);

 private:
  int sample_rate_;
  int frame_size_;
  int entries_;
  std::vector<std::vector<double>> codebooks_;
  std::vector<double> window_;
  std::vector<double> training_stats_;
  std::uint64_t seed_;
  std::uint64_t id_ = 0;
};

struct CodeSequence {
  /// frame_count x stages_used, row-major.
  std::vector<std::uint32_t> indices;
  std::size_t frame_count = 0;
  int stages_used = 0;
  std::uint64_t model_id = 0;
  /// Input length before padding; decode trims to it.
  std::size_t signal_length = 0;

  std::uint32_t at(std::size_t frame, int stage) const {
    return indices[frame * static_cast<std::size_t>(stages_used) +
                   static_cast<std::size_t>(stage)];
  }
  friend bool operator==(const CodeSequence &, const CodeSequence &) = default;
};

struct RvqTrainOptions {
  int max_iterations = 50;
  double tolerance = 1e-4;
  /// Worker threads for the assignment step. Results do not depend on it.
  int threads = 1;
};

/// Trains K codebooks stage by stage with k-means (k-means++ seeding from
/// `seed`, Lloyd iterations until the relative centroid shift drops below
/// the tolerance, empty clusters re-seeded from the farthest point). Stages
/// after the first pin one entry at the zero vector, so quantizing a residual
/// never increases its energy.
/// Throws kInsufficientData (fewer than 10*C frames), kDegenerateCorpus,
/// kRateMismatch (mixed corpus rates), kInvalidArgument.
RvqModel TrainRvq(const std::vector<Waveform> &corpus, int frame_size,
                  int stages, int entries, std::uint64_t seed,
                  const RvqTrainOptions &options = {});

/// Greedy residual encoding through k stages; squared Euclidean distance,
/// ties to the lowest index. The tail is reflect-padded to a whole frame.
/// Throws kRateMismatch, kStageOutOfRange.
CodeSequence Encode(const RvqModel &model, const Waveform &w, int k);

/// Throws kModelMismatch.
Waveform Decode(const RvqModel &model, const CodeSequence &codes);

/// Energy of each frame's residual after k stages (index 0 = frame 0).
std::vector<double> FrameResidualEnergies(const RvqModel &model,
                                          const Waveform &w, int k);

/// Frames of w with the reflect padding used by Encode (row-major N x d).
std::vector<double> FrameSignal(std::span<const double> x, int frame_size);

/// R = f_N * k * log2(C) with f_N = sample_rate / frame_size. An upper bound:
/// no entropy coding is assumed.
double BitrateBps(int sample_rate, int frame_size, int k, int entries);
double BitrateFromFrameRate(double frame_rate, int k, int entries);
/// Throws kStageOutOfRange.
double Bitrate(const RvqModel &model, int k);

/// Catalog entry "rvq" with modes "k1".."kK".
CodecDescriptor RvqDescriptor(const RvqModel &model);
CodecPtr MakeRvqCodec(std::shared_ptr<const RvqModel> model);

}  // namespace codec_probe

#endif  // CODEC_PROBE_RVQ_H_
