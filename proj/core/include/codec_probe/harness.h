// core/include/codec_probe/harness.h

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

#ifndef CODEC_PROBE_HARNESS_H_
#define CODEC_PROBE_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codec_probe/analysis.h"
#include "codec_probe/codec.h"
#include "codec_probe/metrics.h"
#include "codec_probe/perturb.h"
#include "codec_probe/rvq.h"
#include "codec_probe/wav_io.h"

namespace codec_probe {

struct ManifestEntry {
  std::string utterance_id;
  std::filesystem::path wav_path;
  std::optional<std::string> transcript;
  WavHeader header;
};

/// Validated manifest; audio is read lazily.
class Dataset {
 public:
  explicit Dataset(std::vector<ManifestEntry> entries)
      : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  const std::vector<ManifestEntry> &entries() const { return entries_; }
  const ManifestEntry &at(std::size_t i) const { return entries_.at(i); }
  Waveform Load(std::size_t i) const;

 private:
  std::vector<ManifestEntry> entries_;
};

/// CSV "utterance_id,wav_path[,transcript]" (header row optional). Relative
/// paths resolve against the manifest's directory. Every file is checked at
/// header level. Throws kMalformedManifest, kMissingAudio.
Dataset LoadManifest(const std::filesystem::path &path);

struct RvqTrainSpec {
  int frame_size = 8;
  int stages = 4;
  int entries = 64;
  std::uint64_t seed = 0;
};

/// One codec entry of the experiment: a descriptor plus the modes to run.
/// For the builtin "rvq", either a model file or training settings.
struct CodecSpec {
  CodecDescriptor descriptor;
  std::vector<std::string> modes;
  std::optional<std::filesystem::path> rvq_model;
  std::optional<RvqTrainSpec> rvq_train;
};

/// Externally produced transcripts/scores/labels for one grid cell.
struct ExternalScores {
  std::string codec;
  std::string mode;
  std::string condition;  // Condition::Label(), e.g. "white@-5"
  std::optional<std::filesystem::path> reference_transcripts;
  std::optional<std::filesystem::path> hypothesis_transcripts;
  std::optional<std::filesystem::path> scores;
  std::optional<std::filesystem::path> reference_labels;
  std::optional<std::filesystem::path> hypothesis_labels;
};

struct LinearitySettings {
  std::vector<GainLevel> gains = DefaultGainLadder();
  std::size_t pairs = 0;       // 0: floor(utterances / 2)
  std::size_t utterances = 0;  // 0: all
};

struct FreqRespSettings {
  int points = 64;
  double fmin = 20.0;
  std::vector<double> freqs;  // overrides points/fmin when non-empty
  std::vector<double> amplitudes = {1.0, 0.5, 0.1};
  ProbeSettings probe;
};

struct ExperimentConfig {
  std::filesystem::path dataset_manifest;
  std::vector<CodecSpec> codecs;
  std::vector<Condition> conditions;
  int metric_rate = 16000;
  MelConfig mel;
  double align_max_lag = 0.1;
  double direct_window = kDefaultDirectWindow;
  std::uint64_t seed = 0;
  int parallelism = 1;
  int max_external_jobs = 2;
  std::size_t subset = 0;  // 0: whole manifest
  bool check_repeatability = true;
  std::vector<ExternalScores> external_scores;
  LinearitySettings linearity;
  FreqRespSettings freqresp;

  /// Throws kConfigInvalid.
  void Validate() const;
};

/// Parses a JSON document (already loaded) against the config schema.
/// Relative paths resolve against base_dir. Throws kConfigInvalid.
ExperimentConfig ParseConfig(const nlohmann::json &doc,
                             const std::filesystem::path &base_dir);

/// Reads .json or .toml (chosen by extension) into one JSON document.
/// Throws kConfigInvalid.
nlohmann::json ReadConfigDocument(const std::filesystem::path &path);

/// ReadConfigDocument + ParseConfig with the file's directory as base.
ExperimentConfig LoadConfig(const std::filesystem::path &path);

/// Fully resolved config, embedded in every report for provenance.
nlohmann::json ConfigToJson(const ExperimentConfig &config);

enum class RowStatus { kOk, kCodecError, kSkipped };
std::string_view RowStatusName(RowStatus s);

inline constexpr std::string_view kOracleCodec = "oracle";
inline constexpr std::string_view kMelMetric = "mel_distance";
inline constexpr std::string_view kCorpusUtterance = "*";

struct MetricReport {
  std::string utterance_id;
  std::string codec;
  std::string mode;
  Condition condition;
  std::map<std::string, double> metrics;
  RowStatus status = RowStatus::kOk;
  std::string error_class;
  std::string error_message;
};

struct GridResult {
  std::vector<MetricReport> rows;  // sorted
  std::vector<std::string> nondeterministic_codecs;
};

struct LinearityOutcome {
  LinearityReport report;
  double bitrate_bps = 0.0;
  RowStatus status = RowStatus::kOk;
  std::string error_class;
  std::string error_message;
};

struct FreqRespOutcome {
  FrequencyResponseCurve curve;
  RowStatus status = RowStatus::kOk;
  std::string error_class;
  std::string error_message;
};

/// A codec spec made runnable (RVQ models loaded or trained).
struct LoadedCodec {
  CodecPtr codec;
  std::vector<std::string> modes;
};

std::vector<LoadedCodec> InstantiateCodecs(const ExperimentConfig &config,
                                           const Dataset &dataset,
                                           LogSink log = nullptr);

/// Seeded subset selection (config.subset), in manifest order.
std::vector<std::size_t> SelectUtterances(const Dataset &dataset,
                                          std::size_t count,
                                          std::uint64_t seed);

/// The degraded input for one utterance under one condition. `assets`
/// caches noise clips and RIRs by path.
Waveform Degrade(const Waveform &clean, const std::string &utterance_id,
                 const Condition &condition, double direct_window,
                 std::map<std::string, Waveform> *assets);

/// Condition x codec x mode grid with an Oracle row per (utterance,
/// condition). Codec outputs and the Oracle signal are scored against the
/// clean reference at metric_rate after alignment. Per-row failures are
/// recorded, never thrown. Throws kConfigInvalid on a bad config.
GridResult RunGrid(const ExperimentConfig &config, LogSink log = nullptr);

std::vector<LinearityOutcome> RunLinearity(const ExperimentConfig &config,
                                           LogSink log = nullptr);

std::vector<FreqRespOutcome> RunFrequencyResponse(
    const ExperimentConfig &config, LogSink log = nullptr);

struct ReportSet {
  GridResult grid;
  std::vector<LinearityOutcome> linearity;
  std::vector<FreqRespOutcome> freqresp;
};

struct AggregateKey {
  std::string codec;
  std::string mode;
  std::string condition;
  std::string metric;
  auto operator<=>(const AggregateKey &) const = default;
};

struct AggregateValue {
  double mean = 0.0;
  std::size_t count = 0;
};

/// Means of ok rows keyed by (codec, mode, condition, metric), summed in
/// sorted row order.
std::map<AggregateKey, AggregateValue> Aggregate(
    const std::vector<MetricReport> &rows);

enum class ReportFormat { kCsv, kJson };

/// grid.csv, linearity.csv, freqresp.csv and plot-ready summaries (csv);
/// report.json with the resolved config and aggregate tables (json).
/// Throws kIoFailure.
void EmitReports(const ExperimentConfig &config, const ReportSet &reports,
                 const std::filesystem::path &out_dir,
                 const std::set<ReportFormat> &formats = {ReportFormat::kCsv,
                                                          ReportFormat::kJson});

/// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);

}  // namespace codec_probe

#endif  // CODEC_PROBE_HARNESS_H_
