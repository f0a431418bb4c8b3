// tools/main.cc

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

// codec-probe command line: experiment runs plus small utilities.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "codec_probe/error.h"
#include "codec_probe/harness.h"
#include "codec_probe/rvq.h"
#include "codec_probe/signal.h"
#include "codec_probe/wav_io.h"
#include "smoke_synth.h"

namespace fs = std::filesystem;
using namespace codec_probe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfra = 1;
constexpr int kExitRowErrors = 2;

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::vector<std::string> formats = {"csv", "json"};
  bool quiet = false;
};

void AddRunOptions(CLI::App *cmd, RunOptions *opt) {
  cmd->add_option("--config", opt->config, "experiment config (.toml or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt->out, "output directory")->required();
  cmd->add_option("--seed", opt->seed, "override the config seed");
  cmd->add_option("--jobs", opt->jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", opt->formats, "report formats")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--quiet", opt->quiet, "no progress messages");
}

ExperimentConfig ResolveConfig(const RunOptions &opt) {
  nlohmann::json doc = ReadConfigDocument(opt.config);
  if (opt.seed) doc["seed"] = *opt.seed;
  if (opt.jobs) doc["parallelism"] = *opt.jobs;
  return ParseConfig(doc, fs::absolute(opt.config).parent_path());
}

int Run(const std::string &what, const RunOptions &opt) {
  const ExperimentConfig config = ResolveConfig(opt);
  LogSink log;
  if (!opt.quiet)
    log = [](std::string_view msg) { std::cerr << "codec-probe: " << msg << '\n'; };

  ReportSet reports;
  if (what == "grid" || what == "report") reports.grid = RunGrid(config, log);
  if (what == "linearity" || what == "report")
    reports.linearity = RunLinearity(config, log);
  if (what == "freqresp" || what == "report")
    reports.freqresp = RunFrequencyResponse(config, log);

  std::set<ReportFormat> formats;
  for (const auto &f : opt.formats)
    formats.insert(f == "csv" ? ReportFormat::kCsv : ReportFormat::kJson);
  EmitReports(config, reports, opt.out, formats);

  std::size_t failed = 0, total = 0;
  for (const auto &r : reports.grid.rows) {
    ++total;
    if (r.status != RowStatus::kOk) ++failed;
  }
  for (const auto &o : reports.linearity) {
    ++total;
    if (o.status != RowStatus::kOk) ++failed;
  }
  for (const auto &o : reports.freqresp) {
    ++total;
    if (o.status != RowStatus::kOk) ++failed;
  }
  if (log)
    log(std::to_string(total - failed) + "/" + std::to_string(total) +
        " rows ok, reports in " + opt.out);
  return failed == 0 ? kExitOk : kExitRowErrors;
}

// Runs one builtin as a subprocess codec: codec --name X --input a --output b.
int RunCodec(const std::string &name, const std::string &input,
             const std::string &output, std::string mode,
             const std::string &model) {
  if (mode.empty()) {
    const char *env = std::getenv("CODEC_PROBE_MODE");
    mode = env ? env : std::string(kDefaultMode);
  }
  Waveform in = ReadWav(input);
  std::shared_ptr<const RvqModel> rvq;
  if (!model.empty()) rvq = std::make_shared<RvqModel>(RvqModel::Load(model));
  const int rate = rvq ? rvq->sample_rate() : in.sample_rate();
  CodecPtr codec = MakeBuiltinCodec(name, rate, rvq);
  Waveform out = codec->Process(Resample(in, rate), mode);
  WriteWav(Resample(out, in.sample_rate()), output, WavEncoding::kFloat32);
  return kExitOk;
}

int TrainModel(const std::string &manifest, int frame_size, int stages,
               int entries, std::uint64_t seed, int rate, const std::string &out,
               bool json) {
  Dataset dataset = LoadManifest(manifest);
  std::vector<Waveform> corpus;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    corpus.push_back(Resample(dataset.Load(i), rate));
  RvqModel model = TrainRvq(corpus, frame_size, stages, entries, seed);
  model.Save(out);
  if (json) {
    std::ofstream js(out + ".json");
    js << model.ToJson() << '\n';
  }
  std::cerr << "codec-probe: trained K=" << stages << " C=" << entries
            << " d=" << frame_size << " -> " << out << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Black-box probing of speech codecs", "codec-probe"};
  app.require_subcommand(1);

  RunOptions run;
  for (const char *name : {"grid", "linearity", "freqresp", "report"}) {
    std::string help = std::string(name) == "report"
                           ? "grid, linearity and frequency response together"
                           : std::string("run the ") + name + " experiment";
    AddRunOptions(app.add_subcommand(name, help), &run);
  }

  std::string codec_name, input, output, mode, model;
  auto *codec = app.add_subcommand("codec", "run a builtin codec on one WAV file");
  codec->add_option("--name", codec_name, "builtin codec name")->required();
  codec->add_option("--input", input)->required()->check(CLI::ExistingFile);
  codec->add_option("--output", output)->required();
  codec->add_option("--mode", mode, "defaults to $CODEC_PROBE_MODE");
  codec->add_option("--model", model, "RVQ model file (rvq only)");

  std::string manifest, model_out;
  int frame_size = 8, stages = 4, entries = 64, rate = 16000;
  std::uint64_t train_seed = 0;
  bool with_json = false;
  auto *train = app.add_subcommand("train-rvq", "train an RVQ model on a manifest");
  train->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  train->add_option("--frame-size", frame_size)->check(CLI::PositiveNumber);
  train->add_option("--stages", stages)->check(CLI::PositiveNumber);
  train->add_option("--entries", entries)->check(CLI::Range(2, 1 << 20));
  train->add_option("--seed", train_seed);
  train->add_option("--rate", rate)->check(CLI::PositiveNumber);
  train->add_option("--out", model_out)->required();
  train->add_flag("--json", with_json, "also write a JSON twin");

  std::string smoke_dir;
  int smoke_count = 10;
  std::uint64_t smoke_seed = 2024;
  auto *smoke = app.add_subcommand("mksmoke", "generate the synthetic smoke corpus");
  smoke->add_option("--out", smoke_dir)->required();
  smoke->add_option("--count", smoke_count)->check(CLI::PositiveNumber);
  smoke->add_option("--seed", smoke_seed);
  smoke->add_option("--rate", rate)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInfra;
  }

  try {
    auto *sub = app.get_subcommands().front();
    const std::string what = sub->get_name();
    if (what == "codec") return RunCodec(codec_name, input, output, mode, model);
    if (what == "train-rvq")
      return TrainModel(manifest, frame_size, stages, entries, train_seed, rate,
                        model_out, with_json);
    if (what == "mksmoke") {
      smoke::WriteCorpus(smoke_dir, smoke_count, rate, smoke_seed);
      return kExitOk;
    }
    return Run(what, run);
  } catch (const std::exception &e) {
    std::cerr << "codec-probe: " << e.what() << '\n';
    return kExitInfra;
  }
}
