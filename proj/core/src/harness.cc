// core/src/harness.cc

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

#include "codec_probe/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <semaphore>
#include <sstream>
#include <thread>
#include <tuple>

#include "codec_probe/error.h"
#include "codec_probe/rng.h"
#include "codec_probe/signal.h"
#include "toml.hpp"

namespace codec_probe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kOracleMode = "-";

[[noreturn]] void Invalid(const std::string &msg) {
  throw Error(Errc::kConfigInvalid, msg);
}

// Splits one CSV record; double quotes escape commas and quotes.
std::vector<std::string> SplitCsv(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string Trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && ws(s[b])) ++b;
  return s.substr(b);
}

fs::path Resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

// Strict object reader: every key must be consumed, so typos surface.
class Fields {
 public:
  Fields(const json &obj, std::string where)
      : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) Invalid(where_ + " must be a table");
  }

  bool Has(const std::string &key) const { return obj_.contains(key); }

  const json &Get(const std::string &key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  template <typename T>
  T Value(const std::string &key, T fallback) {
    if (!Has(key)) return fallback;
    return As<T>(Get(key), key);
  }

  template <typename T>
  T Required(const std::string &key) {
    if (!Has(key)) Invalid(where_ + ": missing '" + key + "'");
    return As<T>(Get(key), key);
  }

  void Finish() const {
    for (const auto &[key, _] : obj_.items())
      if (!seen_.count(key)) Invalid(where_ + ": unknown key '" + key + "'");
  }

  template <typename T>
  T As(const json &v, const std::string &key) const {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::invalid_argument("number expected");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer())
          throw std::invalid_argument("integer expected");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_unsigned()) return v.get<T>();
          if (v.get<std::int64_t>() < 0)
            throw std::invalid_argument("non-negative integer expected");
        }
      }
      return v.get<T>();
    } catch (const std::exception &e) {
      Invalid(where_ + "." + key + ": " + e.what());
    }
  }

 private:
  json obj_;
  std::string where_;
  std::set<std::string> seen_;
};

CodecSpec ParseCodec(const json &node, const fs::path &base, int metric_rate,
                     std::size_t index) {
  Fields f(node, "codecs[" + std::to_string(index) + "]");
  CodecSpec spec;
  const auto name = f.Required<std::string>("name");
  const bool external = f.Has("command");
  const int rate = f.Value<int>("native_rate", metric_rate);
  if (rate <= 0) Invalid("codec '" + name + "': native_rate must be positive");

  std::vector<std::string> wanted;
  std::vector<BitrateMode> declared;
  if (f.Has("modes")) {
    const json &modes = f.Get("modes");
    if (!modes.is_array()) Invalid("codec '" + name + "': modes must be a list");
    for (const auto &m : modes) {
      if (m.is_string()) {
        wanted.push_back(m.get<std::string>());
      } else {
        Fields mf(m, "codec '" + name + "' mode");
        BitrateMode bm{mf.Required<std::string>("id"),
                       mf.Value<double>("bits_per_second", 0.0)};
        mf.Finish();
        wanted.push_back(bm.id);
        declared.push_back(std::move(bm));
      }
    }
  }

  if (external) {
    spec.descriptor.name = name;
    spec.descriptor.kind = CodecKind::kExternal;
    spec.descriptor.native_rate = rate;
    spec.descriptor.command_template = f.Required<std::string>("command");
    spec.descriptor.timeout_seconds = f.Value<double>("timeout", 600.0);
    if (!(spec.descriptor.timeout_seconds > 0.0))
      Invalid("codec '" + name + "': timeout must be positive");
    if (declared.empty()) {
      for (const auto &id : wanted) declared.push_back({id, 0.0});
      if (declared.empty()) declared.push_back({std::string(kDefaultMode), 0.0});
    }
    spec.descriptor.bitrate_modes = declared;
    for (const auto &m : declared) spec.modes.push_back(m.id);
  } else if (name == "rvq") {
    if (f.Has("model")) {
      spec.rvq_model = Resolve(base, f.Required<std::string>("model"));
    } else {
      Fields tf(f.Has("train") ? f.Get("train") : json::object(),
                "codec 'rvq' train");
      RvqTrainSpec t;
      t.frame_size = tf.Value<int>("frame_size", t.frame_size);
      t.stages = tf.Value<int>("stages", t.stages);
      t.entries = tf.Value<int>("entries", t.entries);
      t.seed = tf.Value<std::uint64_t>("seed", t.seed);
      tf.Finish();
      if (t.frame_size <= 0 || t.stages <= 0 || t.entries < 2)
        Invalid("codec 'rvq': invalid training settings");
      spec.rvq_train = t;
    }
    spec.descriptor.name = name;
    spec.descriptor.native_rate = rate;
    spec.modes = wanted;  // resolved against the model at instantiation
  } else {
    const auto catalog = BuiltinCatalog(rate);
    auto it = std::find_if(catalog.begin(), catalog.end(),
                           [&](const CodecDescriptor &d) { return d.name == name; });
    if (it == catalog.end()) Invalid("unknown builtin codec '" + name + "'");
    spec.descriptor = *it;
    if (wanted.empty())
      for (const auto &m : it->bitrate_modes) wanted.push_back(m.id);
    for (const auto &id : wanted)
      if (!it->FindMode(id))
        Invalid("codec '" + name + "' has no mode '" + id + "'");
    spec.modes = wanted;
  }
  f.Finish();
  return spec;
}

std::vector<Condition> ParseConditions(const json &node, const fs::path &base,
                                       std::uint64_t seed) {
  if (!node.is_array()) Invalid("conditions must be a list");
  std::vector<Condition> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    Fields f(node[i], "conditions[" + std::to_string(i) + "]");
    Condition proto;
    try {
      proto.family = ParseNoiseFamily(f.Required<std::string>("family"));
    } catch (const Error &e) {
      Invalid(e.what());
    }
    const std::string fam(NoiseFamilyName(proto.family));
    proto.seed = f.Value<std::uint64_t>("seed", DeriveSeed(seed, fam));
    if (f.Has("source"))
      proto.noise_source = Resolve(base, f.Required<std::string>("source")).string();
    std::vector<double> levels;
    if (f.Has("levels")) {
      const json &lv = f.Get("levels");
      if (!lv.is_array()) Invalid(fam + ": levels must be a list");
      for (const auto &v : lv) levels.push_back(f.As<double>(v, "levels"));
    }
    f.Finish();
    if (proto.family == NoiseFamily::kClean) {
      if (!levels.empty()) Invalid("clean condition cannot carry levels");
      out.push_back(proto);
      continue;
    }
    if (levels.empty()) Invalid(fam + " condition needs levels");
    for (double level : levels) {
      Condition c = proto;
      c.level_db = level;
      try {
        c.Validate();
      } catch (const Error &e) {
        Invalid(e.what());
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

ExternalScores ParseExternal(const json &node, const fs::path &base,
                             std::size_t index) {
  Fields f(node, "external_scores[" + std::to_string(index) + "]");
  ExternalScores e;
  e.codec = f.Required<std::string>("codec");
  e.mode = f.Value<std::string>("mode", std::string(kDefaultMode));
  e.condition = f.Required<std::string>("condition");
  auto path = [&](const char *key, std::optional<fs::path> *dst) {
    if (f.Has(key)) *dst = Resolve(base, f.Required<std::string>(key));
  };
  path("reference_transcripts", &e.reference_transcripts);
  path("hypothesis_transcripts", &e.hypothesis_transcripts);
  path("scores", &e.scores);
  path("reference_labels", &e.reference_labels);
  path("hypothesis_labels", &e.hypothesis_labels);
  f.Finish();
  if (e.reference_transcripts.has_value() != e.hypothesis_transcripts.has_value())
    Invalid("external_scores: transcripts need both reference and hypothesis");
  if (e.reference_labels.has_value() != e.hypothesis_labels.has_value())
    Invalid("external_scores: labels need both reference and hypothesis");
  return e;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. fn must not throw.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn &&fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto &t : pool) t.join();
}

void Log(const LogSink &log, const std::string &msg) {
  if (log) log(msg);
}

struct Failure {
  std::string error_class;
  std::string message;
};

template <typename Fn>
std::optional<Failure> Capture(Fn &&fn) {
  try {
    fn();
    return std::nullopt;
  } catch (const Error &e) {
    return Failure{std::string(ErrcName(e.code())), e.what()};
  } catch (const std::exception &e) {
    return Failure{"InternalError", e.what()};
  }
}

auto RowKey(const MetricReport &r) {
  return std::make_tuple(
      std::cref(r.utterance_id), r.codec == kOracleCodec, std::cref(r.codec),
      std::cref(r.mode), static_cast<int>(r.condition.family),
      r.condition.level_db.has_value(), r.condition.level_db.value_or(0.0));
}

void SortRows(std::vector<MetricReport> *rows) {
  std::sort(rows->begin(), rows->end(),
            [](const MetricReport &a, const MetricReport &b) {
              return RowKey(a) < RowKey(b);
            });
}

class Semaphore {
 public:
  explicit Semaphore(int n) : sem_(std::max(n, 1)) {}
  void acquire() { sem_.acquire(); }
  void release() { sem_.release(); }

 private:
  std::counting_semaphore<> sem_;
};

Waveform ProcessLimited(const Codec &codec, const Waveform &in,
                        const std::string &mode, Semaphore *externals) {
  if (codec.descriptor().kind != CodecKind::kExternal)
    return codec.Process(in, mode);
  externals->acquire();
  struct Release {
    Semaphore *s;
    ~Release() { s->release(); }
  } guard{externals};
  return codec.Process(in, mode);
}

struct RunContext {
  Dataset dataset;
  std::vector<std::size_t> utterances;
  std::vector<LoadedCodec> codecs;
};

RunContext Prepare(const ExperimentConfig &config, const LogSink &log) {
  config.Validate();
  Dataset dataset = LoadManifest(config.dataset_manifest);
  auto selected = SelectUtterances(dataset, config.subset, config.seed);
  Log(log, "dataset: " + std::to_string(selected.size()) + " of " +
               std::to_string(dataset.size()) + " utterances");
  auto codecs = InstantiateCodecs(config, dataset, log);
  return {std::move(dataset), std::move(selected), std::move(codecs)};
}

std::vector<std::size_t> SeededSubset(std::vector<std::size_t> indices,
                                      std::size_t count, std::uint64_t seed) {
  if (count == 0 || count >= indices.size()) return indices;
  CounterRng rng(seed);
  for (std::size_t i = indices.size() - 1; i > 0; --i)
    std::swap(indices[i], indices[rng.NextBelow(i + 1)]);
  indices.resize(count);
  std::sort(indices.begin(), indices.end());
  return indices;
}

}  // namespace

Waveform Dataset::Load(std::size_t i) const { return ReadWav(at(i).wav_path); }

Dataset LoadManifest(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::kMalformedManifest, "cannot open " + path.string());
  const fs::path base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    auto fields = SplitCsv(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (line_no == 1 && Trim(fields[0]) == "utterance_id") continue;
    if (fields.size() < 2 || fields.size() > 3)
      throw Error(Errc::kMalformedManifest, where + ": expected 2 or 3 fields");
    ManifestEntry e;
    e.utterance_id = Trim(fields[0]);
    if (e.utterance_id.empty())
      throw Error(Errc::kMalformedManifest, where + ": empty utterance id");
    if (!ids.insert(e.utterance_id).second)
      throw Error(Errc::kMalformedManifest,
                  where + ": duplicate id " + e.utterance_id);
    e.wav_path = Resolve(base, Trim(fields[1]));
    if (fields.size() == 3) e.transcript = Trim(fields[2]);
    try {
      e.header = ReadWavHeader(e.wav_path);
    } catch (const Error &err) {
      if (err.code() == Errc::kMissingFile)
        throw Error(Errc::kMissingAudio, where + ": " + e.wav_path.string());
      throw;
    }
    entries.push_back(std::move(e));
  }
  if (entries.empty())
    throw Error(Errc::kMalformedManifest, path.string() + " lists no audio");
  return Dataset(std::move(entries));
}

void ExperimentConfig::Validate() const {
  if (dataset_manifest.empty()) Invalid("dataset manifest not set");
  if (metric_rate <= 0) Invalid("metric_rate must be positive");
  if (!(align_max_lag >= 0.0)) Invalid("align_max_lag must be non-negative");
  if (!(direct_window > 0.0)) Invalid("direct_window must be positive");
  if (parallelism < 1) Invalid("parallelism must be at least 1");
  if (max_external_jobs < 1) Invalid("max_external_jobs must be at least 1");
  try {
    mel.Validate();
  } catch (const Error &e) {
    Invalid(e.what());
  }
  if (codecs.empty()) Invalid("no codecs configured");
  std::set<std::string> names;
  for (const auto &c : codecs) {
    if (c.descriptor.name == kOracleCodec)
      Invalid("'oracle' is reserved for the reference row");
    if (!names.insert(c.descriptor.name).second)
      Invalid("codec '" + c.descriptor.name + "' listed twice");
  }
  bool has_clean = false;
  std::set<std::string> labels;
  for (const auto &c : conditions) {
    has_clean |= c.family == NoiseFamily::kClean;
    if (!labels.insert(c.Label()).second)
      Invalid("condition " + c.Label() + " listed twice");
  }
  if (!has_clean) Invalid("the condition list must include clean");
  for (const auto &e : external_scores) {
    if (!labels.count(e.condition))
      Invalid("external scores refer to unknown condition " + e.condition);
    if (!names.count(e.codec))
      Invalid("external scores refer to unknown codec " + e.codec);
  }
  for (const auto &g : linearity.gains)
    if (!std::isfinite(g.gain_db)) Invalid("gain ladder must be finite");
  if (freqresp.points < 1) Invalid("freqresp.points must be positive");
  if (!(freqresp.fmin > 0.0)) Invalid("freqresp.fmin must be positive");
  for (double a : freqresp.amplitudes)
    if (!(a > 0.0)) Invalid("probe amplitudes must be positive");
  if (!(freqresp.probe.duration > 2.0 * freqresp.probe.discard))
    Invalid("probe duration must exceed twice the discarded edge");
}

ExperimentConfig ParseConfig(const json &doc, const fs::path &base_dir) {
  Fields f(doc, "config");
  ExperimentConfig cfg;
  cfg.seed = f.Value<std::uint64_t>("seed", cfg.seed);
  cfg.metric_rate = f.Value<int>("metric_rate", cfg.metric_rate);
  cfg.align_max_lag = f.Value<double>("align_max_lag", cfg.align_max_lag);
  cfg.direct_window = f.Value<double>("direct_window", cfg.direct_window);
  cfg.parallelism = f.Value<int>("parallelism", cfg.parallelism);
  cfg.max_external_jobs = f.Value<int>("max_external_jobs", cfg.max_external_jobs);
  cfg.check_repeatability =
      f.Value<bool>("check_repeatability", cfg.check_repeatability);

  {
    Fields d(f.Has("dataset") ? f.Get("dataset") : json::object(), "dataset");
    cfg.dataset_manifest = Resolve(base_dir, d.Required<std::string>("manifest"));
    cfg.subset = d.Value<std::size_t>("subset", cfg.subset);
    d.Finish();
  }
  if (f.Has("mel")) {
    Fields m(f.Get("mel"), "mel");
    cfg.mel.n_mels = m.Value<int>("n_mels", cfg.mel.n_mels);
    cfg.mel.fft_size = m.Value<int>("fft_size", cfg.mel.fft_size);
    cfg.mel.hop = m.Value<int>("hop", cfg.mel.hop);
    cfg.mel.floor = m.Value<double>("floor", cfg.mel.floor);
    cfg.mel.fmin = m.Value<double>("fmin", cfg.mel.fmin);
    cfg.mel.fmax = m.Value<double>("fmax", cfg.mel.fmax);
    m.Finish();
  }
  if (!f.Has("codecs")) Invalid("config: missing 'codecs'");
  const json &codecs = f.Get("codecs");
  if (!codecs.is_array()) Invalid("codecs must be a list");
  for (std::size_t i = 0; i < codecs.size(); ++i)
    cfg.codecs.push_back(ParseCodec(codecs[i], base_dir, cfg.metric_rate, i));

  if (!f.Has("conditions")) Invalid("config: missing 'conditions'");
  cfg.conditions = ParseConditions(f.Get("conditions"), base_dir, cfg.seed);

  if (f.Has("linearity")) {
    Fields l(f.Get("linearity"), "linearity");
    if (l.Has("gains_db")) {
      const json &g = l.Get("gains_db");
      if (!g.is_array()) Invalid("linearity.gains_db must be a list");
      cfg.linearity.gains.clear();
      for (const auto &v : g)
        cfg.linearity.gains.push_back({l.As<double>(v, "gains_db")});
    }
    cfg.linearity.pairs = l.Value<std::size_t>("pairs", cfg.linearity.pairs);
    cfg.linearity.utterances =
        l.Value<std::size_t>("utterances", cfg.linearity.utterances);
    l.Finish();
  }
  if (f.Has("freqresp")) {
    Fields r(f.Get("freqresp"), "freqresp");
    auto &fr = cfg.freqresp;
    fr.points = r.Value<int>("points", fr.points);
    fr.fmin = r.Value<double>("fmin", fr.fmin);
    if (r.Has("freqs")) {
      const json &v = r.Get("freqs");
      if (!v.is_array()) Invalid("freqresp.freqs must be a list");
      for (const auto &x : v) fr.freqs.push_back(r.As<double>(x, "freqs"));
    }
    if (r.Has("amplitudes")) {
      const json &v = r.Get("amplitudes");
      if (!v.is_array()) Invalid("freqresp.amplitudes must be a list");
      fr.amplitudes.clear();
      for (const auto &x : v) fr.amplitudes.push_back(r.As<double>(x, "amplitudes"));
    }
    fr.probe.duration = r.Value<double>("duration", fr.probe.duration);
    fr.probe.fade = r.Value<double>("fade", fr.probe.fade);
    fr.probe.discard = r.Value<double>("discard", fr.probe.discard);
    r.Finish();
  }
  if (f.Has("external_scores")) {
    const json &v = f.Get("external_scores");
    if (!v.is_array()) Invalid("external_scores must be a list");
    for (std::size_t i = 0; i < v.size(); ++i)
      cfg.external_scores.push_back(ParseExternal(v[i], base_dir, i));
  }
  f.Finish();
  cfg.Validate();
  return cfg;
}

json ReadConfigDocument(const fs::path &path) {
  if (!fs::exists(path))
    throw Error(Errc::kConfigInvalid, "no such config " + path.string());
  const std::string ext = path.extension().string();
  try {
    if (ext == ".toml") {
      toml::table table = toml::parse_file(path.string());
      std::ostringstream os;
      os << toml::json_formatter{table};
      return json::parse(os.str());
    }
    if (ext == ".json") {
      std::ifstream in(path);
      return json::parse(in);
    }
  } catch (const toml::parse_error &e) {
    Invalid(path.string() + ": " + std::string(e.description()));
  } catch (const json::exception &e) {
    Invalid(path.string() + ": " + e.what());
  }
  Invalid("config must be .toml or .json: " + path.string());
}

ExperimentConfig LoadConfig(const fs::path &path) {
  return ParseConfig(ReadConfigDocument(path), fs::absolute(path).parent_path());
}

json ConfigToJson(const ExperimentConfig &c) {
  json j;
  j["dataset"] = {{"manifest", c.dataset_manifest.string()}, {"subset", c.subset}};
  j["metric_rate"] = c.metric_rate;
  j["seed"] = c.seed;
  j["parallelism"] = c.parallelism;
  j["max_external_jobs"] = c.max_external_jobs;
  j["align_max_lag"] = c.align_max_lag;
  j["direct_window"] = c.direct_window;
  j["check_repeatability"] = c.check_repeatability;
  j["mel"] = {{"n_mels", c.mel.n_mels}, {"fft_size", c.mel.fft_size},
              {"hop", c.mel.hop},       {"floor", c.mel.floor},
              {"fmin", c.mel.fmin},     {"fmax", c.mel.fmax}};
  j["codecs"] = json::array();
  for (const auto &s : c.codecs) {
    json e{{"name", s.descriptor.name}, {"native_rate", s.descriptor.native_rate},
           {"modes", s.modes}};
    if (s.descriptor.kind == CodecKind::kExternal) {
      e["command"] = s.descriptor.command_template;
      e["timeout"] = s.descriptor.timeout_seconds;
    }
    if (s.rvq_model) e["model"] = s.rvq_model->string();
    if (s.rvq_train)
      e["train"] = {{"frame_size", s.rvq_train->frame_size},
                    {"stages", s.rvq_train->stages},
                    {"entries", s.rvq_train->entries},
                    {"seed", s.rvq_train->seed}};
    j["codecs"].push_back(std::move(e));
  }
  j["conditions"] = json::array();
  for (const auto &cond : c.conditions) {
    json e{{"family", NoiseFamilyName(cond.family)}, {"seed", cond.seed}};
    if (cond.level_db) e["level_db"] = *cond.level_db;
    if (cond.noise_source) e["source"] = *cond.noise_source;
    j["conditions"].push_back(std::move(e));
  }
  json gains = json::array();
  for (const auto &g : c.linearity.gains) gains.push_back(g.gain_db);
  j["linearity"] = {{"gains_db", gains},
                    {"pairs", c.linearity.pairs},
                    {"utterances", c.linearity.utterances}};
  j["freqresp"] = {{"points", c.freqresp.points},
                   {"fmin", c.freqresp.fmin},
                   {"freqs", c.freqresp.freqs},
                   {"amplitudes", c.freqresp.amplitudes},
                   {"duration", c.freqresp.probe.duration},
                   {"fade", c.freqresp.probe.fade},
                   {"discard", c.freqresp.probe.discard}};
  j["external_scores"] = json::array();
  for (const auto &e : c.external_scores) {
    json o{{"codec", e.codec}, {"mode", e.mode}, {"condition", e.condition}};
    auto put = [&](const char *k, const std::optional<fs::path> &p) {
      if (p) o[k] = p->string();
    };
    put("reference_transcripts", e.reference_transcripts);
    put("hypothesis_transcripts", e.hypothesis_transcripts);
    put("scores", e.scores);
    put("reference_labels", e.reference_labels);
    put("hypothesis_labels", e.hypothesis_labels);
    j["external_scores"].push_back(std::move(o));
  }
  return j;
}

std::string_view RowStatusName(RowStatus s) {
  switch (s) {
    case RowStatus::kOk: return "ok";
    case RowStatus::kCodecError: return "codec_error";
    case RowStatus::kSkipped: return "skipped";
  }
  return "unknown";
}

std::vector<std::size_t> SelectUtterances(const Dataset &dataset,
                                          std::size_t count,
                                          std::uint64_t seed) {
  std::vector<std::size_t> all(dataset.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return SeededSubset(std::move(all), count, DeriveSeed(seed, "subset"));
}

std::vector<LoadedCodec> InstantiateCodecs(const ExperimentConfig &config,
                                           const Dataset &dataset,
                                           LogSink log) {
  std::vector<LoadedCodec> out;
  for (const auto &spec : config.codecs) {
    LoadedCodec lc;
    if (spec.descriptor.kind == CodecKind::kExternal) {
      lc.codec = MakeExternalCodec(spec.descriptor, log);
    } else if (spec.descriptor.name == "rvq") {
      std::shared_ptr<const RvqModel> model;
      if (spec.rvq_model) {
        model = std::make_shared<RvqModel>(RvqModel::Load(*spec.rvq_model));
      } else {
        const RvqTrainSpec t = spec.rvq_train.value_or(RvqTrainSpec{});
        const auto chosen = SelectUtterances(dataset, config.subset, config.seed);
        // Training is deterministic, so one model per corpus and settings is
        // shared by every run in the process.
        std::string key = std::to_string(spec.descriptor.native_rate) + "/" +
                          std::to_string(t.frame_size) + "/" +
                          std::to_string(t.stages) + "/" +
                          std::to_string(t.entries) + "/" +
                          std::to_string(t.seed);
        for (std::size_t i : chosen) key += "|" + dataset.at(i).wav_path.string();
        static std::mutex cache_mu;
        static std::map<std::string, std::shared_ptr<const RvqModel>> cache;
        {
          std::lock_guard lock(cache_mu);
          if (auto it = cache.find(key); it != cache.end()) model = it->second;
        }
        if (!model) {
          std::vector<Waveform> corpus;
          for (std::size_t i : chosen)
            corpus.push_back(
                Resample(dataset.Load(i), spec.descriptor.native_rate));
          RvqTrainOptions opts;
          opts.threads = config.parallelism;
          model = std::make_shared<RvqModel>(TrainRvq(
              corpus, t.frame_size, t.stages, t.entries, t.seed, opts));
          std::lock_guard lock(cache_mu);
          cache.emplace(key, model);
        }
      }
      char id[32];
      std::snprintf(id, sizeof(id), "%016llx",
                    static_cast<unsigned long long>(model->id()));
      Log(log, "rvq model " + std::string(id) + ": K=" +
                   std::to_string(model->stages()) +
                   " C=" + std::to_string(model->entries()));
      lc.codec = MakeRvqCodec(model);
    } else {
      lc.codec = MakeBuiltinCodec(spec.descriptor.name, spec.descriptor.native_rate);
    }
    lc.modes = spec.modes;
    if (lc.modes.empty())
      for (const auto &m : lc.codec->descriptor().bitrate_modes)
        lc.modes.push_back(m.id);
    for (const auto &m : lc.modes)
      if (!lc.codec->descriptor().FindMode(m))
        Invalid("codec '" + spec.descriptor.name + "' has no mode '" + m + "'");
    out.push_back(std::move(lc));
  }
  return out;
}

Waveform Degrade(const Waveform &clean, const std::string &utterance_id,
                 const Condition &condition, double direct_window,
                 std::map<std::string, Waveform> *assets) {
  condition.Validate();
  auto asset = [&]() -> Waveform {
    const std::string &src = *condition.noise_source;
    auto it = assets->find(src);
    if (it == assets->end()) it = assets->emplace(src, ReadWav(src)).first;
    return Resample(it->second, clean.sample_rate());
  };
  switch (condition.family) {
    case NoiseFamily::kClean:
      return clean;
    case NoiseFamily::kWhite: {
      Waveform noise =
          GenWhiteNoise(clean.duration_seconds(), clean.sample_rate(),
                        DeriveSeed(condition.seed, utterance_id));
      return MixAtSnr(clean, noise, *condition.level_db);
    }
    case NoiseFamily::kAmbient:
      return MixAtSnr(clean, asset(), *condition.level_db);
    case NoiseFamily::kReverb:
      return ApplyReverbAtDrr(clean, RoomImpulseResponse(asset()),
                              *condition.level_db, direct_window);
  }
  throw Error(Errc::kInvalidArgument, "unknown noise family");
}

GridResult RunGrid(const ExperimentConfig &config, LogSink log) {
  RunContext ctx = Prepare(config, log);
  GridResult result;

  std::map<std::string, Waveform> assets;
  for (const auto &c : config.conditions) {
    if (c.noise_source && !assets.count(*c.noise_source)) {
      try {
        assets.emplace(*c.noise_source, ReadWav(*c.noise_source));
      } catch (const Error &e) {
        Invalid("condition " + c.Label() + ": " + e.what());
      }
    }
  }

  if (config.check_repeatability) {
    for (const auto &lc : ctx.codecs) {
      if (lc.codec->descriptor().kind != CodecKind::kExternal) continue;
      auto failure = Capture([&] {
        Waveform probe = Resample(ctx.dataset.Load(ctx.utterances.front()),
                                  lc.codec->descriptor().native_rate);
        if (!IsRepeatable(*lc.codec, probe, lc.modes.front())) {
          result.nondeterministic_codecs.push_back(lc.codec->descriptor().name);
          Log(log, "warning: codec " + lc.codec->descriptor().name +
                       " is not repeatable");
        }
      });
      if (failure)
        Log(log, "repeatability check of " + lc.codec->descriptor().name +
                     " failed: " + failure->message);
    }
  }

  const std::size_t units = ctx.utterances.size() * config.conditions.size();
  std::vector<std::vector<MetricReport>> per_unit(units);
  Semaphore externals(config.max_external_jobs);

  ParallelFor(units, config.parallelism, [&](std::size_t u) {
    const std::size_t ui = ctx.utterances[u / config.conditions.size()];
    const Condition &cond = config.conditions[u % config.conditions.size()];
    const std::string &id = ctx.dataset.at(ui).utterance_id;
    auto &rows = per_unit[u];
    auto make_row = [&](std::string codec, std::string mode) {
      MetricReport r;
      r.utterance_id = id;
      r.codec = std::move(codec);
      r.mode = std::move(mode);
      r.condition = cond;
      return r;
    };
    rows.push_back(make_row(std::string(kOracleCodec), std::string(kOracleMode)));
    for (const auto &lc : ctx.codecs)
      for (const auto &m : lc.modes)
        rows.push_back(make_row(lc.codec->descriptor().name, m));

    std::optional<Waveform> reference, degraded;
    auto prep = Capture([&] {
      Waveform clean = ctx.dataset.Load(ui);
      std::map<std::string, Waveform> local = assets;
      degraded = Degrade(clean, id, cond, config.direct_window, &local);
      reference = Resample(clean, config.metric_rate);
    });
    if (prep) {
      for (auto &r : rows) {
        r.status = RowStatus::kSkipped;
        r.error_class = prep->error_class;
        r.error_message = prep->message;
      }
      return;
    }
    auto score = [&](const Waveform &out) {
      AlignResult a = Align(*reference, Resample(out, config.metric_rate),
                            config.align_max_lag);
      return MelDistance(a.ref, a.test, config.mel);
    };
    std::size_t row = 0;
    if (auto f = Capture([&] {
          rows[row].metrics[std::string(kMelMetric)] = score(*degraded);
        })) {
      rows[row].status = RowStatus::kSkipped;
      rows[row].error_class = f->error_class;
      rows[row].error_message = f->message;
    }
    for (const auto &lc : ctx.codecs) {
      const int native = lc.codec->descriptor().native_rate;
      std::optional<Waveform> input;
      auto in_fail = Capture([&] { input = Resample(*degraded, native); });
      for (const auto &m : lc.modes) {
        MetricReport &r = rows[++row];
        if (in_fail) {
          r.status = RowStatus::kSkipped;
          r.error_class = in_fail->error_class;
          r.error_message = in_fail->message;
          continue;
        }
        if (auto f = Capture([&] {
              Waveform out = ProcessLimited(*lc.codec, *input, m, &externals);
              r.metrics[std::string(kMelMetric)] = score(out);
            })) {
          r.status = RowStatus::kCodecError;
          r.error_class = f->error_class;
          r.error_message = f->message;
        }
      }
    }
  });

  for (auto &unit : per_unit)
    for (auto &r : unit) result.rows.push_back(std::move(r));

  for (const auto &ext : config.external_scores) {
    MetricReport r;
    r.utterance_id = std::string(kCorpusUtterance);
    r.codec = ext.codec;
    r.mode = ext.mode;
    for (const auto &c : config.conditions)
      if (c.Label() == ext.condition) r.condition = c;
    if (auto f = Capture([&] {
          if (ext.reference_transcripts)
            r.metrics["wer"] = ComputeWer(JoinTranscripts(
                *ext.reference_transcripts, *ext.hypothesis_transcripts)).wer;
          if (ext.scores) r.metrics["eer"] = ComputeEer(ReadScores(*ext.scores));
          if (ext.reference_labels)
            r.metrics["accuracy"] = ComputeAccuracy(
                ReadLabels(*ext.reference_labels),
                ReadLabels(*ext.hypothesis_labels));
        })) {
      r.metrics.clear();
      r.status = RowStatus::kSkipped;
      r.error_class = f->error_class;
      r.error_message = f->message;
    }
    result.rows.push_back(std::move(r));
  }
  SortRows(&result.rows);
  return result;
}

std::vector<LinearityOutcome> RunLinearity(const ExperimentConfig &config,
                                           LogSink log) {
  RunContext ctx = Prepare(config, log);
  const auto chosen =
      SeededSubset(ctx.utterances, config.linearity.utterances,
                   DeriveSeed(config.seed, "linearity"));
  const std::size_t max_pairs = chosen.size() / 2;
  const std::size_t n_pairs =
      config.linearity.pairs == 0 ? max_pairs : config.linearity.pairs;
  if (n_pairs > max_pairs)
    Invalid("linearity.pairs = " + std::to_string(n_pairs) + " but only " +
            std::to_string(max_pairs) + " disjoint pairs exist");

  std::vector<std::size_t> order = chosen;
  {
    CounterRng rng(DeriveSeed(config.seed, "pairs"));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.NextBelow(i)]);
  }

  std::map<int, std::vector<Waveform>> by_rate;
  std::vector<Waveform> originals;
  for (std::size_t i : chosen) originals.push_back(ctx.dataset.Load(i));
  auto at_rate = [&](int rate) -> const std::vector<Waveform> & {
    auto it = by_rate.find(rate);
    if (it != by_rate.end()) return it->second;
    std::vector<Waveform> v;
    for (const auto &w : originals) v.push_back(Resample(w, rate));
    return by_rate.emplace(rate, std::move(v)).first->second;
  };
  auto pos = [&](std::size_t idx) {
    return static_cast<std::size_t>(
        std::find(chosen.begin(), chosen.end(), idx) - chosen.begin());
  };

  struct Job {
    const LoadedCodec *lc;
    std::string mode;
  };
  std::vector<Job> jobs;
  for (const auto &lc : ctx.codecs) {
    at_rate(lc.codec->descriptor().native_rate);
    for (const auto &m : lc.modes) jobs.push_back({&lc, m});
  }

  std::vector<LinearityOutcome> out(jobs.size());
  ParallelFor(jobs.size(), config.parallelism, [&](std::size_t j) {
    const Codec &codec = *jobs[j].lc->codec;
    const std::string &mode = jobs[j].mode;
    LinearityOutcome &o = out[j];
    o.report.codec = codec.descriptor().name;
    o.report.mode = mode;
    o.bitrate_bps = codec.descriptor().FindMode(mode)->bits_per_second;
    const auto &utts = by_rate.at(codec.descriptor().native_rate);
    if (auto f = Capture([&] {
          std::vector<std::pair<Waveform, Waveform>> pairs;
          for (std::size_t p = 0; p < n_pairs; ++p)
            pairs.emplace_back(utts[pos(order[2 * p])],
                               utts[pos(order[2 * p + 1])]);
          LinearityReport add = AdditivityProbe(codec, mode, pairs, config.mel);
          LinearityReport hom = HomogeneityProbe(codec, mode, utts,
                                                 config.linearity.gains,
                                                 config.mel);
          add.homogeneity = std::move(hom.homogeneity);
          add.utterance_count = hom.utterance_count;
          o.report = std::move(add);
        })) {
      o.status = RowStatus::kCodecError;
      o.error_class = f->error_class;
      o.error_message = f->message;
    }
  });
  return out;
}

std::vector<FreqRespOutcome> RunFrequencyResponse(
    const ExperimentConfig &config, LogSink log) {
  config.Validate();
  // Probes are synthetic, so the dataset is only needed to train an RVQ model.
  bool needs_data = false;
  for (const auto &c : config.codecs)
    needs_data |= c.descriptor.name == "rvq" && !c.rvq_model;
  std::vector<LoadedCodec> codecs;
  if (needs_data) {
    codecs = Prepare(config, log).codecs;
  } else {
    codecs = InstantiateCodecs(config, Dataset(std::vector<ManifestEntry>{}), log);
  }

  struct Job {
    const LoadedCodec *lc;
    std::string mode;
    double amplitude;
  };
  std::vector<Job> jobs;
  for (const auto &lc : codecs)
    for (const auto &m : lc.modes)
      for (double a : config.freqresp.amplitudes) jobs.push_back({&lc, m, a});

  std::vector<FreqRespOutcome> out(jobs.size());
  Semaphore externals(config.max_external_jobs);
  ParallelFor(jobs.size(), config.parallelism, [&](std::size_t j) {
    const Codec &codec = *jobs[j].lc->codec;
    FreqRespOutcome &o = out[j];
    o.curve.codec = codec.descriptor().name;
    o.curve.mode = jobs[j].mode;
    o.curve.probe_amplitude = jobs[j].amplitude;
    o.curve.probe_duration = config.freqresp.probe.duration;
    if (auto f = Capture([&] {
          const int rate = codec.descriptor().native_rate;
          auto freqs = config.freqresp.freqs.empty()
                           ? DefaultProbeFrequencies(rate, config.freqresp.points,
                                                     config.freqresp.fmin)
                           : config.freqresp.freqs;
          ProbeSettings probe = config.freqresp.probe;
          probe.amplitude = jobs[j].amplitude;
          const bool ext = codec.descriptor().kind == CodecKind::kExternal;
          if (ext) externals.acquire();
          struct Release {
            Semaphore *s;
            ~Release() {
              if (s) s->release();
            }
          } guard{ext ? &externals : nullptr};
          o.curve = FrequencyResponse(codec, jobs[j].mode, freqs, probe);
        })) {
      o.status = RowStatus::kCodecError;
      o.error_class = f->error_class;
      o.error_message = f->message;
    }
  });
  return out;
}

std::map<AggregateKey, AggregateValue> Aggregate(
    const std::vector<MetricReport> &rows) {
  std::vector<const MetricReport *> sorted;
  for (const auto &r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const MetricReport *a, const MetricReport *b) {
                     return RowKey(*a) < RowKey(*b);
                   });
  std::map<AggregateKey, AggregateValue> agg;
  for (const MetricReport *r : sorted) {
    if (r->status != RowStatus::kOk) continue;
    for (const auto &[metric, value] : r->metrics) {
      auto &a = agg[{r->codec, r->mode, r->condition.Label(), metric}];
      a.mean += value;
      ++a.count;
    }
  }
  for (auto &[_, a] : agg) a.mean /= static_cast<double>(a.count);
  return agg;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path &path, const std::vector<std::string> &header)
      : path_(path), out_(path) {
    if (!out_) throw Error(Errc::kIoFailure, "cannot write " + path.string());
    Row(header);
  }

  void Row(const std::vector<std::string> &fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << CsvField(fields[i]);
    }
    out_ << '\n';
  }

  ~CsvWriter() noexcept(false) {
    out_.close();
    if (!out_ && std::uncaught_exceptions() == 0)
      throw Error(Errc::kIoFailure, "failed writing " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

std::string Level(const Condition &c) {
  return c.level_db ? FormatDouble(*c.level_db) : std::string();
}

void WriteCsvReports(const ReportSet &rs, const fs::path &dir) {
  {
    CsvWriter w(dir / "grid.csv", {"utterance_id", "codec", "mode",
                                   "condition_family", "level_db", "metric",
                                   "value", "status"});
    for (const auto &r : rs.grid.rows) {
      const std::string fam(NoiseFamilyName(r.condition.family));
      const std::string status(RowStatusName(r.status));
      if (r.metrics.empty()) {
        w.Row({r.utterance_id, r.codec, r.mode, fam, Level(r.condition),
               std::string(kMelMetric), "", status});
        continue;
      }
      for (const auto &[metric, value] : r.metrics)
        w.Row({r.utterance_id, r.codec, r.mode, fam, Level(r.condition), metric,
               FormatDouble(value), status});
    }
  }
  {
    CsvWriter w(dir / "plot_degradation.csv",
                {"condition_family", "level_db", "codec", "mode", "metric",
                 "mean", "count"});
    std::map<std::string, Condition> by_label;
    for (const auto &r : rs.grid.rows) by_label[r.condition.Label()] = r.condition;
    for (const auto &[k, v] : Aggregate(rs.grid.rows)) {
      const Condition &c = by_label.at(k.condition);
      w.Row({std::string(NoiseFamilyName(c.family)), Level(c), k.codec, k.mode,
             k.metric, FormatDouble(v.mean), std::to_string(v.count)});
    }
  }
  {
    CsvWriter w(dir / "linearity.csv",
                {"codec", "mode", "bitrate_bps", "probe", "gain_db", "mean",
                 "p5", "p95", "count", "status"});
    CsvWriter add(dir / "plot_additivity.csv",
                  {"codec", "mode", "bitrate_kbps", "mean", "p5", "p95"});
    CsvWriter hom(dir / "plot_homogeneity.csv",
                  {"codec", "mode", "gain_db", "mean", "p5", "p95"});
    for (const auto &o : rs.linearity) {
      const auto &r = o.report;
      const std::string status(RowStatusName(o.status));
      const std::string bps = FormatDouble(o.bitrate_bps);
      if (o.status != RowStatus::kOk) {
        w.Row({r.codec, r.mode, bps, "additivity", "", "", "", "", "0", status});
        continue;
      }
      const auto &a = r.additivity;
      w.Row({r.codec, r.mode, bps, "additivity", "", FormatDouble(a.mean),
             FormatDouble(a.p5), FormatDouble(a.p95), std::to_string(a.count),
             status});
      add.Row({r.codec, r.mode, FormatDouble(o.bitrate_bps / 1000.0),
               FormatDouble(a.mean), FormatDouble(a.p5), FormatDouble(a.p95)});
      for (const auto &h : r.homogeneity) {
        const auto &d = h.distance;
        w.Row({r.codec, r.mode, bps, "homogeneity", FormatDouble(h.gain.gain_db),
               FormatDouble(d.mean), FormatDouble(d.p5), FormatDouble(d.p95),
               std::to_string(d.count), status});
        hom.Row({r.codec, r.mode, FormatDouble(h.gain.gain_db),
                 FormatDouble(d.mean), FormatDouble(d.p5), FormatDouble(d.p95)});
      }
    }
  }
  {
    CsvWriter w(dir / "freqresp.csv", {"codec", "mode", "probe_amplitude",
                                       "freq_hz", "gain_db", "status"});
    CsvWriter plot(dir / "plot_freqresp.csv",
                  {"series", "freq_hz", "gain_db"});
    for (const auto &o : rs.freqresp) {
      const auto &c = o.curve;
      const std::string amp = FormatDouble(c.probe_amplitude);
      const std::string status(RowStatusName(o.status));
      if (o.status != RowStatus::kOk) {
        w.Row({c.codec, c.mode, amp, "", "", status});
        continue;
      }
      for (const auto &[f, g] : c.points) {
        w.Row({c.codec, c.mode, amp, FormatDouble(f), FormatDouble(g), status});
        plot.Row({c.codec + ":" + c.mode + "@" + amp, FormatDouble(f),
                 FormatDouble(g)});
      }
    }
  }
}

json Summary(const DistanceSummary &d) {
  return {{"mean", d.mean}, {"p5", d.p5}, {"p95", d.p95}, {"count", d.count}};
}

void WriteJsonReport(const ExperimentConfig &config, const ReportSet &rs,
                     const fs::path &dir) {
  json j;
  j["config"] = ConfigToJson(config);
  j["notes"] = json::array(
      {"SNR and DRR use full-signal energy without voice-activity gating",
       "metric values are computed at metric_rate after lag alignment against "
       "the clean reference",
       "bitrates are upper bounds without entropy coding"});
  std::map<std::string, std::size_t> counts{
      {"ok", 0}, {"codec_error", 0}, {"skipped", 0}};
  j["errors"] = json::array();
  for (const auto &r : rs.grid.rows) {
    ++counts[std::string(RowStatusName(r.status))];
    if (r.status == RowStatus::kOk) continue;
    j["errors"].push_back({{"utterance_id", r.utterance_id},
                           {"codec", r.codec},
                           {"mode", r.mode},
                           {"condition", r.condition.Label()},
                           {"status", RowStatusName(r.status)},
                           {"error_class", r.error_class},
                           {"message", r.error_message}});
  }
  j["row_counts"] = counts;
  j["nondeterministic_codecs"] = rs.grid.nondeterministic_codecs;
  j["aggregates"] = json::array();
  for (const auto &[k, v] : Aggregate(rs.grid.rows))
    j["aggregates"].push_back({{"codec", k.codec},
                               {"mode", k.mode},
                               {"condition", k.condition},
                               {"metric", k.metric},
                               {"mean", v.mean},
                               {"count", v.count}});
  j["linearity"] = json::array();
  for (const auto &o : rs.linearity) {
    json e{{"codec", o.report.codec},
           {"mode", o.report.mode},
           {"bitrate_bps", o.bitrate_bps},
           {"status", RowStatusName(o.status)}};
    if (o.status == RowStatus::kOk) {
      e["additivity"] = Summary(o.report.additivity);
      e["homogeneity"] = json::array();
      for (const auto &h : o.report.homogeneity)
        e["homogeneity"].push_back(
            {{"gain_db", h.gain.gain_db}, {"distance", Summary(h.distance)}});
    } else {
      e["error_class"] = o.error_class;
      e["message"] = o.error_message;
    }
    j["linearity"].push_back(std::move(e));
  }
  j["freqresp"] = json::array();
  for (const auto &o : rs.freqresp) {
    json e{{"codec", o.curve.codec},
           {"mode", o.curve.mode},
           {"probe_amplitude", o.curve.probe_amplitude},
           {"probe_duration", o.curve.probe_duration},
           {"status", RowStatusName(o.status)}};
    if (o.status == RowStatus::kOk) {
      e["points"] = json::array();
      for (const auto &[f, g] : o.curve.points) e["points"].push_back({f, g});
    } else {
      e["error_class"] = o.error_class;
      e["message"] = o.error_message;
    }
    j["freqresp"].push_back(std::move(e));
  }
  std::ofstream out(dir / "report.json");
  out << j.dump(2) << '\n';
  out.close();
  if (!out)
    throw Error(Errc::kIoFailure, "failed writing " + (dir / "report.json").string());
}

}  // namespace

void EmitReports(const ExperimentConfig &config, const ReportSet &reports,
                 const fs::path &out_dir, const std::set<ReportFormat> &formats) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw Error(Errc::kIoFailure,
                "cannot create " + out_dir.string() + ": " + ec.message());
  if (formats.count(ReportFormat::kCsv)) WriteCsvReports(reports, out_dir);
  if (formats.count(ReportFormat::kJson))
    WriteJsonReport(config, reports, out_dir);
}

}  // namespace codec_probe
