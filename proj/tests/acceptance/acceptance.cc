// tests/acceptance/acceptance.cc

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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every line passes.

// Shared test helpers pull in doctest; nothing here registers tests.
#define DOCTEST_CONFIG_DISABLE

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "codec_probe/analysis.h"
#include "codec_probe/codec.h"
#include "codec_probe/harness.h"
#include "codec_probe/metrics.h"
#include "codec_probe/perturb.h"
#include "codec_probe/rvq.h"
#include "codec_probe/signal.h"
#include "codec_probe/wav_io.h"
#include "oracles.h"
#include "smoke_synth.h"
#include "test_util.h"

using namespace codec_probe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int g_failures = 0;

void Criterion(const std::string &name, const std::function<void(Outcome &)> &fn) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn(o);
  } catch (const std::exception &e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  if (!o.pass) ++g_failures;
  std::printf("%s %s:%s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

fs::path SmokeConfigPath() { return testutil::SourceDir() / "configs/smoke.toml"; }

ExperimentConfig SmokeConfig(const std::function<void(nlohmann::json &)> &edit = {}) {
  nlohmann::json doc = ReadConfigDocument(SmokeConfigPath());
  if (edit) edit(doc);
  return ParseConfig(doc, SmokeConfigPath().parent_path());
}

std::vector<Waveform> SmokeCorpus(const ExperimentConfig &cfg) {
  Dataset d = LoadManifest(cfg.dataset_manifest);
  std::vector<Waveform> out;
  for (std::size_t i = 0; i < d.size(); ++i)
    out.push_back(Resample(d.Load(i), cfg.metric_rate));
  return out;
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double Rms(const std::vector<double> &x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

void IdentityZeroSuite(Outcome &o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = SmokeConfig();
  const auto corpus = SmokeCorpus(cfg);
  CodecPtr identity = MakeBuiltinCodec("identity", cfg.metric_rate);
  const std::string mode(kDefaultMode);

  double worst_mel = 0.0;
  for (const auto &w : corpus) {
    Waveform out = identity->Process(w, mode);
    AlignResult a = Align(w, out, cfg.align_max_lag);
    worst_mel = std::max(worst_mel, MelDistance(a.ref, a.test, cfg.mel));
  }
  std::vector<std::pair<Waveform, Waveform>> pairs;
  for (std::size_t i = 0; i + 1 < corpus.size(); i += 2)
    pairs.emplace_back(corpus[i], corpus[i + 1]);
  LinearityReport add = AdditivityProbe(*identity, mode, pairs, cfg.mel);
  double worst_add = 0.0;
  for (double v : add.additivity_per_pair) worst_add = std::max(worst_add, v);
  LinearityReport hom =
      HomogeneityProbe(*identity, mode, corpus, DefaultGainLadder(), cfg.mel);
  double worst_hom = 0.0;
  for (const auto &p : hom.homogeneity)
    worst_hom = std::max({worst_hom, p.distance.mean, p.distance.p95});
  double worst_fr = 0.0;
  const auto freqs = DefaultProbeFrequencies(cfg.metric_rate);
  for (double amp : cfg.freqresp.amplitudes) {
    ProbeSettings ps = cfg.freqresp.probe;
    ps.amplitude = amp;
    for (const auto &[f, db] : FrequencyResponse(*identity, mode, freqs, ps).points)
      worst_fr = std::max(worst_fr, std::abs(db));
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  o.detail << " mel=" << Fmt(worst_mel) << " additivity=" << Fmt(worst_add)
           << " homogeneity=" << Fmt(worst_hom) << " freqresp_dev_db="
           << Fmt(worst_fr) << " utterances=" << corpus.size()
           << " runtime_s=" << Fmt(secs);
  o.Require(worst_mel == 0.0, "mel distance not 0");
  o.Require(worst_add == 0.0, "additivity not 0");
  o.Require(hom.homogeneity.size() == 7 && worst_hom == 0.0, "homogeneity not 0");
  o.Require(worst_fr <= 0.01, "frequency response not flat");
  o.Require(secs < 60.0, "runtime >= 60 s");
}

void DegradationExactness(Outcome &o) {
  const ExperimentConfig cfg = SmokeConfig();
  const auto corpus = SmokeCorpus(cfg);
  const Waveform ambient =
      Resample(ReadWav(testutil::SourceDir() / "data/smoke/noise/ambient.wav"),
               cfg.metric_rate);
  double worst_snr = 0.0;
  std::size_t n_snr = 0;
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    const Waveform &s = corpus[u];
    const Waveform white =
        GenWhiteNoise(s.duration_seconds(), s.sample_rate(), 100 + u);
    for (const Waveform *noise : {&white, &ambient}) {
      for (double target : {-10.0, -5.0, 0.0, 5.0, 10.0, 20.0, 30.0}) {
        Waveform mix = MixAtSnr(s, *noise, target);
        std::vector<double> residual(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
          residual[i] = mix.data()[i] - s.data()[i];
        const double snr = 20.0 * std::log10(Rms(s.data()) / Rms(residual));
        worst_snr = std::max(worst_snr, std::abs(snr - target));
        ++n_snr;
      }
    }
  }
  std::vector<RoomImpulseResponse> rirs;
  rirs.emplace_back(ReadWav(testutil::SourceDir() / "data/smoke/rir/room.wav"));
  for (double rt60 : {0.2, 0.5, 0.9})
    rirs.emplace_back(smoke::SyntheticRir(rt60, cfg.metric_rate, 7));
  double worst_drr = 0.0;
  std::size_t n_drr = 0;
  for (const auto &rir : rirs) {
    for (int target = -20; target <= 10; ++target) {
      const double got = MeasureDrr(RirAtDrr(rir, target, cfg.direct_window),
                                    cfg.direct_window);
      worst_drr = std::max(worst_drr, std::abs(got - target));
      ++n_drr;
    }
  }
  o.detail << " max_snr_err_db=" << Fmt(worst_snr) << " (" << n_snr
           << " mixes) max_drr_err_db=" << Fmt(worst_drr) << " (" << n_drr
           << " responses)";
  o.Require(worst_snr <= 1e-6, "snr error");
  o.Require(worst_drr <= 1e-6, "drr error");
}

void BitrateChecks(Outcome &o) {
  const double a = BitrateFromFrameRate(75.0, 1, 1024);
  const double b = BitrateFromFrameRate(50.0, 8, 1024);
  const double c = BitrateBps(24000, 320, 1, 1024);
  const double d = BitrateBps(16000, 320, 8, 1024);
  o.detail << " 75Hz/C1024/k1=" << Fmt(a) << " 50Hz/C1024/k8=" << Fmt(b);
  o.Require(a == 750.0 && c == 750.0, "750 bps");
  o.Require(b == 4000.0 && d == 4000.0, "4000 bps");
}

void RvqProperties(Outcome &o) {
  const ExperimentConfig cfg = SmokeConfig();
  const auto corpus = SmokeCorpus(cfg);
  const CodecSpec *spec = nullptr;
  for (const auto &c : cfg.codecs)
    if (c.descriptor.name == "rvq") spec = &c;
  if (!spec || !spec->rvq_train) throw std::runtime_error("no rvq in smoke config");
  const RvqTrainSpec t = *spec->rvq_train;
  const RvqModel model = TrainRvq(corpus, t.frame_size, t.stages, t.entries, t.seed);
  const int K = model.stages();

  std::vector<Waveform> held_out;
  for (int i = 0; i < 20; ++i)
    held_out.push_back(smoke::SpeechLike(2.0, cfg.metric_rate, 900000 + i));

  // Per-frame residual energy.
  std::size_t energy_violations = 0, energy_checks = 0;
  for (const auto &w : held_out) {
    std::vector<double> prev = FrameResidualEnergies(model, w, 1);
    for (int k = 2; k <= K; ++k) {
      std::vector<double> cur = FrameResidualEnergies(model, w, k);
      for (std::size_t f = 0; f < cur.size(); ++f, ++energy_checks)
        if (cur[f] > prev[f]) ++energy_violations;
      prev = std::move(cur);
    }
  }

  // encode(decode(encode(x))) == encode(x), frame by frame.
  std::size_t frames = 0, reproduced = 0;
  std::vector<std::string> per_k;
  for (int k = 1; k <= K; ++k) {
    std::size_t fk = 0, rk = 0;
    for (const auto &w : held_out) {
      const CodeSequence c = Encode(model, w, k);
      const CodeSequence again = Encode(model, Decode(model, c), k);
      for (std::size_t f = 0; f < c.frame_count; ++f) {
        bool same = true;
        for (int s = 0; s < k; ++s) same &= c.at(f, s) == again.at(f, s);
        ++fk;
        rk += same;
      }
    }
    frames += fk;
    reproduced += rk;
    per_k.push_back("k" + std::to_string(k) + "=" +
                    Fmt(static_cast<double>(rk) / static_cast<double>(fk)));
  }

  // Held-out mel distance against k, per utterance and on the mean.
  std::vector<std::vector<double>> mel(held_out.size(), std::vector<double>(K));
  for (std::size_t u = 0; u < held_out.size(); ++u)
    for (int k = 1; k <= K; ++k)
      mel[u][k - 1] =
          MelDistance(held_out[u], Decode(model, Encode(model, held_out[u], k)),
                      cfg.mel);
  std::size_t steps = 0, down = 0;
  for (const auto &row : mel)
    for (int k = 1; k < K; ++k, ++steps) down += row[k] <= row[k - 1];
  std::ostringstream curve;
  for (int k = 0; k < K; ++k) {
    double m = 0.0;
    for (const auto &row : mel) m += row[k];
    curve << (k ? "," : "") << Fmt(m / mel.size());
  }

  // Same seed, same file.
  testutil::TempDir dir;
  model.Save(dir / "a.rvqm");
  TrainRvq(corpus, t.frame_size, t.stages, t.entries, t.seed).Save(dir / "b.rvqm");
  const bool same_file = testutil::ReadFile(dir / "a.rvqm") ==
                         testutil::ReadFile(dir / "b.rvqm");

  const double step_fraction = static_cast<double>(down) / static_cast<double>(steps);
  o.detail << " K=" << K << " C=" << model.entries()
           << " energy_violations=" << energy_violations << "/" << energy_checks
           << " idempotent_frames=" << reproduced << "/" << frames << " ("
           << per_k.front();
  for (std::size_t i = 1; i < per_k.size(); ++i) o.detail << " " << per_k[i];
  o.detail << ") mel_nonincreasing_steps=" << down << "/" << steps
           << " mean_mel_by_k=[" << curve.str() << "] train_deterministic="
           << (same_file ? "yes" : "no");
  o.Require(energy_violations == 0, "residual energy increased");
  o.Require(reproduced == frames, "re-encoding changed codes");
  o.Require(step_fraction >= 0.9, "held-out mel not non-increasing in 90% of steps");
  o.Require(same_file, "training not deterministic");
}

std::vector<ScoreRecord> Records(const std::vector<double> &g,
                                 const std::vector<double> &s) {
  std::vector<ScoreRecord> out;
  for (double v : g) out.push_back({"g" + std::to_string(out.size()), v, TrialLabel::kGenuine});
  for (double v : s) out.push_back({"i" + std::to_string(out.size()), v, TrialLabel::kImpostor});
  return out;
}

void MetricOracles(Outcome &o) {
  std::mt19937_64 gen(20260101);
  std::size_t wer_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uniform_int_distribution<int> len(0, 12), tok(0, 5);
    std::vector<std::string> ref(len(gen) + 1), hyp(len(gen));
    for (auto &t : ref) t = "w" + std::to_string(tok(gen));
    for (auto &t : hyp) t = "w" + std::to_string(tok(gen));
    const WerResult r = ComputeWer({{"u", ref, hyp}});
    const double want = 100.0 * static_cast<double>(oracle::EditDistance(ref, hyp)) /
                        static_cast<double>(ref.size());
    wer_bad += r.totals.errors() != oracle::EditDistance(ref, hyp) || r.wer != want;
  }
  double eer_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::uniform_int_distribution<int> count(1, 20), level(0, 15);
    std::normal_distribution<double> nd;
    std::vector<double> g(count(gen)), s(count(gen));
    const bool coarse = i % 2 == 0;
    for (double &v : g) v = coarse ? level(gen) / 10.0 + 0.2 : nd(gen) + 0.7;
    for (double &v : s) v = coarse ? level(gen) / 10.0 : nd(gen);
    eer_err = std::max(eer_err, std::abs(ComputeEer(Records(g, s)) -
                                         oracle::ChordEer(g, s)));
  }
  double mel_err = 0.0;
  const MelConfig mel;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 4000 + 997 * static_cast<std::size_t>(i % 7);
    auto a = testutil::Gaussian(n, 5000 + i);
    auto b = testutil::Gaussian(n, 6000 + i);
    for (std::size_t j = 0; j < n; ++j) b[j] = 0.4 * b[j] + 0.6 * a[j];
    const double got = MelDistance(Waveform(a, 16000), Waveform(b, 16000), mel);
    mel_err = std::max(mel_err, std::abs(got - oracle::MelDistance(a, b, 16000)));
  }
  o.detail << " wer_mismatches=" << wer_bad << "/1000 max_eer_err=" << Fmt(eer_err)
           << " max_mel_err=" << Fmt(mel_err);
  o.Require(wer_bad == 0, "wer");
  o.Require(eer_err <= 1e-9, "eer");
  o.Require(mel_err <= 1e-6, "mel distance");
}

void LinearityOrderings(Outcome &o) {
  const ExperimentConfig cfg = SmokeConfig([](nlohmann::json &doc) {
    nlohmann::json keep = nlohmann::json::array();
    for (const auto &c : doc["codecs"]) {
      const std::string n = c["name"];
      if (n == "identity" || n == "hardclip-0.1" || n == "mulaw-8" || n == "rvq")
        keep.push_back(c);
    }
    doc["codecs"] = keep;
  });
  const auto outcomes = RunLinearity(cfg);
  double id_add = -1, clip_add = -1, mu_m40 = -1, mu_0 = -1;
  std::vector<std::pair<int, double>> rvq;
  for (const auto &out : outcomes) {
    if (out.status != RowStatus::kOk)
      throw std::runtime_error(out.report.codec + ": " + out.error_message);
    const auto &r = out.report;
    if (r.codec == "identity") id_add = r.additivity.mean;
    if (r.codec == "hardclip-0.1") clip_add = r.additivity.mean;
    if (r.codec == "mulaw-8")
      for (const auto &p : r.homogeneity) {
        if (p.gain.gain_db == -40.0) mu_m40 = p.distance.mean;
        if (p.gain.gain_db == 0.0) mu_0 = p.distance.mean;
      }
    if (r.codec == "rvq") rvq.emplace_back(std::stoi(r.mode.substr(1)), r.additivity.mean);
  }
  std::sort(rvq.begin(), rvq.end());
  o.detail << " additivity identity=" << Fmt(id_add) << " hardclip-0.1="
           << Fmt(clip_add) << "; mulaw-8 homogeneity -40dB=" << Fmt(mu_m40)
           << " 0dB=" << Fmt(mu_0) << "; rvq additivity by k=[";
  for (std::size_t i = 0; i < rvq.size(); ++i)
    o.detail << (i ? "," : "") << Fmt(rvq[i].second);
  o.detail << "]";
  o.Require(clip_add > id_add, "hardclip additivity not above identity");
  o.Require(mu_m40 > mu_0, "mulaw-8 homogeneity ordering");
  o.Require(!rvq.empty() && rvq.back().second <= rvq.front().second,
            "rvq additivity at k=K above k=1");
}

void FrequencyResponseOracles(Outcome &o) {
  const ExperimentConfig cfg = SmokeConfig();
  const int rate = cfg.metric_rate;
  const auto freqs = DefaultProbeFrequencies(rate);
  CodecPtr identity = MakeBuiltinCodec("identity", rate);
  CodecPtr half = MakeBuiltinCodec("gain-0.5", rate);
  const std::string mode(kDefaultMode);
  double id_dev = 0.0, half_dev = 0.0;
  for (double amp : cfg.freqresp.amplitudes) {
    ProbeSettings ps = cfg.freqresp.probe;
    ps.amplitude = amp;
    for (const auto &[f, db] : FrequencyResponse(*identity, mode, freqs, ps).points)
      id_dev = std::max(id_dev, std::abs(db));
    for (const auto &[f, db] : FrequencyResponse(*half, mode, freqs, ps).points)
      half_dev = std::max(half_dev, std::abs(db + 6.02));
  }
  // Bin-aligned tones: 1 s at the metric rate puts integer Hz on bins.
  double rel = 0.0;
  std::mt19937_64 gen(77);
  for (double f : freqs) {
    const double hz = std::round(f);
    std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
    Waveform tone = GenSine(hz, 1.0, rate, 0.7, 0.0, ph(gen));
    const double g = GoertzelMagnitude(tone, hz);
    const double d = oracle::DftBinMagnitude(tone.data(), static_cast<std::size_t>(hz));
    rel = std::max(rel, std::abs(g - d) / d);
  }
  o.detail << " identity_max_dev_db=" << Fmt(id_dev) << " gain0.5_max_dev_from_-6.02="
           << Fmt(half_dev) << " probes=" << freqs.size()
           << " goertzel_vs_dft_max_rel=" << Fmt(rel);
  o.Require(freqs.size() == 64, "64 probes");
  o.Require(id_dev <= 0.01, "identity not flat");
  o.Require(half_dev <= 0.05, "gain-0.5 off -6.02 dB");
  o.Require(rel <= 0.01, "goertzel disagrees with dft");
}

void Determinism(Outcome &o) {
  testutil::TempDir dir;
  const ExperimentConfig one = SmokeConfig([](nlohmann::json &d) { d["parallelism"] = 1; });
  const ExperimentConfig three = SmokeConfig([](nlohmann::json &d) { d["parallelism"] = 3; });
  ReportSet a, b;
  a.grid = RunGrid(one);
  b.grid = RunGrid(three);
  EmitReports(one, a, dir / "a", {ReportFormat::kCsv});
  EmitReports(three, b, dir / "b", {ReportFormat::kCsv});
  std::size_t files = 0, identical = 0;
  for (const auto &entry : fs::directory_iterator(dir / "a")) {
    ++files;
    identical += testutil::ReadFile(entry.path()) ==
                 testutil::ReadFile(dir / "b" / entry.path().filename());
  }
  std::size_t ok = 0;
  for (const auto &r : a.grid.rows) ok += r.status == RowStatus::kOk;
  o.detail << " rows=" << a.grid.rows.size() << " ok=" << ok
           << " identical_csv=" << identical << "/" << files
           << " (parallelism 1 vs 3)";
  o.Require(files > 0 && identical == files, "csv differs between runs");
  o.Require(ok == a.grid.rows.size(), "grid rows not ok");
}

}  // namespace

int main() {
  Criterion("identity zero suite", IdentityZeroSuite);
  Criterion("degradation exactness", DegradationExactness);
  Criterion("bitrate cross-checks", BitrateChecks);
  Criterion("rvq properties", RvqProperties);
  Criterion("metric oracles", MetricOracles);
  Criterion("linearity orderings", LinearityOrderings);
  Criterion("frequency response oracles", FrequencyResponseOracles);
  Criterion("grid determinism", Determinism);
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
