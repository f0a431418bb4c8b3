// core/src/metrics.cc

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

#include "codec_probe/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "codec_probe/error.h"
#include "codec_probe/fft.h"

namespace codec_probe {

namespace {

constexpr double kMelLinearStep = 200.0 / 3.0;
constexpr double kMelBreakHz = 1000.0;
constexpr double kMelBreak = kMelBreakHz / kMelLinearStep;

double HzToMel(double hz) {
  static const double log_step = std::log(6.4) / 27.0;
  if (hz >= kMelBreakHz) return kMelBreak + std::log(hz / kMelBreakHz) / log_step;
  return hz / kMelLinearStep;
}

double MelToHz(double mel) {
  static const double log_step = std::log(6.4) / 27.0;
  if (mel >= kMelBreak) return kMelBreakHz * std::exp(log_step * (mel - kMelBreak));
  return mel * kMelLinearStep;
}

std::string Trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsv(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(Trim(field));
  return out;
}

std::ifstream OpenText(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kMissingFile, path.string());
  return in;
}

}  // namespace

void MelConfig::Validate() const {
  if (n_mels < 1 || hop < 1 || fft_size < hop || !(floor > 0.0) || fmin < 0.0)
    throw Error(Errc::kInvalidArgument,
                "mel config needs n_mels >= 1, fft_size >= hop >= 1, floor > 0");
}

std::vector<double> MelFilterbank(const MelConfig &cfg, int sample_rate) {
  cfg.Validate();
  const double nyquist = sample_rate / 2.0;
  const double fmax = cfg.fmax > 0.0 ? std::min(cfg.fmax, nyquist) : nyquist;
  if (cfg.fmin >= fmax)
    throw Error(Errc::kInvalidArgument, "mel fmin must be below fmax");
  const int bins = cfg.fft_size / 2 + 1;
  const double mel_lo = HzToMel(cfg.fmin), mel_hi = HzToMel(fmax);
  std::vector<double> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));

  std::vector<double> bank(static_cast<std::size_t>(cfg.n_mels) * bins, 0.0);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    const double norm = 2.0 / (hi - lo);
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / cfg.fft_size;
      const double rise = (f - lo) / (mid - lo);
      const double fall = (hi - f) / (hi - mid);
      bank[static_cast<std::size_t>(m) * bins + k] =
          norm * std::max(0.0, std::min(rise, fall));
    }
  }
  return bank;
}

std::vector<double> LogMelSpectrogram(const Waveform &w, const MelConfig &cfg,
                                      std::size_t *frames_out) {
  cfg.Validate();
  if (w.empty()) throw Error(Errc::kEmptySignal, "log-mel of empty signal");
  const std::size_t n_fft = static_cast<std::size_t>(cfg.fft_size);
  const std::size_t hop = static_cast<std::size_t>(cfg.hop);
  const std::size_t len = w.size();
  const std::size_t frames =
      len <= n_fft ? 1 : 1 + (len - n_fft + hop - 1) / hop;
  const std::size_t bins = n_fft / 2 + 1;
  const auto bank = MelFilterbank(cfg, w.sample_rate());

  std::vector<double> window(n_fft);
  for (std::size_t i = 0; i < n_fft; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n_fft);

  // Each triangle covers a few bins; skipping exact zeros leaves the sums
  // bit-identical.
  std::vector<std::pair<std::size_t, std::size_t>> support(cfg.n_mels);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double *row = bank.data() + static_cast<std::size_t>(m) * bins;
    std::size_t lo = 0, hi = bins;
    while (lo < bins && row[lo] == 0.0) ++lo;
    while (hi > lo && row[hi - 1] == 0.0) --hi;
    support[m] = {lo, hi};
  }

  RealFft fft(n_fft);
  std::vector<double> frame(n_fft);
  std::vector<double> power(bins);
  std::vector<double> out(frames * cfg.n_mels);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < n_fft; ++i)
      frame[i] = start + i < len ? w[start + i] * window[i] : 0.0;
    auto spec = fft.Forward(frame);
    for (std::size_t k = 0; k < bins; ++k) power[k] = std::norm(spec[k]);
    for (int m = 0; m < cfg.n_mels; ++m) {
      const double *row = bank.data() + static_cast<std::size_t>(m) * bins;
      double e = 0.0;
      for (std::size_t k = support[m].first; k < support[m].second; ++k)
        e += row[k] * power[k];
      out[t * cfg.n_mels + m] = std::log10(std::max(e, cfg.floor));
    }
  }
  if (frames_out) *frames_out = frames;
  return out;
}

double MelDistance(const Waveform &ref, const Waveform &test,
                   const MelConfig &cfg) {
  if (ref.sample_rate() != test.sample_rate())
    throw Error(Errc::kRateMismatch,
                std::to_string(ref.sample_rate()) + " vs " +
                    std::to_string(test.sample_rate()));
  if (ref.empty() || test.empty())
    throw Error(Errc::kEmptySignal, "mel distance of an empty signal");
  const std::size_t n = std::min(ref.size(), test.size());
  const auto a = LogMelSpectrogram(ref.Slice(0, n), cfg);
  const auto b = LogMelSpectrogram(test.Slice(0, n), cfg);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

EditCounts AlignTokens(const std::vector<std::string> &ref,
                       const std::vector<std::string> &hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> cost((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t & {
    return cost[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }
  EditCounts counts;
  counts.reference_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++counts.insertions;
      --j;
    } else {
      ++counts.deletions;
      --i;
    }
  }
  return counts;
}

WerResult ComputeWer(const std::vector<TranscriptPair> &pairs) {
  WerResult result;
  for (const auto &p : pairs) {
    if (p.reference.empty())
      throw Error(Errc::kEmptyReference,
                  "utterance '" + p.utterance_id + "' has an empty reference");
    EditCounts c = AlignTokens(p.reference, p.hypothesis);
    result.totals.substitutions += c.substitutions;
    result.totals.deletions += c.deletions;
    result.totals.insertions += c.insertions;
    result.totals.reference_length += c.reference_length;
  }
  if (result.totals.reference_length == 0)
    throw Error(Errc::kEmptyReference, "no reference tokens");
  result.wer = 100.0 * static_cast<double>(result.totals.errors()) /
               static_cast<double>(result.totals.reference_length);
  return result;
}

double ComputeEer(const std::vector<ScoreRecord> &scores) {
  std::vector<double> genuine, impostor;
  for (const auto &r : scores) {
    if (!std::isfinite(r.score))
      throw Error(Errc::kInvalidArgument, "non-finite score in " + r.trial_id);
    (r.label == TrialLabel::kGenuine ? genuine : impostor).push_back(r.score);
  }
  if (genuine.empty() || impostor.empty())
    throw Error(Errc::kMissingClass,
                "EER needs at least one genuine and one impostor trial");
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());
  std::vector<double> thresholds;
  std::merge(genuine.begin(), genuine.end(), impostor.begin(), impostor.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  struct Point {
    double frr, far;
  };
  const double ng = static_cast<double>(genuine.size());
  const double ni = static_cast<double>(impostor.size());
  std::vector<Point> points;
  points.reserve(thresholds.size() + 1);
  for (double t : thresholds) {
    auto g_below = std::lower_bound(genuine.begin(), genuine.end(), t) -
                   genuine.begin();
    auto i_at_or_above =
        impostor.end() - std::lower_bound(impostor.begin(), impostor.end(), t);
    points.push_back({g_below / ng, i_at_or_above / ni});
  }
  points.push_back({1.0, 0.0});
  std::sort(points.begin(), points.end(), [](const Point &a, const Point &b) {
    return a.frr != b.frr ? a.frr < b.frr : a.far < b.far;
  });

  std::vector<Point> hull;
  for (const Point &p : points) {
    while (hull.size() >= 2) {
      const Point &o = hull[hull.size() - 2], &a = hull.back();
      double cross = (a.frr - o.frr) * (p.far - o.far) -
                     (a.far - o.far) * (p.frr - o.frr);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }

  for (std::size_t i = 0; i < hull.size(); ++i) {
    double g = hull[i].far - hull[i].frr;
    if (g > 0.0) continue;
    if (g == 0.0 || i == 0) return 100.0 * hull[i].frr;
    const Point &a = hull[i - 1], &b = hull[i];
    double ga = a.far - a.frr;
    double t = ga / (ga - g);
    return 100.0 * (a.frr + t * (b.frr - a.frr));
  }
  return 100.0 * hull.back().frr;
}

double ComputeAccuracy(const LabelList &reference, const LabelList &hypothesis) {
  std::map<std::string, std::string> ref;
  for (const auto &[id, label] : reference) {
    if (!ref.emplace(id, label).second)
      throw Error(Errc::kIdMismatch, "duplicate reference id " + id);
  }
  if (hypothesis.size() != ref.size() || ref.empty())
    throw Error(Errc::kIdMismatch, "reference and hypothesis id sets differ");
  std::set<std::string> seen;
  std::size_t correct = 0;
  for (const auto &[id, label] : hypothesis) {
    auto it = ref.find(id);
    if (it == ref.end() || !seen.insert(id).second)
      throw Error(Errc::kIdMismatch, "unexpected or duplicate id " + id);
    if (it->second == label) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(ref.size());
}

std::vector<std::pair<std::string, std::vector<std::string>>> ReadTranscripts(
    const std::filesystem::path &path) {
  auto in = OpenText(path);
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    auto tab = line.find('\t');
    std::string id = Trim(line.substr(0, tab));
    std::vector<std::string> tokens;
    if (tab != std::string::npos) {
      std::istringstream ss(line.substr(tab + 1));
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
    }
    out.emplace_back(std::move(id), std::move(tokens));
  }
  return out;
}

std::vector<TranscriptPair> JoinTranscripts(
    const std::filesystem::path &reference,
    const std::filesystem::path &hypothesis) {
  std::map<std::string, std::vector<std::string>> hyp;
  for (auto &[id, toks] : ReadTranscripts(hypothesis)) hyp[id] = std::move(toks);
  std::vector<TranscriptPair> out;
  for (auto &[id, toks] : ReadTranscripts(reference)) {
    auto it = hyp.find(id);
    if (it == hyp.end())
      throw Error(Errc::kIdMismatch, "no hypothesis for utterance " + id);
    out.push_back({id, std::move(toks), it->second});
  }
  return out;
}

std::vector<ScoreRecord> ReadScores(const std::filesystem::path &path) {
  auto in = OpenText(path);
  std::vector<ScoreRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    auto fields = SplitCsv(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (first && fields[0] == "trial_id") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 3)
      throw Error(Errc::kMalformedContainer, "bad score line: " + line);
    ScoreRecord r;
    r.trial_id = fields[0];
    try {
      r.score = std::stod(fields[1]);
    } catch (const std::exception &) {
      throw Error(Errc::kMalformedContainer, "bad score value: " + line);
    }
    if (fields[2] == "genuine") r.label = TrialLabel::kGenuine;
    else if (fields[2] == "impostor") r.label = TrialLabel::kImpostor;
    else throw Error(Errc::kMalformedContainer, "bad trial label: " + line);
    out.push_back(std::move(r));
  }
  return out;
}

LabelList ReadLabels(const std::filesystem::path &path) {
  auto in = OpenText(path);
  LabelList out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    auto fields = SplitCsv(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (first && fields[0] == "id") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2)
      throw Error(Errc::kMalformedContainer, "bad label line: " + line);
    out.emplace_back(fields[0], fields[1]);
  }
  return out;
}

}  // namespace codec_probe
