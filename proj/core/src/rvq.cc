// core/src/rvq.cc

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

#include "codec_probe/rvq.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "codec_probe/error.h"
#include "codec_probe/rng.h"

namespace codec_probe {

namespace {

constexpr char kMagic[4] = {'R', 'V', 'Q', 'M'};
constexpr std::uint32_t kVersion = 1;

double SquaredDistance(const double *a, const double *b, int d) {
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

// Nearest entry by squared Euclidean distance, lowest index on ties.
std::uint32_t Nearest(const double *x, std::span<const double> book, int count,
                      int d, double *best_out = nullptr) {
  std::uint32_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int c = 0; c < count; ++c) {
    double dist = SquaredDistance(x, book.data() + static_cast<std::size_t>(c) * d, d);
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<std::uint32_t>(c);
    }
  }
  if (best_out) *best_out = best_dist;
  return best;
}

std::size_t FoldIndex(std::size_t i, std::size_t len) {
  if (len == 1) return 0;
  const std::size_t period = 2 * (len - 1);
  std::size_t m = i % period;
  return m < len ? m : period - m;
}

std::uint64_t Fnv1a(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void PutU32(std::vector<unsigned char> *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back((v >> (8 * i)) & 0xFF);
}
void PutU64(std::vector<unsigned char> *out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out->push_back((v >> (8 * i)) & 0xFF);
}
void PutF64(std::vector<unsigned char> *out, double v) {
  PutU64(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}
  std::uint64_t Uint(int width) {
    if (pos_ + width > bytes_.size())
      throw Error(Errc::kMalformedContainer, "truncated RVQ model");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += width;
    return v;
  }
  double F64() { return std::bit_cast<double>(Uint(8)); }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

// Parallel-for over [0, n) in contiguous blocks. Each index is written by
// exactly one worker, so the result is independent of the thread count.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn &&fn) {
  if (threads <= 1 || n < 1024) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t block = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * block, hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto &th : pool) th.join();
}

struct KMeansInput {
  const std::vector<double> *points;  // N x d
  std::size_t count;
  int dim;
};

// Lloyd's k-means. When pin_zero is set, centroid 0 is fixed at the origin.
std::vector<double> KMeans(const KMeansInput &in, int clusters, bool pin_zero,
                           std::uint64_t seed, const RvqTrainOptions &opt) {
  const int d = in.dim;
  const std::size_t n = in.count;
  const std::vector<double> &x = *in.points;
  auto point = [&](std::size_t i) { return x.data() + i * d; };

  CounterRng rng(seed);
  std::vector<double> centroids(static_cast<std::size_t>(clusters) * d, 0.0);
  int chosen = 0;
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  auto absorb = [&](int c) {
    const double *cp = centroids.data() + static_cast<std::size_t>(c) * d;
    for (std::size_t i = 0; i < n; ++i)
      min_dist[i] = std::min(min_dist[i], SquaredDistance(point(i), cp, d));
  };
  if (pin_zero) {
    absorb(0);
    chosen = 1;
  } else {
    std::size_t first = rng.NextBelow(n);
    std::copy(point(first), point(first) + d, centroids.begin());
    absorb(0);
    chosen = 1;
  }
  // k-means++: sample proportionally to squared distance to the chosen set.
  for (; chosen < clusters; ++chosen) {
    double total = 0.0;
    for (double v : min_dist) total += v;
    std::size_t pick;
    if (total > 0.0) {
      double u = rng.NextUniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cum += min_dist[i];
        if (cum > u) {
          pick = i;
          break;
        }
      }
      // Never land on a zero-weight point through rounding at the end.
      while (min_dist[pick] == 0.0 && pick > 0) --pick;
    } else {
      pick = rng.NextBelow(n);
    }
    std::copy(point(pick), point(pick) + d,
              centroids.begin() + static_cast<std::ptrdiff_t>(chosen) * d);
    absorb(chosen);
  }

  std::vector<std::uint32_t> assign(n);
  std::vector<double> dist(n);
  const int first_free = pin_zero ? 1 : 0;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    ParallelFor(n, opt.threads, [&](std::size_t i) {
      assign[i] = Nearest(point(i), centroids, clusters, d, &dist[i]);
    });
    std::vector<double> sums(centroids.size(), 0.0);
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double *s = sums.data() + static_cast<std::size_t>(assign[i]) * d;
      const double *p = point(i);
      for (int j = 0; j < d; ++j) s[j] += p[j];
      ++counts[assign[i]];
    }
    std::vector<double> next = centroids;
    for (int c = first_free; c < clusters; ++c) {
      double *dst = next.data() + static_cast<std::size_t>(c) * d;
      if (counts[c] > 0) {
        const double *s = sums.data() + static_cast<std::size_t>(c) * d;
        for (int j = 0; j < d; ++j) dst[j] = s[j] / counts[c];
      } else {
        // Re-seed from the point farthest from its centroid, then zero its
        // distance so a second empty cluster takes a different point.
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
          if (dist[i] > dist[far]) far = i;
        std::copy(point(far), point(far) + d, dst);
        dist[far] = 0.0;
      }
    }
    double shift = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) {
      double diff = next[j] - centroids[j];
      shift += diff * diff;
      norm += centroids[j] * centroids[j];
    }
    centroids.swap(next);
    if (std::sqrt(shift) <= opt.tolerance * std::sqrt(norm)) break;
  }
  return centroids;
}

void CheckStage(const RvqModel &model, int k) {
  if (k < 1 || k > model.stages())
    throw Error(Errc::kStageOutOfRange,
                "k=" + std::to_string(k) + " outside 1.." +
                    std::to_string(model.stages()));
}

// Residuals after k greedy stages, in place. Writes indices when non-null.
void Quantize(const RvqModel &model, std::vector<double> *frames, int k,
              std::vector<std::uint32_t> *indices) {
  const int d = model.dimension();
  const std::size_t n = frames->size() / d;
  if (indices) indices->assign(n * k, 0);
  for (std::size_t f = 0; f < n; ++f) {
    double *r = frames->data() + f * d;
    for (int s = 0; s < k; ++s) {
      auto book = model.codebook(s);
      std::uint32_t idx = Nearest(r, book, model.entries(), d);
      const double *e = book.data() + static_cast<std::size_t>(idx) * d;
      for (int j = 0; j < d; ++j) r[j] -= e[j];
      if (indices) (*indices)[f * k + s] = idx;
    }
  }
}

class RvqCodec : public Codec {
 public:
  explicit RvqCodec(std::shared_ptr<const RvqModel> model)
      : Codec(RvqDescriptor(*model)), model_(std::move(model)) {}

 private:
  std::vector<double> Run(const Waveform &w,
                          const BitrateMode &mode) const override {
    int k = std::stoi(mode.id.substr(1));
    return Decode(*model_, Encode(*model_, w, k)).data();
  }
  std::shared_ptr<const RvqModel> model_;
};

}  // namespace

RvqModel::RvqModel(int sample_rate, int frame_size, int entries,
                   std::vector<std::vector<double>> codebooks,
                   std::vector<double> training_stats, std::uint64_t seed)
    : sample_rate_(sample_rate),
      frame_size_(frame_size),
      entries_(entries),
      codebooks_(std::move(codebooks)),
      window_(static_cast<std::size_t>(std::max(frame_size, 0)), 1.0),
      training_stats_(std::move(training_stats)),
      seed_(seed) {
  if (sample_rate_ <= 0 || frame_size_ < 1 || entries_ < 2 ||
      codebooks_.empty())
    throw Error(Errc::kInvalidArgument,
                "RVQ model needs rate > 0, d >= 1, C >= 2, K >= 1");
  const std::size_t expect = static_cast<std::size_t>(entries_) * frame_size_;
  for (const auto &book : codebooks_) {
    if (book.size() != expect)
      throw Error(Errc::kInvalidArgument, "codebook has wrong shape");
    for (double v : book)
      if (!std::isfinite(v))
        throw Error(Errc::kInvalidArgument, "non-finite codebook entry");
  }
  if (training_stats_.size() != codebooks_.size())
    training_stats_.resize(codebooks_.size(), 0.0);
  id_ = Fnv1a(Serialize());
}

std::span<const double> RvqModel::entry(int stage, int index) const {
  return codebook(stage).subspan(static_cast<std::size_t>(index) * frame_size_,
                                 static_cast<std::size_t>(frame_size_));
}

std::vector<unsigned char> RvqModel::Serialize() const {
  std::vector<unsigned char> out(kMagic, kMagic + 4);
  PutU32(&out, kVersion);
  PutU32(&out, static_cast<std::uint32_t>(sample_rate_));
  PutU32(&out, static_cast<std::uint32_t>(frame_size_));
  PutU32(&out, static_cast<std::uint32_t>(hop()));
  PutU32(&out, static_cast<std::uint32_t>(stages()));
  PutU32(&out, static_cast<std::uint32_t>(entries_));
  PutU64(&out, seed_);
  for (double w : window_) PutF64(&out, w);
  for (const auto &book : codebooks_)
    for (double v : book) PutF64(&out, v);
  for (double v : training_stats_) PutF64(&out, v);
  return out;
}

RvqModel RvqModel::Deserialize(std::span<const unsigned char> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw Error(Errc::kMalformedContainer, "not an RVQM model");
  Reader r(bytes.subspan(4));
  auto version = r.Uint(4);
  if (version != kVersion)
    throw Error(Errc::kMalformedContainer,
                "unsupported RVQM version " + std::to_string(version));
  int rate = static_cast<int>(r.Uint(4));
  int frame = static_cast<int>(r.Uint(4));
  int hop = static_cast<int>(r.Uint(4));
  int stages = static_cast<int>(r.Uint(4));
  int entries = static_cast<int>(r.Uint(4));
  std::uint64_t seed = r.Uint(8);
  if (hop != frame || frame < 1 || stages < 1 || entries < 2 ||
      static_cast<std::size_t>(stages) * entries * frame > bytes.size())
    throw Error(Errc::kMalformedContainer, "inconsistent RVQM header");
  for (int i = 0; i < frame; ++i) {
    if (r.F64() != 1.0)
      throw Error(Errc::kMalformedContainer, "unsupported analysis window");
  }
  std::vector<std::vector<double>> books(stages);
  for (auto &book : books) {
    book.resize(static_cast<std::size_t>(entries) * frame);
    for (double &v : book) v = r.F64();
  }
  std::vector<double> stats(stages);
  for (double &v : stats) v = r.F64();
  if (!r.done()) throw Error(Errc::kMalformedContainer, "trailing bytes");
  return RvqModel(rate, frame, entries, std::move(books), std::move(stats),
                  seed);
}

std::string RvqModel::ToJson() const {
  nlohmann::json j;
  j["format"] = "RVQM";
  j["version"] = kVersion;
  j["sample_rate"] = sample_rate_;
  j["frame_size"] = frame_size_;
  j["hop"] = hop();
  j["stages"] = stages();
  j["entries"] = entries_;
  j["seed"] = seed_;
  j["window"] = window_;
  j["codebooks"] = codebooks_;
  j["training_stats"] = training_stats_;
  char id[17];
  std::snprintf(id, sizeof(id), "%016llx", static_cast<unsigned long long>(id_));
  j["model_id"] = id;
  return j.dump(2);
}

void RvqModel::Save(const std::filesystem::path &path) const {
  auto bytes = Serialize();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::kIoFailure, "cannot open " + path.string());
  f.write(reinterpret_cast<const char *>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(Errc::kIoFailure, "short write to " + path.string());
}

RvqModel RvqModel::Load(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::kMissingFile, path.string());
  std::vector<unsigned char> bytes(std::istreambuf_iterator<char>(f), {});
  return Deserialize(bytes);
}

std::vector<double> FrameSignal(std::span<const double> x, int frame_size) {
  const std::size_t d = static_cast<std::size_t>(frame_size);
  if (x.empty()) return {};
  const std::size_t frames = (x.size() + d - 1) / d;
  std::vector<double> out(frames * d);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = x[i < x.size() ? i : FoldIndex(i, x.size())];
  return out;
}

RvqModel TrainRvq(const std::vector<Waveform> &corpus, int frame_size,
                  int stages, int entries, std::uint64_t seed,
                  const RvqTrainOptions &options) {
  if (frame_size < 1 || stages < 1 || entries < 2)
    throw Error(Errc::kInvalidArgument, "need frame_size >= 1, K >= 1, C >= 2");
  if (corpus.empty()) throw Error(Errc::kInsufficientData, "empty corpus");
  const int rate = corpus.front().sample_rate();
  std::vector<double> frames;
  for (const auto &w : corpus) {
    if (w.sample_rate() != rate)
      throw Error(Errc::kRateMismatch, "corpus mixes sample rates");
    auto f = FrameSignal(w.samples(), frame_size);
    frames.insert(frames.end(), f.begin(), f.end());
  }
  const std::size_t n = frames.size() / frame_size;
  if (n < 10 * static_cast<std::size_t>(entries))
    throw Error(Errc::kInsufficientData,
                std::to_string(n) + " frames < 10*C = " +
                    std::to_string(10 * entries));
  bool all_same = true;
  for (std::size_t i = 1; i < n && all_same; ++i)
    all_same = std::equal(frames.begin(), frames.begin() + frame_size,
                          frames.begin() + static_cast<std::ptrdiff_t>(i) * frame_size);
  if (all_same)
    throw Error(Errc::kDegenerateCorpus, "every training frame is identical");

  std::vector<std::vector<double>> books;
  std::vector<double> stats;
  std::vector<double> residual = frames;
  for (int s = 0; s < stages; ++s) {
    KMeansInput in{&residual, n, frame_size};
    books.push_back(KMeans(in, entries, s > 0,
                           DeriveSeed(seed, "rvq-stage-" + std::to_string(s)),
                           options));
    const auto &book = books.back();
    double energy = 0.0;
    for (std::size_t f = 0; f < n; ++f) {
      double *r = residual.data() + f * frame_size;
      std::uint32_t idx = Nearest(r, book, entries, frame_size);
      const double *e = book.data() + static_cast<std::size_t>(idx) * frame_size;
      for (int j = 0; j < frame_size; ++j) {
        r[j] -= e[j];
        energy += r[j] * r[j];
      }
    }
    stats.push_back(energy / static_cast<double>(n));
  }
  return RvqModel(rate, frame_size, entries, std::move(books), std::move(stats),
                  seed);
}

CodeSequence Encode(const RvqModel &model, const Waveform &w, int k) {
  if (w.sample_rate() != model.sample_rate())
    throw Error(Errc::kRateMismatch,
                "model is " + std::to_string(model.sample_rate()) + " Hz");
  CheckStage(model, k);
  std::vector<double> frames = FrameSignal(w.samples(), model.frame_size());
  CodeSequence codes;
  Quantize(model, &frames, k, &codes.indices);
  codes.frame_count = frames.size() / model.frame_size();
  codes.stages_used = k;
  codes.model_id = model.id();
  codes.signal_length = w.size();
  return codes;
}

Waveform Decode(const RvqModel &model, const CodeSequence &codes) {
  if (codes.model_id != model.id())
    throw Error(Errc::kModelMismatch, "codes were produced by another model");
  if (codes.stages_used < 1 || codes.stages_used > model.stages() ||
      codes.indices.size() != codes.frame_count * codes.stages_used)
    throw Error(Errc::kStageOutOfRange, "malformed code sequence");
  const int d = model.dimension();
  std::vector<double> out(codes.frame_count * d, 0.0);
  for (std::size_t f = 0; f < codes.frame_count; ++f) {
    double *dst = out.data() + f * d;
    for (int s = 0; s < codes.stages_used; ++s) {
      std::uint32_t idx = codes.at(f, s);
      if (idx >= static_cast<std::uint32_t>(model.entries()))
        throw Error(Errc::kStageOutOfRange, "code index out of range");
      auto e = model.entry(s, static_cast<int>(idx));
      for (int j = 0; j < d; ++j) dst[j] += e[j];
    }
    for (int j = 0; j < d; ++j) dst[j] /= model.window()[j];
  }
  out.resize(std::min(out.size(), codes.signal_length));
  return Waveform(std::move(out), model.sample_rate());
}

std::vector<double> FrameResidualEnergies(const RvqModel &model,
                                          const Waveform &w, int k) {
  CheckStage(model, k);
  std::vector<double> frames = FrameSignal(w.samples(), model.frame_size());
  Quantize(model, &frames, k, nullptr);
  const int d = model.dimension();
  std::vector<double> energy(frames.size() / d, 0.0);
  for (std::size_t f = 0; f < energy.size(); ++f)
    for (int j = 0; j < d; ++j) energy[f] += frames[f * d + j] * frames[f * d + j];
  return energy;
}

double BitrateFromFrameRate(double frame_rate, int k, int entries) {
  return frame_rate * k * std::log2(static_cast<double>(entries));
}

double BitrateBps(int sample_rate, int frame_size, int k, int entries) {
  // Multiply before dividing so integral results stay exact.
  return static_cast<double>(sample_rate) * k *
         std::log2(static_cast<double>(entries)) / frame_size;
}

double Bitrate(const RvqModel &model, int k) {
  CheckStage(model, k);
  return BitrateBps(model.sample_rate(), model.frame_size(), k,
                    model.entries());
}

CodecDescriptor RvqDescriptor(const RvqModel &model) {
  CodecDescriptor d;
  d.name = "rvq";
  d.kind = CodecKind::kBuiltin;
  d.native_rate = model.sample_rate();
  for (int k = 1; k <= model.stages(); ++k)
    d.bitrate_modes.push_back({"k" + std::to_string(k), Bitrate(model, k)});
  return d;
}

CodecPtr MakeRvqCodec(std::shared_ptr<const RvqModel> model) {
  return std::make_shared<RvqCodec>(std::move(model));
}

}  // namespace codec_probe
