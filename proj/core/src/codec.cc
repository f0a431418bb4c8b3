// core/src/codec.cc

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

#include "codec_probe/codec.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "codec_probe/error.h"
#include "codec_probe/rvq.h"

namespace codec_probe {

const BitrateMode *CodecDescriptor::FindMode(std::string_view id) const {
  for (const auto &m : bitrate_modes) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

Waveform Codec::Process(const Waveform &w, std::string_view mode) const {
  if (w.sample_rate() != descriptor_.native_rate)
    throw Error(Errc::kRateMismatch,
                descriptor_.name + " expects " +
                    std::to_string(descriptor_.native_rate) + " Hz, got " +
                    std::to_string(w.sample_rate()));
  const BitrateMode *m = descriptor_.FindMode(mode);
  if (m == nullptr)
    throw Error(Errc::kUnknownMode,
                descriptor_.name + " has no mode '" + std::string(mode) + "'");
  std::vector<double> out = Run(w, *m);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i]))
      throw Error(Errc::kNonFiniteOutput,
                  descriptor_.name + " produced a non-finite sample at " +
                      std::to_string(i));
  }
  return Waveform(std::move(out), descriptor_.native_rate);
}

bool IsRepeatable(const Codec &codec, const Waveform &w,
                  std::string_view mode) {
  return codec.Process(w, mode) == codec.Process(w, mode);
}

double MulawRoundTrip(double x, int bits) {
  const double mu = std::ldexp(1.0, bits) - 1.0;
  const double levels = std::ldexp(1.0, bits - 1) - 1.0;
  const double log1pmu = std::log1p(mu);
  x = std::clamp(x, -1.0, 1.0);
  const double mag = std::abs(x);
  const double y = std::log1p(mu * mag) / log1pmu;
  const double q = std::round(y * levels);
  if (q == 0.0) return 0.0;
  const double decoded = std::expm1(q / levels * log1pmu) / mu;
  return x < 0.0 ? -decoded : decoded;
}

namespace {

CodecDescriptor SingleMode(std::string name, int rate, double bits_per_sample) {
  CodecDescriptor d;
  d.name = std::move(name);
  d.kind = CodecKind::kBuiltin;
  d.native_rate = rate;
  d.bitrate_modes.push_back(
      {std::string(kDefaultMode), static_cast<double>(rate) * bits_per_sample});
  return d;
}

std::string Trimmed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

class IdentityCodec : public Codec {
 public:
  explicit IdentityCodec(int rate) : Codec(SingleMode("identity", rate, 32)) {}

 private:
  std::vector<double> Run(const Waveform &w, const BitrateMode &) const override {
    return w.data();
  }
};

class MulawCodec : public Codec {
 public:
  MulawCodec(int rate, int bits)
      : Codec(SingleMode("mulaw-" + std::to_string(bits), rate, bits)),
        bits_(bits) {}

 private:
  std::vector<double> Run(const Waveform &w, const BitrateMode &) const override {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = MulawRoundTrip(w[i], bits_);
    return out;
  }
  int bits_;
};

class HardClipCodec : public Codec {
 public:
  HardClipCodec(int rate, double threshold)
      : Codec(SingleMode("hardclip-" + Trimmed(threshold), rate, 32)),
        threshold_(threshold) {}

 private:
  std::vector<double> Run(const Waveform &w, const BitrateMode &) const override {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::clamp(w[i], -threshold_, threshold_);
    return out;
  }
  double threshold_;
};

class GainCodec : public Codec {
 public:
  GainCodec(int rate, double gain)
      : Codec(SingleMode("gain-" + Trimmed(gain), rate, 32)), gain_(gain) {}

 private:
  std::vector<double> Run(const Waveform &w, const BitrateMode &) const override {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = gain_ * w[i];
    return out;
  }
  double gain_;
};

// y[n] = (x[n] + x[n-1]) / 2, |H(f)| = |cos(pi f / fs)|. The LTI reference.
class MovingAverageCodec : public Codec {
 public:
  explicit MovingAverageCodec(int rate)
      : Codec(SingleMode("movavg-2", rate, 32)) {}

 private:
  std::vector<double> Run(const Waveform &w, const BitrateMode &) const override {
    std::vector<double> out(w.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = 0.5 * (w[i] + prev);
      prev = w[i];
    }
    return out;
  }
};

constexpr int kMulawBits[] = {4, 6, 8};
constexpr double kClipThresholds[] = {0.1, 0.5};

}  // namespace

std::vector<CodecDescriptor> BuiltinCatalog(int native_rate,
                                            const RvqModel *rvq) {
  std::vector<CodecDescriptor> out;
  out.push_back(IdentityCodec(native_rate).descriptor());
  for (int bits : kMulawBits)
    out.push_back(MulawCodec(native_rate, bits).descriptor());
  for (double t : kClipThresholds)
    out.push_back(HardClipCodec(native_rate, t).descriptor());
  out.push_back(GainCodec(native_rate, 0.5).descriptor());
  out.push_back(MovingAverageCodec(native_rate).descriptor());
  if (rvq != nullptr) out.push_back(RvqDescriptor(*rvq));
  return out;
}

CodecPtr MakeBuiltinCodec(std::string_view name, int native_rate,
                          std::shared_ptr<const RvqModel> rvq) {
  if (name == "identity") return std::make_shared<IdentityCodec>(native_rate);
  for (int bits : kMulawBits) {
    if (name == "mulaw-" + std::to_string(bits))
      return std::make_shared<MulawCodec>(native_rate, bits);
  }
  for (double t : kClipThresholds) {
    if (name == "hardclip-" + Trimmed(t))
      return std::make_shared<HardClipCodec>(native_rate, t);
  }
  if (name == "gain-0.5") return std::make_shared<GainCodec>(native_rate, 0.5);
  if (name == "movavg-2") return std::make_shared<MovingAverageCodec>(native_rate);
  if (name == "rvq") {
    if (!rvq)
      throw Error(Errc::kInvalidArgument, "rvq codec needs a trained model");
    return MakeRvqCodec(std::move(rvq));
  }
  throw Error(Errc::kInvalidArgument,
              "unknown builtin codec '" + std::string(name) + "'");
}

}  // namespace codec_probe
