// tests/unit/codec_test.cc

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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>

#include "codec_probe/codec.h"
#include "codec_probe/error.h"
#include "codec_probe/perturb.h"
#include "codec_probe/wav_io.h"
#include "doctest.h"
#include "oracles.h"
#include "test_util.h"

using namespace codec_probe;
using testutil::CodeOf;
using testutil::TempDir;

namespace {

const std::string kMode(kDefaultMode);

// Samples rounded to float so they survive the float-32 exchange format.
Waveform FloatNoise(std::size_t n, int rate, std::uint64_t seed, double scale) {
  std::vector<double> x = testutil::Gaussian(n, seed);
  for (double &v : x) v = static_cast<float>(scale * v);
  return Waveform(std::move(x), rate);
}

CodecDescriptor External(const std::string &command, int rate = 16000) {
  CodecDescriptor d;
  d.name = "ext";
  d.kind = CodecKind::kExternal;
  d.native_rate = rate;
  d.command_template = command;
  d.timeout_seconds = 30.0;
  d.bitrate_modes = {{"low", 1000.0}, {"high", 2000.0}};
  return d;
}

// Points CODEC_PROBE_TMPDIR at a fresh directory for one test.
class ExchangeDir {
 public:
  ExchangeDir() { ::setenv("CODEC_PROBE_TMPDIR", dir_.path().c_str(), 1); }
  ~ExchangeDir() { ::unsetenv("CODEC_PROBE_TMPDIR"); }
  bool Empty() const { return std::filesystem::is_empty(dir_.path()); }
  const std::filesystem::path &path() const { return dir_.path(); }

 private:
  TempDir dir_;
};

}  // namespace

TEST_CASE("catalog lists the reference codecs") {
  std::vector<CodecDescriptor> cat = BuiltinCatalog(16000);
  std::vector<std::string> names;
  for (const auto &d : cat) {
    names.push_back(d.name);
    CHECK(d.kind == CodecKind::kBuiltin);
    CHECK(d.native_rate == 16000);
    CHECK(!d.bitrate_modes.empty());
  }
  for (const char *n : {"identity", "mulaw-4", "mulaw-6", "mulaw-8",
                        "hardclip-0.1", "hardclip-0.5", "gain-0.5", "movavg-2"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  CHECK(std::find(names.begin(), names.end(), "rvq") == names.end());

  for (const auto &d : BuiltinCatalog(24000))
    if (d.name == "mulaw-8")
      CHECK(d.FindMode(kMode)->bits_per_second == 24000.0 * 8);
  CHECK(CodeOf([] { MakeBuiltinCodec("opus"); }) == Errc::kInvalidArgument);
  CHECK(CodeOf([] { MakeBuiltinCodec("rvq"); }) == Errc::kInvalidArgument);
}

TEST_CASE("identity is exact") {
  CodecPtr id = MakeBuiltinCodec("identity");
  Waveform w(testutil::Gaussian(1000, 1), 16000);
  CHECK(id->Process(w, kMode).data() == w.data());
}

TEST_CASE("process checks rate, mode and finiteness") {
  CodecPtr id = MakeBuiltinCodec("identity");
  Waveform w8k(std::vector<double>(10, 0.1), 8000);
  CHECK(CodeOf([&] { id->Process(w8k, kMode); }) == Errc::kRateMismatch);
  Waveform w(std::vector<double>(10, 0.1), 16000);
  CHECK(CodeOf([&] { id->Process(w, "k9"); }) == Errc::kUnknownMode);
}

TEST_CASE("mulaw matches the textbook quantizer") {
  for (int bits : {4, 6, 8}) {
    CAPTURE(bits);
    for (int i = -2000; i <= 2000; ++i) {
      const double x = i / 1000.0;  // includes out-of-range inputs
      CHECK(MulawRoundTrip(x, bits) ==
            doctest::Approx(oracle::Mulaw(x, bits)).epsilon(1e-12));
    }
  }
  CodecPtr m8 = MakeBuiltinCodec("mulaw-8");
  Waveform zeros(std::vector<double>(64, 0.0), 16000);
  CHECK(m8->Process(zeros, kMode).data() == zeros.data());
}

TEST_CASE("mulaw error on a unit sine") {
  CodecPtr m8 = MakeBuiltinCodec("mulaw-8");
  Waveform s = GenSine(1000.0, 0.05, 16000, 1.0, 0.0);
  Waveform out = m8->Process(s, kMode);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double expected = oracle::Mulaw(s[i], 8);
    CHECK(out[i] == doctest::Approx(expected).epsilon(1e-12));
    worst = std::max(worst, std::abs(out[i] - s[i]));
  }
  CHECK(worst < 0.04);
}

TEST_CASE("mulaw is idempotent") {
  for (const char *name : {"mulaw-4", "mulaw-6", "mulaw-8"}) {
    CAPTURE(name);
    CodecPtr m = MakeBuiltinCodec(name);
    Waveform w(testutil::Gaussian(4000, 3), 16000);
    Waveform once = m->Process(w, kMode);
    CHECK(m->Process(once, kMode).data() == once.data());
  }
}

TEST_CASE("hardclip clamps and is homogeneous below threshold") {
  CodecPtr clip = MakeBuiltinCodec("hardclip-0.5");
  Waveform c(std::vector<double>(16, 0.8), 16000);
  CHECK(clip->Process(c, kMode).data() == std::vector<double>(16, 0.5));
  Waveform n(std::vector<double>(16, -0.8), 16000);
  CHECK(clip->Process(n, kMode).data() == std::vector<double>(16, -0.5));

  // Peak 0.25, scaled by at most 2: never reaches 0.5.
  std::vector<double> x = testutil::Gaussian(2000, 4);
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  for (double &v : x) v *= 0.25 / peak;
  Waveform w(x, 16000);
  for (double alpha : {0.1, 0.5, 2.0}) {
    Waveform lhs = clip->Process(w.Scaled(alpha), kMode);
    Waveform rhs = clip->Process(w, kMode).Scaled(alpha);
    CHECK(lhs.data() == rhs.data());
  }
  Waveform big = clip->Process(w.Scaled(4.0), kMode);
  CHECK(big.data() != clip->Process(w, kMode).Scaled(4.0).data());
}

TEST_CASE("gain and moving average builtins") {
  Waveform w({1.0, -0.5, 0.25, 0.0}, 16000);
  CHECK(MakeBuiltinCodec("gain-0.5")->Process(w, kMode).data() ==
        std::vector<double>{0.5, -0.25, 0.125, 0.0});
  CHECK(MakeBuiltinCodec("movavg-2")->Process(w, kMode).data() ==
        std::vector<double>{0.5, 0.25, -0.125, 0.125});
}

TEST_CASE("builtins are repeatable") {
  Waveform w(testutil::Gaussian(500, 5), 16000);
  for (const auto &d : BuiltinCatalog())
    CHECK(IsRepeatable(*MakeBuiltinCodec(d.name), w, kMode));
}

TEST_CASE("external copy codec returns its input") {
  ExchangeDir xdir;
  CodecPtr cp = MakeExternalCodec(External("cp {input} {output}"));
  Waveform w = FloatNoise(3000, 16000, 6, 0.3);
  CHECK(cp->Process(w, "low").data() == w.data());
  CHECK(cp->descriptor().kind == CodecKind::kExternal);
  CHECK(xdir.Empty());
  CHECK(IsRepeatable(*cp, w, "high"));
}

TEST_CASE("external mode reaches the command") {
  ExchangeDir xdir;
  TempDir out;
  const auto marker = out / "mode.txt";
  CodecPtr c = MakeExternalCodec(External(
      "printf '%s %s' {mode} \"$CODEC_PROBE_MODE\" > " + marker.string() +
      " && cp {input} {output}"));
  Waveform w = FloatNoise(100, 16000, 7, 0.1);
  c->Process(w, "high");
  CHECK(testutil::ReadFile(marker) == "high high");
  CHECK(CodeOf([&] { c->Process(w, "medium"); }) == Errc::kUnknownMode);
}

TEST_CASE("external failures map to error classes") {
  ExchangeDir xdir;
  Waveform w = FloatNoise(100, 16000, 8, 0.1);

  CodecPtr crash =
      MakeExternalCodec(External("echo 'bad model file' >&2; exit 3"));
  try {
    crash->Process(w, "low");
    FAIL("expected a crash");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::kCodecCrashed);
    CHECK(std::string(e.what()).find("bad model file") != std::string::npos);
  }

  CodecDescriptor slow = External("sleep 5; cp {input} {output}");
  slow.timeout_seconds = 0.3;
  CHECK(CodeOf([&] { MakeExternalCodec(slow)->Process(w, "low"); }) ==
        Errc::kTimeout);

  CHECK(CodeOf([&] {
          MakeExternalCodec(External("/nonexistent/codec {input} {output}"))
              ->Process(w, "low");
        }) == Errc::kSpawnFailure);

  CHECK(CodeOf([&] {
          MakeExternalCodec(External("true"))->Process(w, "low");
        }) == Errc::kMalformedOutput);
  CHECK(CodeOf([&] {
          MakeExternalCodec(External("echo junk > {output}"))
              ->Process(w, "low");
        }) == Errc::kMalformedOutput);

  // Output at the wrong rate.
  TempDir other;
  WriteWav(Waveform(w.data(), 8000), other / "8k.wav", WavEncoding::kFloat32);
  CHECK(CodeOf([&] {
          MakeExternalCodec(External("cp " + (other / "8k.wav").string() +
                                     " {output}"))
              ->Process(w, "low");
        }) == Errc::kMalformedOutput);

  // Non-finite samples in the output.
  Waveform nan_free(std::vector<double>(4, 0.0), 16000);
  std::vector<std::uint8_t> bytes(16);
  const float vals[4] = {0.0f, NAN, 1.0f, 0.0f};
  std::memcpy(bytes.data(), vals, 16);
  testutil::WriteRawWav(other / "nan.wav", 3, 1, 16000, 32, bytes);
  CHECK(CodeOf([&] {
          MakeExternalCodec(External("cp " + (other / "nan.wav").string() +
                                     " {output}"))
              ->Process(nan_free, "low");
        }) == Errc::kNonFiniteOutput);

  CHECK(xdir.Empty());
  CHECK(CodeOf([] { MakeExternalCodec(External("")); }) ==
        Errc::kInvalidArgument);
}

TEST_CASE("nondeterministic externals are detected") {
  ExchangeDir xdir;
  TempDir state;
  const std::string counter = (state / "n").string();
  // Appends one extra sample per call, so consecutive outputs differ.
  const std::string gen =
      "echo x >> " + counter + "; n=$(wc -l < " + counter + "); " +
      testutil::ProbeBinary().string() +
      " codec --name gain-0.5 --input {input} --output {output} "
      "--mode default; [ \"$n\" = 1 ] || cp {input} {output}";
  CodecDescriptor d = External(gen);
  d.bitrate_modes = {{kMode, 0.0}};
  Waveform w = FloatNoise(200, 16000, 9, 0.2);
  CHECK_FALSE(IsRepeatable(*MakeExternalCodec(d), w, kMode));
}

TEST_CASE("builtin mulaw wrapped as an external command") {
  ExchangeDir xdir;
  CodecDescriptor d = External(testutil::ProbeBinary().string() +
                               " codec --name mulaw-8 --input {input} "
                               "--output {output}");
  d.bitrate_modes = {{kMode, 128000.0}};
  CodecPtr ext = MakeExternalCodec(d);
  CodecPtr builtin = MakeBuiltinCodec("mulaw-8");
  Waveform w = FloatNoise(4000, 16000, 10, 0.3);
  Waveform a = ext->Process(w, kMode);
  Waveform b = builtin->Process(w, kMode);
  REQUIRE(a.size() == b.size());
  // The exchange format is float 32, so compare after that rounding.
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == static_cast<double>(static_cast<float>(b[i])));
}
