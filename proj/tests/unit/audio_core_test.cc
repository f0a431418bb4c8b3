// tests/unit/audio_core_test.cc

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

#include <cmath>
#include <numbers>

#include "codec_probe/error.h"
#include "codec_probe/fft.h"
#include "codec_probe/signal.h"
#include "codec_probe/wav_io.h"
#include "codec_probe/waveform.h"
#include "doctest.h"
#include "oracles.h"
#include "test_util.h"

using namespace codec_probe;
using testutil::CodeOf;
using testutil::TempDir;

namespace {

Waveform Sine(double freq, std::size_t n, int rate, double amp = 1.0,
              double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / rate + phase);
  return Waveform(std::move(x), rate);
}

}  // namespace

TEST_CASE("waveform rejects bad rates and non-finite samples") {
  CHECK(CodeOf([] { Waveform({0.0}, 0); }) == Errc::kInvalidArgument);
  CHECK(CodeOf([] { Waveform({0.0, NAN}, 16000); }) == Errc::kInvalidArgument);
  CHECK(CodeOf([] { Waveform({INFINITY}, 16000); }) == Errc::kInvalidArgument);
  Waveform w({0.0, 0.5, -0.5, 0.25}, 8000);
  CHECK(w.duration_seconds() == doctest::Approx(4.0 / 8000));
  CHECK(w.Slice(1, 2).data() == std::vector<double>{0.5, -0.5});
  CHECK(w.Slice(3, 10).size() == 1);
  CHECK(w.Scaled(2.0)[1] == 1.0);
}

TEST_CASE("add truncates to the shorter operand and checks rates") {
  Waveform a({1.0, 2.0, 3.0}, 100), b({0.5, 0.5}, 100), c({0.0}, 200);
  CHECK(Add(a, b).data() == std::vector<double>{1.5, 2.5});
  CHECK(CodeOf([&] { Add(a, c); }) == Errc::kRateMismatch);
}

TEST_CASE("pcm16 samples scale by 2^15") {
  TempDir dir;
  testutil::WriteRawWav(dir / "a.wav", 1, 1, 16000, 16,
                        testutil::Pcm16Bytes({0, 16384, -32768}));
  Waveform w = ReadWav(dir / "a.wav");
  CHECK(w.sample_rate() == 16000);
  CHECK(w.data() == std::vector<double>{0.0, 0.5, -1.0});
}

TEST_CASE("pcm24 and float32 decode, extensible headers included") {
  TempDir dir;
  // 24-bit: 0x400000 = 0.5, 0xC00000 = -0.5
  testutil::WriteRawWav(dir / "p24.wav", 1, 1, 8000, 24,
                        {0x00, 0x00, 0x40, 0x00, 0x00, 0xC0});
  CHECK(ReadWav(dir / "p24.wav").data() == std::vector<double>{0.5, -0.5});
  float q = 0.25f;
  std::vector<std::uint8_t> bytes(4);
  std::memcpy(bytes.data(), &q, 4);
  testutil::WriteRawWav(dir / "f.wav", 3, 1, 8000, 32, bytes);
  CHECK(ReadWav(dir / "f.wav").data() == std::vector<double>{0.25});
  testutil::WriteRawWav(dir / "fx.wav", 3, 1, 8000, 32, bytes, true);
  CHECK(ReadWav(dir / "fx.wav").data() == std::vector<double>{0.25});
  CHECK(ReadWavHeader(dir / "fx.wav").encoding == WavEncoding::kFloat32);
}

TEST_CASE("wav error classes") {
  TempDir dir;
  CHECK(CodeOf([&] { ReadWav(dir / "missing.wav"); }) == Errc::kMissingFile);
  testutil::WriteRawWav(dir / "st.wav", 1, 2, 16000, 16,
                        testutil::Pcm16Bytes({0, 0}));
  CHECK(CodeOf([&] { ReadWav(dir / "st.wav"); }) == Errc::kMultichannelInput);
  testutil::WriteRawWav(dir / "u8.wav", 1, 1, 16000, 8, {0x80});
  CHECK(CodeOf([&] { ReadWav(dir / "u8.wav"); }) == Errc::kUnsupportedEncoding);
  {
    std::ofstream f(dir / "junk.wav", std::ios::binary);
    f << "RIFX1234WAVEjunk";
  }
  CHECK(CodeOf([&] { ReadWav(dir / "junk.wav"); }) == Errc::kMalformedContainer);
  float nan = NAN;
  std::vector<std::uint8_t> bytes(4);
  std::memcpy(bytes.data(), &nan, 4);
  testutil::WriteRawWav(dir / "nan.wav", 3, 1, 8000, 32, bytes);
  CHECK(CodeOf([&] { ReadWav(dir / "nan.wav"); }) == Errc::kMalformedContainer);
  CHECK(ReadWavRaw(dir / "nan.wav").samples.size() == 1);
  CHECK(CodeOf([&] {
          WriteWav(Waveform({0.0}, 8000), dir / "no" / "such" / "dir.wav",
                   WavEncoding::kFloat32);
        }) == Errc::kIoFailure);
  CHECK(CodeOf([&] {
          WriteWav(Waveform({0.0}, 8000), dir / "p24out.wav", WavEncoding::kPcm24);
        }) == Errc::kUnsupportedEncoding);
}

TEST_CASE("float32 write of a zero is one zero data word") {
  TempDir dir;
  WriteWav(Waveform({0.0}, 16000), dir / "z.wav", WavEncoding::kFloat32);
  const std::string bytes = testutil::ReadFile(dir / "z.wav");
  const auto pos = bytes.find("data");
  REQUIRE(pos != std::string::npos);
  CHECK(bytes.size() == pos + 8 + 4);
  CHECK(bytes.substr(pos + 4, 8) == std::string("\x04\0\0\0\0\0\0\0", 8));
}

TEST_CASE("pcm16 write saturates and rounds half away from zero") {
  TempDir dir;
  const double half = 0.5 / 32768.0;
  WriteWav(Waveform({1.5, -1.5, half, -half, 1.5 * half * 2, 0.999999}, 8000),
           dir / "s.wav", WavEncoding::kPcm16);
  const auto r = ReadWav(dir / "s.wav").data();
  CHECK(r[0] == 32767.0 / 32768.0);
  CHECK(r[1] == -1.0);
  CHECK(r[2] == 1.0 / 32768.0);
  CHECK(r[3] == -1.0 / 32768.0);
  CHECK(r[4] == 2.0 / 32768.0);  // 1.5 LSB rounds to 2
  CHECK(r[5] == 32767.0 / 32768.0);
}

TEST_CASE("float32 round trip is bit-exact for float-representable samples") {
  TempDir dir;
  // 1000 seeded noise samples, first rounded to float so the file can hold
  // them exactly.
  auto x = testutil::Gaussian(1000, 11, 0.3);
  for (auto &v : x) v = static_cast<float>(v);
  Waveform w(x, 22050);
  WriteWav(w, dir / "n.wav", WavEncoding::kFloat32);
  Waveform r = ReadWav(dir / "n.wav");
  CHECK(r == w);
  double max_err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    max_err = std::max(max_err, std::abs(r[i] - x[i]));
  CHECK(max_err == 0.0);
}

TEST_CASE("resample length rule and identity case") {
  Waveform w = testutil::Noise(1001, 16000, 3);
  CHECK(Resample(w, 16000) == w);
  CHECK(Resample(w, 24000).size() == 1502);  // round(1501.5) half up
  CHECK(Resample(w, 8000).size() == 501);    // round(500.5)
  CHECK(Resample(w, 44100).size() ==
        static_cast<std::size_t>(std::llround(1001.0 * 44100 / 16000)));
  CHECK(Resample(w, 24000).sample_rate() == 24000);
}

TEST_CASE("resample preserves DC") {
  Waveform dc(std::vector<double>(4000, 0.5), 16000);
  for (int rate : {24000, 8000, 44100}) {
    Waveform r = Resample(dc, rate);
    for (std::size_t i = 0; i < r.size(); ++i)
      REQUIRE(std::abs(r[i] - 0.5) < 1e-3);
  }
}

TEST_CASE("resampled 1 kHz tone peaks at 1 kHz") {
  Waveform s = Sine(1000.0, 16000, 16000);
  Waveform r = Resample(s, 24000);
  REQUIRE(r.size() == 24000);
  RealFft fft(r.size());
  auto spec = fft.Forward(r.samples());
  std::size_t peak = 0;
  for (std::size_t k = 1; k < spec.size(); ++k)
    if (std::abs(spec[k]) > std::abs(spec[peak])) peak = k;
  const double bin_hz = 24000.0 / r.size();
  CHECK(std::abs(peak * bin_hz - 1000.0) <= bin_hz);
}

TEST_CASE("resample round trip through twice the rate") {
  // Band-limited content below 0.4 r.
  const int r = 8000;
  std::vector<double> x(4000, 0.0);
  for (double f : {300.0, 1100.0, 2300.0, 3100.0})
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += 0.2 * std::sin(2.0 * std::numbers::pi * f * i / r + f);
  Waveform w(x, r);
  Waveform back = Resample(Resample(w, 2 * r), r);
  REQUIRE(back.size() == w.size());
  // Edge samples see one-sided kernels; the interior carries the property.
  double max_err = 0.0;
  for (std::size_t i = 64; i + 64 < w.size(); ++i)
    max_err = std::max(max_err, std::abs(back[i] - w[i]));
  CHECK(max_err < 1e-2);
}

TEST_CASE("rms closed forms and scaling") {
  CHECK(Rms(Waveform(std::vector<double>(10, 0.0), 100)) == 0.0);
  CHECK(Rms(Waveform(std::vector<double>(10, 0.5), 100)) == doctest::Approx(0.5));
  CHECK(std::abs(Rms(Sine(100.0, 16000, 16000)) - 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK_THROWS_AS(Rms(Waveform({}, 100)), Error);
  Waveform w = testutil::Noise(999, 16000, 5);
  for (double a : {-3.0, 0.001, 7.5}) {
    const double lhs = Rms(w.Scaled(a)), rhs = std::abs(a) * Rms(w);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
  }
}

TEST_CASE("align identical signals and a known delay") {
  Waveform ref = testutil::Noise(8000, 16000, 21);
  AlignResult same = Align(ref, ref, 0.1);
  CHECK(same.lag == 0);
  CHECK(same.ref.size() == ref.size());
  CHECK(same.test.size() == ref.size());

  std::vector<double> delayed(160, 0.0);
  delayed.insert(delayed.end(), ref.data().begin(), ref.data().end());
  AlignResult a = Align(ref, Waveform(delayed, 16000), 0.1);
  CHECK(a.lag == 160);
  CHECK(a.ref.size() == a.test.size());
  CHECK(a.ref == a.test);

  // Advanced test signal: negative lag.
  AlignResult b = Align(Waveform(delayed, 16000), ref, 0.1);
  CHECK(b.lag == -160);
}

TEST_CASE("align is shift-equivariant") {
  Waveform ref = testutil::Noise(4000, 16000, 8);
  Waveform test = Add(ref, testutil::Noise(4000, 16000, 9, 0.05));
  const auto base = Align(ref, test, 0.05).lag;
  for (std::size_t d : {1u, 17u, 300u}) {
    std::vector<double> x(d, 0.0);
    x.insert(x.end(), test.data().begin(), test.data().end());
    CHECK(Align(ref, Waveform(x, 16000), 0.05).lag == base + static_cast<int>(d));
  }
}

TEST_CASE("align under 0 dB noise stays within 4 samples (100 seeds)") {
  int worst = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Waveform ref = testutil::Noise(4000, 16000, 1000 + seed);
    Waveform noisy = Add(ref, testutil::Noise(4000, 16000, 5000 + seed));
    worst = std::max<int>(worst, std::abs(Align(ref, noisy, 0.1).lag));
  }
  CHECK(worst <= 4);
}

TEST_CASE("align error classes") {
  Waveform a({1.0, 2.0}, 16000), b({1.0}, 8000);
  CHECK(CodeOf([&] { Align(a, b, 0.1); }) == Errc::kRateMismatch);
  CHECK(CodeOf([&] { Align(a, Waveform({}, 16000), 0.1); }) == Errc::kEmptyOverlap);
}

TEST_CASE("fft wrapper matches direct DFT") {
  auto x = testutil::Gaussian(96, 4);
  RealFft fft(96);
  auto spec = fft.Forward(x);
  const auto power = oracle::DftPower(x);
  for (std::size_t k = 0; k < spec.size(); ++k)
    CHECK(std::norm(spec[k]) == doctest::Approx(power[k]).epsilon(1e-10));
  auto back = fft.Inverse(spec);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(back[i] / 96.0 == doctest::Approx(x[i]).epsilon(1e-12));
  auto conv = FftConvolve(std::vector<double>{1, 2, 3}, std::vector<double>{0, 1});
  REQUIRE(conv.size() == 4);
  CHECK(conv[0] == doctest::Approx(0.0));
  CHECK(conv[1] == doctest::Approx(1.0));
  CHECK(conv[3] == doctest::Approx(3.0));
}
