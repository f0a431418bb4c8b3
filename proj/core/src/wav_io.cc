// core/src/wav_io.cc

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

#include "codec_probe/wav_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "codec_probe/error.h"

namespace codec_probe {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t ReadU32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<unsigned char> *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back((v >> (8 * i)) & 0xFF);
}

void PutU16(std::vector<unsigned char> *out, std::uint16_t v) {
  out->push_back(v & 0xFF);
  out->push_back((v >> 8) & 0xFF);
}

struct ParsedWav {
  WavHeader header;
  const unsigned char *data = nullptr;
  std::size_t data_bytes = 0;
};

std::vector<unsigned char> Slurp(const std::filesystem::path &path,
                                 bool header_only) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw Error(Errc::kMissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kMissingFile, path.string());
  if (header_only) {
    // Enough for any sane fmt chunk plus a few metadata chunks.
    std::vector<unsigned char> buf(1 << 16);
    in.read(reinterpret_cast<char *>(buf.data()), buf.size());
    buf.resize(static_cast<std::size_t>(in.gcount()));
    return buf;
  }
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

ParsedWav Parse(const std::vector<unsigned char> &bytes,
                const std::filesystem::path &path, bool header_only) {
  auto malformed = [&](const std::string &why) {
    return Error(Errc::kMalformedContainer, path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw malformed("not a RIFF/WAVE file");

  ParsedWav parsed;
  bool have_fmt = false, have_data = false;
  std::uint16_t bits = 0;
  std::uint16_t block_align = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    std::uint32_t size = ReadU32(chunk + 4);
    std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size())
        throw malformed("truncated fmt chunk");
      const unsigned char *f = bytes.data() + body;
      std::uint16_t format = ReadU16(f);
      parsed.header.channels = ReadU16(f + 2);
      parsed.header.sample_rate = static_cast<int>(ReadU32(f + 4));
      block_align = ReadU16(f + 12);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw malformed("truncated extensible fmt chunk");
        format = ReadU16(f + 24);
      }
      if (format == kFormatPcm && bits == 16) {
        parsed.header.encoding = WavEncoding::kPcm16;
      } else if (format == kFormatPcm && bits == 24) {
        parsed.header.encoding = WavEncoding::kPcm24;
      } else if (format == kFormatFloat && bits == 32) {
        parsed.header.encoding = WavEncoding::kFloat32;
      } else {
        throw Error(Errc::kUnsupportedEncoding,
                    path.string() + ": format " + std::to_string(format) +
                        " with " + std::to_string(bits) + " bits");
      }
      if (parsed.header.channels != 1)
        throw Error(Errc::kMultichannelInput,
                    path.string() + ": " +
                        std::to_string(parsed.header.channels) +
                        " channels; downmix explicitly before analysis");
      if (parsed.header.sample_rate <= 0) throw malformed("zero sample rate");
      if (block_align != bits / 8) throw malformed("inconsistent block align");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw malformed("data chunk before fmt chunk");
      std::size_t available = bytes.size() - body;
      if (!header_only && size > available)
        throw malformed("truncated data chunk");
      parsed.data = bytes.data() + body;
      parsed.data_bytes = std::min<std::size_t>(size, available);
      parsed.header.frame_count = size / block_align;
      have_data = true;
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw malformed("missing fmt chunk");
  if (!have_data) throw malformed("missing data chunk");
  return parsed;
}

}  // namespace

WavHeader ReadWavHeader(const std::filesystem::path &path) {
  auto bytes = Slurp(path, true);
  return Parse(bytes, path, true).header;
}

RawAudio ReadWavRaw(const std::filesystem::path &path) {
  auto bytes = Slurp(path, false);
  ParsedWav parsed = Parse(bytes, path, false);
  RawAudio out;
  out.sample_rate = parsed.header.sample_rate;
  std::size_t n = parsed.header.frame_count;
  out.samples.resize(n);
  const unsigned char *p = parsed.data;
  switch (parsed.header.encoding) {
    case WavEncoding::kPcm16:
      for (std::size_t i = 0; i < n; ++i) {
        auto v = static_cast<std::int16_t>(ReadU16(p + 2 * i));
        out.samples[i] = v / 32768.0;
      }
      break;
    case WavEncoding::kPcm24:
      for (std::size_t i = 0; i < n; ++i) {
        const unsigned char *s = p + 3 * i;
        std::int32_t v = s[0] | (s[1] << 8) | (s[2] << 16);
        if (v & 0x800000) v -= 0x1000000;
        out.samples[i] = v / 8388608.0;
      }
      break;
    case WavEncoding::kFloat32:
      for (std::size_t i = 0; i < n; ++i)
        out.samples[i] = std::bit_cast<float>(ReadU32(p + 4 * i));
      break;
  }
  return out;
}

Waveform ReadWav(const std::filesystem::path &path) {
  RawAudio raw = ReadWavRaw(path);
  for (double s : raw.samples) {
    if (!std::isfinite(s))
      throw Error(Errc::kMalformedContainer,
                  path.string() + ": non-finite sample");
  }
  return Waveform(std::move(raw.samples), raw.sample_rate);
}

void WriteWav(const Waveform &w, const std::filesystem::path &path,
              WavEncoding encoding) {
  std::uint16_t format, bits;
  switch (encoding) {
    case WavEncoding::kPcm16: format = kFormatPcm; bits = 16; break;
    case WavEncoding::kFloat32: format = kFormatFloat; bits = 32; break;
    default:
      throw Error(Errc::kUnsupportedEncoding, "PCM-24 is read-only");
  }
  const std::uint16_t block_align = bits / 8;
  const auto data_bytes = static_cast<std::uint32_t>(w.size() * block_align);

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  for (char c : std::string("RIFF")) out.push_back(c);
  PutU32(&out, 36 + data_bytes);
  for (char c : std::string("WAVEfmt ")) out.push_back(c);
  PutU32(&out, 16);
  PutU16(&out, format);
  PutU16(&out, 1);
  PutU32(&out, static_cast<std::uint32_t>(w.sample_rate()));
  PutU32(&out, static_cast<std::uint32_t>(w.sample_rate()) * block_align);
  PutU16(&out, block_align);
  PutU16(&out, bits);
  for (char c : std::string("data")) out.push_back(c);
  PutU32(&out, data_bytes);
  for (double s : w.samples()) {
    if (encoding == WavEncoding::kPcm16) {
      // std::round is half-away-from-zero.
      double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      PutU16(&out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      PutU32(&out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::kIoFailure, "cannot open " + path.string());
  f.write(reinterpret_cast<const char *>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(Errc::kIoFailure, "short write to " + path.string());
}

}  // namespace codec_probe
