// src/audio/wav_io.cc

// Copyright 2026  phonadv authors

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
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "phonadv/waveform.h"

namespace phonadv {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const std::string& b, std::size_t pos) {
  return static_cast<uint16_t>(static_cast<uint8_t>(b[pos]) |
                               (static_cast<uint8_t>(b[pos + 1]) << 8));
}

uint32_t ReadU32(const std::string& b, std::size_t pos) {
  return static_cast<uint32_t>(ReadU16(b, pos)) |
         (static_cast<uint32_t>(ReadU16(b, pos + 2)) << 16);
}

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void PutU32(std::string& out, uint32_t v) {
  PutU16(out, static_cast<uint16_t>(v & 0xFFFF));
  PutU16(out, static_cast<uint16_t>(v >> 16));
}

}  // namespace

Waveform ParseWav(const std::string& b) {
  if (b.size() < 12 || b.compare(0, 4, "RIFF") != 0 ||
      b.compare(8, 4, "WAVE") != 0)
    throw WavError("malformed header: not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0;
  uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::string id = b.substr(pos, 4);
    const uint32_t size = ReadU32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + size > b.size())
        throw WavError("malformed header: truncated fmt chunk");
      uint16_t format = ReadU16(b, body);
      channels = ReadU16(b, body + 2);
      rate = ReadU32(b, body + 4);
      bits = ReadU16(b, body + 14);
      if (format == kFormatExtensible && size >= 26)
        format = ReadU16(b, body + 24);  // first two bytes of the subformat GUID
      if (format != kFormatPcm)
        throw WavError("unsupported encoding: format code " +
                       std::to_string(format) + " (PCM required)");
      if (bits != 16)
        throw WavError("unsupported encoding: " + std::to_string(bits) +
                       "-bit samples (16-bit required)");
      if (channels == 0) throw WavError("malformed header: zero channels");
      if (rate == 0) throw WavError("malformed header: zero sample rate");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw WavError("malformed header: data before fmt chunk");
      const std::size_t avail = std::min<std::size_t>(size, b.size() - body);
      const std::size_t frame_bytes = 2u * channels;
      const std::size_t frames = avail / frame_bytes;
      if (frames == 0) throw WavError("empty payload");
      std::vector<double> samples(frames);
      for (std::size_t i = 0; i < frames; ++i) {
        const auto word = static_cast<int16_t>(ReadU16(b, body + i * frame_bytes));
        samples[i] = static_cast<double>(word) / 32768.0;
      }
      return Waveform(std::move(samples), static_cast<int>(rate));
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw WavError("malformed header: missing fmt chunk");
  throw WavError("empty payload: missing data chunk");
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  try {
    return ParseWav(bytes);
  } catch (const WavError& e) {
    throw WavError(path.string() + ": " + e.what());
  }
}

std::string EncodeWav(const Waveform& w) {
  const auto n = static_cast<uint32_t>(w.size());
  const uint32_t rate = static_cast<uint32_t>(w.sample_rate_hz());
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  PutU32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, rate);
  PutU32(out, rate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, 2 * n);
  for (double s : w.samples()) {
    const double scaled = std::round(s * 32768.0);
    const double clamped = std::clamp(scaled, -32768.0, 32767.0);
    PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(clamped)));
  }
  return out;
}

void WriteWav(const Waveform& w, const std::filesystem::path& path) {
  const std::string bytes = EncodeWav(w);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WavError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WavError("write failed for " + path.string());
}

}  // namespace phonadv
