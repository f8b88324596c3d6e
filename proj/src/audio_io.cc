// src/audio_io.cc

// Copyright 2026  The zffvad authors

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

#include "zffvad/audio_io.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "zffvad/error.h"

namespace zffvad {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(static_cast<std::uint32_t>(p[0]) |
                                    (static_cast<std::uint32_t>(p[1]) << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

}  // namespace

std::size_t ms_to_samples(double ms, int sample_rate_hz) {
  const long long n = std::llround(ms * sample_rate_hz / 1000.0);
  return n < 1 ? 1 : static_cast<std::size_t>(n);
}

SampleBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error("cannot open wav file: " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error("not a RIFF/WAVE file: " + path.string());
  }

  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_len = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      throw Error("truncated chunk '" + std::string(id, 4) + "' in " +
                  path.string());
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16) {
        throw Error("fmt chunk too short in " + path.string());
      }
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        // The codec proper lives in the first two bytes of the SubFormat
        // GUID of the extension block.
        if (chunk_len < 40) {
          throw Error("extensible fmt chunk too short in " + path.string());
        }
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len % 2);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr) {
    throw Error("missing fmt or data chunk in " + path.string());
  }
  if (channels != 1) {
    throw Error("only mono is supported, file has " +
                std::to_string(channels) + " channels: " + path.string());
  }
  if (rate == 0) {
    throw Error("zero sample rate in " + path.string());
  }

  SampleBuffer out;
  out.sample_rate_hz = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    if (data_len < 2) {
      throw Error("empty data chunk in " + path.string());
    }
    const std::size_t count = data_len / 2;
    out.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint16_t raw = read_u16(data + 2 * i);
      const std::int16_t v = static_cast<std::int16_t>(raw);
      out.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == kFormatIeeeFloat && bits == 32) {
    if (data_len < 4) {
      throw Error("empty data chunk in " + path.string());
    }
    const std::size_t count = data_len / 4;
    out.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t raw = read_u32(data + 4 * i);
      float v;
      std::memcpy(&v, &raw, 4);
      out.samples[i] = static_cast<double>(v);
    }
  } else {
    throw Error("unsupported sample format (tag " + std::to_string(format) +
                ", " + std::to_string(bits) + " bits) in " + path.string());
  }
  return out;
}

void write_wav(const SampleBuffer& buffer,
               const std::filesystem::path& path) {
  if (buffer.sample_rate_hz <= 0) {
    throw Error("cannot write wav with sample rate " +
                std::to_string(buffer.sample_rate_hz));
  }
  if (buffer.samples.empty()) {
    throw Error("cannot write empty wav: " + path.string());
  }
  const std::uint32_t rate = static_cast<std::uint32_t>(buffer.sample_rate_hz);
  const std::uint32_t data_len =
      static_cast<std::uint32_t>(buffer.samples.size() * 2);

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);  // mono
  put_u32(out, rate);
  put_u32(out, rate * 2);  // byte rate
  put_u16(out, 2);         // block align
  put_u16(out, 16);        // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_len);

  for (double v : buffer.samples) {
    double clamped = v;
    if (!(clamped > -1.0)) clamped = -1.0;  // also catches NaN
    const double max_v = 1.0 - 1.0 / 32768.0;
    if (clamped > max_v) clamped = max_v;
    const std::int16_t q =
        static_cast<std::int16_t>(std::lrint(clamped * 32768.0));
    put_u16(out, static_cast<std::uint16_t>(q));
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error("cannot open for writing: " + path.string());
  }
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) {
    throw Error("write failed: " + path.string());
  }
}

std::size_t frame_count(std::size_t len, std::size_t hop) {
  if (hop == 0) {
    throw Error("frame hop must be positive");
  }
  return (len + hop - 1) / hop;
}

std::vector<std::vector<double>> make_frames(const SampleBuffer& buffer,
                                             const FrameSpec& spec) {
  if (buffer.sample_rate_hz <= 0) {
    throw Error("framing requires a positive sample rate");
  }
  const std::size_t window = ms_to_samples(spec.window_ms, buffer.sample_rate_hz);
  const std::size_t hop = ms_to_samples(spec.hop_ms, buffer.sample_rate_hz);
  if (window < 2) {
    throw Error("frame window of " + std::to_string(window) +
                " samples is too small");
  }
  if (hop > window) {
    throw Error("frame hop (" + std::to_string(hop) +
                ") must not exceed the window (" + std::to_string(window) +
                ")");
  }
  const std::size_t len = buffer.samples.size();
  const std::size_t count = frame_count(len, hop);
  std::vector<std::vector<double>> frames(count);
  for (std::size_t f = 0; f < count; ++f) {
    frames[f].assign(window, 0.0);
    const std::size_t start = f * hop;
    const std::size_t avail = len > start ? len - start : 0;
    const std::size_t take = avail < window ? avail : window;
    for (std::size_t k = 0; k < take; ++k) {
      frames[f][k] = buffer.samples[start + k];
    }
  }
  return frames;
}

}  // namespace zffvad
