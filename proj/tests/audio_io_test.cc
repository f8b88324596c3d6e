// tests/audio_io_test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "zffvad/audio_io.h"
#include "zffvad/error.h"

namespace fs = std::filesystem;
using zffvad::FrameSpec;
using zffvad::SampleBuffer;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

// Minimal canonical RIFF writer for fabricating inputs independently of
// the library's own writer.
void write_pcm16_file(const fs::path& path, const std::vector<std::int16_t>& pcm,
                      std::uint32_t rate, std::uint16_t channels) {
  std::ofstream os(path, std::ios::binary);
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(pcm.size() * sizeof(std::int16_t));
  const std::uint16_t block_align = static_cast<std::uint16_t>(2 * channels);
  const std::uint32_t byte_rate = rate * block_align;
  const std::uint32_t riff_size = 36 + data_bytes;
  const std::uint16_t fmt_pcm = 1;
  const std::uint16_t bits = 16;
  const std::uint32_t fmt_size = 16;
  os.write("RIFF", 4);
  os.write(reinterpret_cast<const char*>(&riff_size), 4);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  os.write(reinterpret_cast<const char*>(&fmt_size), 4);
  os.write(reinterpret_cast<const char*>(&fmt_pcm), 2);
  os.write(reinterpret_cast<const char*>(&channels), 2);
  os.write(reinterpret_cast<const char*>(&rate), 4);
  os.write(reinterpret_cast<const char*>(&byte_rate), 4);
  os.write(reinterpret_cast<const char*>(&block_align), 2);
  os.write(reinterpret_cast<const char*>(&bits), 2);
  os.write("data", 4);
  os.write(reinterpret_cast<const char*>(&data_bytes), 4);
  os.write(reinterpret_cast<const char*>(pcm.data()), data_bytes);
}

void write_float32_file(const fs::path& path, const std::vector<float>& data,
                        std::uint32_t rate) {
  std::ofstream os(path, std::ios::binary);
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(data.size() * sizeof(float));
  const std::uint16_t channels = 1;
  const std::uint16_t block_align = 4;
  const std::uint32_t byte_rate = rate * block_align;
  const std::uint32_t riff_size = 36 + data_bytes;
  const std::uint16_t fmt_float = 3;
  const std::uint16_t bits = 32;
  const std::uint32_t fmt_size = 16;
  os.write("RIFF", 4);
  os.write(reinterpret_cast<const char*>(&riff_size), 4);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  os.write(reinterpret_cast<const char*>(&fmt_size), 4);
  os.write(reinterpret_cast<const char*>(&fmt_float), 2);
  os.write(reinterpret_cast<const char*>(&channels), 2);
  os.write(reinterpret_cast<const char*>(&rate), 4);
  os.write(reinterpret_cast<const char*>(&byte_rate), 4);
  os.write(reinterpret_cast<const char*>(&block_align), 2);
  os.write(reinterpret_cast<const char*>(&bits), 2);
  os.write("data", 4);
  os.write(reinterpret_cast<const char*>(&data_bytes), 4);
  os.write(reinterpret_cast<const char*>(data.data()), data_bytes);
}

}  // namespace

TEST_CASE("read_wav scales PCM16 by 1/32768") {
  const fs::path path = temp_file("zffvad_pcm16_scale.wav");
  write_pcm16_file(path, {0, 16384}, 8000, 1);
  const SampleBuffer buf = zffvad::read_wav(path);
  REQUIRE(buf.samples.size() == 2);
  CHECK(buf.sample_rate_hz == 8000);
  CHECK(buf.samples[0] == 0.0);
  CHECK(buf.samples[1] == 0.5);
  fs::remove(path);
}

TEST_CASE("read_wav rejects stereo files") {
  const fs::path path = temp_file("zffvad_stereo.wav");
  write_pcm16_file(path, {0, 0, 0, 0}, 8000, 2);
  CHECK_THROWS_AS(zffvad::read_wav(path), zffvad::Error);
  fs::remove(path);
}

TEST_CASE("read_wav rejects garbage and missing files") {
  const fs::path path = temp_file("zffvad_garbage.wav");
  {
    std::ofstream os(path, std::ios::binary);
    os.write("not a wav at all", 16);
  }
  CHECK_THROWS_AS(zffvad::read_wav(path), zffvad::Error);
  fs::remove(path);
  CHECK_THROWS_AS(zffvad::read_wav(temp_file("zffvad_no_such.wav")),
                  zffvad::Error);
}

TEST_CASE("read_wav rejects empty audio payloads") {
  const fs::path path = temp_file("zffvad_empty.wav");
  write_pcm16_file(path, {}, 8000, 1);
  CHECK_THROWS_AS(zffvad::read_wav(path), zffvad::Error);
  fs::remove(path);
}

TEST_CASE("read_wav accepts mono float32") {
  const fs::path path = temp_file("zffvad_float32.wav");
  write_float32_file(path, {0.25f, -0.75f, 1.0f}, 16000);
  const SampleBuffer buf = zffvad::read_wav(path);
  REQUIRE(buf.samples.size() == 3);
  CHECK(buf.sample_rate_hz == 16000);
  CHECK(buf.samples[0] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(buf.samples[1] == doctest::Approx(-0.75).epsilon(1e-9));
  fs::remove(path);
}

TEST_CASE("write_wav emits the expected PCM payload and clamps") {
  const fs::path path = temp_file("zffvad_write_payload.wav");
  SampleBuffer buf;
  buf.sample_rate_hz = 8000;
  buf.samples = {0.0, 0.5, 2.0, -2.0};
  zffvad::write_wav(buf, path);

  std::ifstream is(path, std::ios::binary);
  std::vector<char> raw((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());
  REQUIRE(raw.size() == 44 + 8);
  const std::int16_t* pcm =
      reinterpret_cast<const std::int16_t*>(raw.data() + 44);
  CHECK(pcm[0] == 0);
  CHECK(pcm[1] == 16384);
  CHECK(pcm[2] == 32767);   // clamped to 1 - 1/32768
  CHECK(pcm[3] == -32768);  // clamped to -1
  fs::remove(path);
}

TEST_CASE("wav round-trip stays within one quantization step") {
  const fs::path path = temp_file("zffvad_roundtrip.wav");
  SampleBuffer buf;
  buf.sample_rate_hz = 8000;
  buf.samples.resize(8000);
  for (std::size_t n = 0; n < buf.samples.size(); ++n) {
    buf.samples[n] =
        0.9 * std::sin(2.0 * M_PI * 440.0 * static_cast<double>(n) / 8000.0);
  }
  zffvad::write_wav(buf, path);
  const SampleBuffer back = zffvad::read_wav(path);
  REQUIRE(back.samples.size() == buf.samples.size());
  CHECK(back.sample_rate_hz == 8000);
  double max_err = 0.0;
  for (std::size_t n = 0; n < buf.samples.size(); ++n) {
    max_err = std::max(max_err, std::fabs(back.samples[n] - buf.samples[n]));
  }
  CHECK(max_err <= 1.0 / 32768.0);
  fs::remove(path);
}

TEST_CASE("frame arithmetic and padding") {
  SampleBuffer buf;
  buf.sample_rate_hz = 1000;  // 1 ms = 1 sample
  buf.samples.assign(100, 1.0);

  SUBCASE("100 samples, window 40, hop 40 gives 3 frames, last padded") {
    const auto frames = zffvad::make_frames(buf, FrameSpec{40.0, 40.0});
    REQUIRE(frames.size() == 3);
    for (const auto& f : frames) CHECK(f.size() == 40);
    for (std::size_t i = 0; i < 20; ++i) CHECK(frames[2][i] == 1.0);
    for (std::size_t i = 20; i < 40; ++i) CHECK(frames[2][i] == 0.0);
  }

  SUBCASE("exact fit gives one frame, no padding") {
    buf.samples.assign(40, 0.5);
    const auto frames = zffvad::make_frames(buf, FrameSpec{40.0, 40.0});
    REQUIRE(frames.size() == 1);
    CHECK(frames[0].size() == 40);
    for (double v : frames[0]) CHECK(v == 0.5);
  }

  SUBCASE("energy is conserved when hop equals window") {
    buf.samples.resize(97);
    for (std::size_t n = 0; n < buf.samples.size(); ++n) {
      buf.samples[n] = std::sin(0.1 * static_cast<double>(n));
    }
    double in_energy = 0.0;
    for (double v : buf.samples) in_energy += v * v;
    const auto frames = zffvad::make_frames(buf, FrameSpec{10.0, 10.0});
    CHECK(frames.size() == 10);
    double out_energy = 0.0;
    for (const auto& f : frames)
      for (double v : f) out_energy += v * v;
    CHECK(out_energy == doctest::Approx(in_energy).epsilon(1e-12));
  }

  SUBCASE("hop larger than window is rejected") {
    CHECK_THROWS_AS(zffvad::make_frames(buf, FrameSpec{10.0, 20.0}),
                    zffvad::Error);
  }

  SUBCASE("window below two samples is rejected") {
    CHECK_THROWS_AS(zffvad::make_frames(buf, FrameSpec{1.0, 1.0}),
                    zffvad::Error);
  }
}

TEST_CASE("frame_count arithmetic") {
  CHECK(zffvad::frame_count(100, 40) == 3);
  CHECK(zffvad::frame_count(40, 40) == 1);
  CHECK(zffvad::frame_count(41, 40) == 2);
  CHECK(zffvad::frame_count(1, 40) == 1);
}

TEST_CASE("ms_to_samples rounds and clamps to one") {
  CHECK(zffvad::ms_to_samples(20.0, 8000) == 160);
  CHECK(zffvad::ms_to_samples(40.0, 8000) == 320);
  CHECK(zffvad::ms_to_samples(0.01, 8000) == 1);
  CHECK(zffvad::ms_to_samples(2.5, 1000) == 3);  // round half away from zero
}
