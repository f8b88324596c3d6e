// zffvad/audio_io.h

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

#ifndef ZFFVAD_AUDIO_IO_H_
#define ZFFVAD_AUDIO_IO_H_

#include <cstddef>
#include <filesystem>
#include <vector>

namespace zffvad {

// Mono audio held as doubles in [-1, 1].
struct SampleBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 0;

  double duration_s() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

// Frame geometry in milliseconds; conversion to samples rounds to nearest
// and clamps to at least one sample.
struct FrameSpec {
  double window_ms = 20.0;
  double hop_ms = 20.0;
};

// Converts a duration to samples: round(ms * rate / 1000), at least 1.
std::size_t ms_to_samples(double ms, int sample_rate_hz);

// Reads a RIFF/WAVE file. Accepts mono PCM16 and mono IEEE float32; any
// other layout (stereo, other codecs, truncated chunks) raises Error.
// PCM16 samples are scaled by 1/32768. No resampling is performed.
SampleBuffer read_wav(const std::filesystem::path& path);

// Writes mono PCM16. Samples are clamped to [-1, 1 - 1/32768] before
// quantization, so out-of-range inputs saturate instead of wrapping.
void write_wav(const SampleBuffer& buffer, const std::filesystem::path& path);

// Number of frames produced for a signal of `len` samples: one frame per
// hop start, ceil(len / hop).
std::size_t frame_count(std::size_t len, std::size_t hop);

// Splits the buffer into frames of `window_ms` every `hop_ms`. The last
// frame is zero-padded to the full window. Requires 0 < hop <= window.
std::vector<std::vector<double>> make_frames(const SampleBuffer& buffer,
                                             const FrameSpec& spec);

}  // namespace zffvad

#endif  // ZFFVAD_AUDIO_IO_H_
