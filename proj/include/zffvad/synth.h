// zffvad/synth.h

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

#ifndef ZFFVAD_SYNTH_H_
#define ZFFVAD_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zffvad/audio_io.h"
#include "zffvad/eval.h"
#include "zffvad/pipeline.h"

namespace zffvad {

enum class NoiseKind {
  kWhite,
  kBabble,  // sum of detuned pulse trains, a crowd-of-voices surrogate
  kPink,
};

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& text);

// One synthetic utterance: voiced bursts over silence, optionally mixed
// with noise at an exact signal-to-noise ratio.
struct SynthSpec {
  std::vector<Segment> bursts;  // non-overlapping, inside [0, duration_s]
  double f0_hz = 120.0;
  std::optional<double> snr_db;  // no value = clean
  NoiseKind noise = NoiseKind::kWhite;
  double duration_s = 3.0;
  std::uint64_t seed = 0;
  int sample_rate_hz = 8000;
};

struct SynthResult {
  SampleBuffer audio;
  FrameLabels labels;  // 10 ms grid derived from the burst layout
};

// Voiced bursts are impulse trains at f0 shaped by a fixed two-resonance
// vocal-tract filter, faded in and out with 10 ms raised-cosine ramps.
// When snr_db is set, noise spans the whole file and is scaled so that
// 10*log10(P_speech / P_noise) equals snr_db exactly, with P_speech
// measured over the burst regions only. The same seed always reproduces
// the same buffer bit for bit. Overlapping, unordered, or out-of-range
// bursts raise Error.
SynthResult synthesize(const SynthSpec& spec);

}  // namespace zffvad

#endif  // ZFFVAD_SYNTH_H_
