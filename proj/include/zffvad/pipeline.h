// zffvad/pipeline.h

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

#ifndef ZFFVAD_PIPELINE_H_
#define ZFFVAD_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "zffvad/audio_io.h"
#include "zffvad/zff.h"

namespace zffvad {

// Which signal feeds the per-frame entropy weight.
enum class EntropySource {
  kRawX,   // the twice-integrated signal itself
  kY0,     // the widest trend-removed channel (default)
  kInput,  // the unfiltered input
};

std::string to_string(EntropySource source);
EntropySource parse_entropy_source(const std::string& text);

struct PipelineConfig {
  double running_mean_ms = 40.0;
  double entropy_window_ms = 20.0;
  double threshold_block_ms = 300.0;
  double merge_gap_ms = 30.0;
  double min_segment_ms = 50.0;
  double entropy_floor = 1e-6;
  EntropySource entropy_source = EntropySource::kY0;
};

// Half-open time span [start_s, end_s) in seconds.
struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
};

struct SegmentList {
  std::vector<Segment> segments;  // non-overlapping, ascending
  double total_duration_s = 0.0;
};

// Threshold for samples in [begin, end).
struct ThresholdBlock {
  std::size_t begin = 0;
  std::size_t end = 0;
  double theta = 0.0;
};

// Per-sample evidence aligned to the input signal.
struct DecisionSurface {
  std::vector<double> r_c;          // normalized composite weight
  std::vector<double> inv_entropy;  // 1 / max(entropy, floor)
  std::vector<double> y_ds;         // r_c * inv_entropy
  std::vector<ThresholdBlock> thresholds;
  int sample_rate_hz = 0;

  // Thresholds repeated per sample; same length as y_ds.
  std::vector<double> expanded_thresholds() const;
};

// d[n] = y[n] * (y[n] - y[n-1]), d[0] = 0.
std::vector<double> gradient_weight(std::span<const double> y);

// Centered running mean with edge windows clipped to the signal. The
// window converts to at least one sample.
std::vector<double> running_mean(std::span<const double> d, double window_ms,
                                 int sample_rate_hz);

// Element-wise sum of the channel weights, then min-max normalized to
// [0, 1] over the utterance. A constant input maps to all zeros.
std::vector<double> composite(const std::vector<std::vector<double>>& r);

// Per-sample spectral entropy in bits: the signal is cut into
// non-overlapping windows, each window has its mean removed, and the
// magnitudes of the positive-frequency bins (DC excluded) are normalized
// into a probability vector. Every sample of a window shares its entropy.
// A window whose total magnitude falls below `floor` gets the maximum
// entropy log2(K).
std::vector<double> spectral_entropy(std::span<const double> x,
                                     double window_ms, int sample_rate_hz,
                                     double floor);

// Per-block theta = block_min + block_median / 3; the median of an
// even-length block is the mean of the two middle values. Consecutive
// blocks of `block_ms`, last one possibly short.
std::vector<ThresholdBlock> threshold_blocks(std::span<const double> y_ds,
                                             double block_ms,
                                             int sample_rate_hz);

// Builds the full surface from the filter bank: composite of the running
// means of the gradient weights, times the inverse entropy of the
// configured source signal. All sequences align to the input length.
DecisionSurface decision_surface(const ZffBank& bank, const SampleBuffer& in,
                                 const PipelineConfig& cfg);

// Marks samples with y_ds >= theta of their block as voiced and converts
// maximal voiced runs [i, j] to segments [i/rate, (j+1)/rate).
SegmentList dynamic_threshold(const DecisionSurface& surface,
                              const PipelineConfig& cfg);

// First merges adjacent segments separated by less than merge_gap_ms,
// then drops segments shorter than min_segment_ms.
SegmentList smooth(const SegmentList& segments, const PipelineConfig& cfg);

struct DetectResult {
  SegmentList segments;
  DecisionSurface surface;
};

// Whole pipeline: bank, surface, threshold, smooth.
DetectResult detect(const SampleBuffer& in, const ZffConfig& zff_cfg,
                    const PipelineConfig& cfg);

// The normalized composite weight r_c for the utterance.
std::vector<double> composite_signal(const SampleBuffer& in,
                                     const ZffConfig& zff_cfg,
                                     const PipelineConfig& cfg);

// Writes 2 * r_c - 1 as PCM16 at the input rate, one sample per input
// sample, for consumption by downstream detectors.
void export_composite(const SampleBuffer& in, const ZffConfig& zff_cfg,
                      const PipelineConfig& cfg,
                      const std::filesystem::path& path);

}  // namespace zffvad

#endif  // ZFFVAD_PIPELINE_H_
