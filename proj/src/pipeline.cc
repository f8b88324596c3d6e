// src/pipeline.cc

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

#include "zffvad/pipeline.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <string>
#include <vector>

#include "zffvad/error.h"

namespace zffvad {

namespace {

// FFTW's planner mutates global state; executing a created plan is
// thread-safe as long as each thread owns its buffers.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void validate_pipeline_config(const PipelineConfig& cfg) {
  if (!(cfg.running_mean_ms > 0.0)) {
    throw Error("running_mean_ms must be positive");
  }
  if (!(cfg.entropy_window_ms > 0.0)) {
    throw Error("entropy_window_ms must be positive");
  }
  if (!(cfg.threshold_block_ms > 0.0)) {
    throw Error("threshold_block_ms must be positive");
  }
  if (cfg.entropy_window_ms > cfg.threshold_block_ms) {
    throw Error("entropy_window_ms must not exceed threshold_block_ms");
  }
  if (cfg.merge_gap_ms < 0.0 || cfg.min_segment_ms < 0.0) {
    throw Error("segment smoothing durations must be non-negative");
  }
  if (!(cfg.entropy_floor > 0.0)) {
    throw Error("entropy_floor must be positive");
  }
}

}  // namespace

std::string to_string(EntropySource source) {
  switch (source) {
    case EntropySource::kRawX:
      return "raw_x";
    case EntropySource::kY0:
      return "y0";
    case EntropySource::kInput:
      return "input";
  }
  throw Error("invalid entropy source value");
}

EntropySource parse_entropy_source(const std::string& text) {
  if (text == "raw_x") return EntropySource::kRawX;
  if (text == "y0") return EntropySource::kY0;
  if (text == "input") return EntropySource::kInput;
  throw Error("unknown entropy source '" + text +
              "' (expected raw_x, y0, or input)");
}

std::vector<double> DecisionSurface::expanded_thresholds() const {
  std::vector<double> out(y_ds.size(), 0.0);
  for (const ThresholdBlock& block : thresholds) {
    for (std::size_t n = block.begin; n < block.end && n < out.size(); ++n) {
      out[n] = block.theta;
    }
  }
  return out;
}

std::vector<double> gradient_weight(std::span<const double> y) {
  if (y.size() < 2) {
    throw Error("gradient weight requires at least two samples");
  }
  std::vector<double> d(y.size());
  d[0] = 0.0;
  for (std::size_t n = 1; n < y.size(); ++n) {
    d[n] = y[n] * (y[n] - y[n - 1]);
  }
  return d;
}

std::vector<double> running_mean(std::span<const double> d, double window_ms,
                                 int sample_rate_hz) {
  if (d.empty()) {
    throw Error("running mean requires a non-empty signal");
  }
  if (sample_rate_hz <= 0) {
    throw Error("running mean requires a positive sample rate");
  }
  const std::size_t window = ms_to_samples(window_ms, sample_rate_hz);
  // A centered window of `window` samples: (window-1)/2 on the left of the
  // center, window/2 on the right, clipped to the signal at the edges.
  const std::ptrdiff_t left = static_cast<std::ptrdiff_t>((window - 1) / 2);
  const std::ptrdiff_t right = static_cast<std::ptrdiff_t>(window / 2);
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(d.size());

  std::vector<double> prefix(d.size() + 1, 0.0);
  for (std::size_t n = 0; n < d.size(); ++n) prefix[n + 1] = prefix[n] + d[n];

  std::vector<double> out(d.size());
  for (std::ptrdiff_t n = 0; n < len; ++n) {
    std::ptrdiff_t lo = n - left;
    std::ptrdiff_t hi = n + right;
    if (lo < 0) lo = 0;
    if (hi > len - 1) hi = len - 1;
    const double sum = prefix[static_cast<std::size_t>(hi) + 1] -
                       prefix[static_cast<std::size_t>(lo)];
    out[static_cast<std::size_t>(n)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<double> composite(const std::vector<std::vector<double>>& r) {
  if (r.empty()) {
    throw Error("composite requires at least one channel");
  }
  const std::size_t len = r.front().size();
  if (len == 0) {
    throw Error("composite requires non-empty channels");
  }
  for (const std::vector<double>& channel : r) {
    if (channel.size() != len) {
      throw Error("composite channels must share one length");
    }
  }
  std::vector<double> sum(len, 0.0);
  for (const std::vector<double>& channel : r) {
    for (std::size_t n = 0; n < len; ++n) sum[n] += channel[n];
  }
  double lo = sum[0];
  double hi = sum[0];
  for (double v : sum) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) {
    std::fill(sum.begin(), sum.end(), 0.0);
    return sum;
  }
  const double span = hi - lo;
  for (double& v : sum) v = (v - lo) / span;
  return sum;
}

std::vector<double> spectral_entropy(std::span<const double> x,
                                     double window_ms, int sample_rate_hz,
                                     double floor) {
  if (x.empty()) {
    throw Error("spectral entropy requires a non-empty signal");
  }
  if (sample_rate_hz <= 0) {
    throw Error("spectral entropy requires a positive sample rate");
  }
  if (!(floor > 0.0)) {
    throw Error("spectral entropy floor must be positive");
  }
  const std::size_t w = ms_to_samples(window_ms, sample_rate_hz);
  if (w < 4) {
    throw Error("entropy window of " + std::to_string(w) +
                " samples is too short (need at least 4)");
  }
  const std::size_t k_bins = w / 2;
  const double h_max = std::log2(static_cast<double>(k_bins));

  double* buf_in;
  fftw_complex* buf_out;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf_in = fftw_alloc_real(w);
    buf_out = fftw_alloc_complex(w / 2 + 1);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(w), buf_in, buf_out,
                                FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_free(buf_in);
    fftw_free(buf_out);
    throw Error("could not plan a DFT of size " + std::to_string(w));
  }

  const std::size_t len = x.size();
  std::vector<double> out(len, 0.0);
  std::vector<double> mag(k_bins);
  const std::size_t n_windows = (len + w - 1) / w;
  for (std::size_t f = 0; f < n_windows; ++f) {
    const std::size_t start = f * w;
    const std::size_t take = std::min(w, len - start);
    double mean = 0.0;
    for (std::size_t k = 0; k < take; ++k) mean += x[start + k];
    mean /= static_cast<double>(w);
    for (std::size_t k = 0; k < take; ++k) buf_in[k] = x[start + k] - mean;
    for (std::size_t k = take; k < w; ++k) buf_in[k] = -mean;

    fftw_execute(plan);

    double total = 0.0;
    for (std::size_t k = 1; k <= k_bins; ++k) {
      const double re = buf_out[k][0];
      const double im = buf_out[k][1];
      mag[k - 1] = std::sqrt(re * re + im * im);
      total += mag[k - 1];
    }

    double h;
    if (total < floor) {
      h = h_max;  // no spectral mass: maximally uninformative by definition
    } else {
      h = 0.0;
      for (double m : mag) {
        const double p = m / total;
        if (p > 0.0) h -= p * std::log2(p);
      }
      if (h < 0.0) h = 0.0;
      if (h > h_max) h = h_max;
    }
    for (std::size_t k = start; k < start + take; ++k) out[k] = h;
  }

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(buf_in);
    fftw_free(buf_out);
  }
  return out;
}

std::vector<ThresholdBlock> threshold_blocks(std::span<const double> y_ds,
                                             double block_ms,
                                             int sample_rate_hz) {
  if (y_ds.empty()) {
    throw Error("thresholding requires a non-empty surface");
  }
  if (sample_rate_hz <= 0) {
    throw Error("thresholding requires a positive sample rate");
  }
  const std::size_t block = ms_to_samples(block_ms, sample_rate_hz);
  std::vector<ThresholdBlock> out;
  std::vector<double> sorted;
  for (std::size_t begin = 0; begin < y_ds.size(); begin += block) {
    const std::size_t end = std::min(y_ds.size(), begin + block);
    sorted.assign(y_ds.begin() + static_cast<std::ptrdiff_t>(begin),
                  y_ds.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = (m % 2 == 1)
                              ? sorted[m / 2]
                              : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    ThresholdBlock tb;
    tb.begin = begin;
    tb.end = end;
    tb.theta = sorted.front() + median / 3.0;
    out.push_back(tb);
  }
  return out;
}

namespace {

// Composite of the running means of the per-channel gradient weights.
std::vector<double> composite_from_bank(const ZffBank& bank,
                                        const PipelineConfig& cfg) {
  std::vector<std::vector<double>> r;
  r.reserve(bank.y.size());
  for (const std::vector<double>& y : bank.y) {
    r.push_back(running_mean(gradient_weight(y), cfg.running_mean_ms,
                             bank.sample_rate_hz));
  }
  return composite(r);
}

}  // namespace

DecisionSurface decision_surface(const ZffBank& bank, const SampleBuffer& in,
                                 const PipelineConfig& cfg) {
  validate_pipeline_config(cfg);
  if (bank.y.empty() || bank.x.empty()) {
    throw Error("decision surface requires a non-empty filter bank");
  }
  if (in.samples.size() != bank.x.size()) {
    throw Error("input and filter bank lengths disagree");
  }

  DecisionSurface surface;
  surface.sample_rate_hz = bank.sample_rate_hz;
  surface.r_c = composite_from_bank(bank, cfg);

  const std::vector<double>* source = nullptr;
  switch (cfg.entropy_source) {
    case EntropySource::kRawX:
      source = &bank.x;
      break;
    case EntropySource::kY0:
      source = &bank.y.front();
      break;
    case EntropySource::kInput:
      source = &in.samples;
      break;
  }
  const std::vector<double> entropy = spectral_entropy(
      *source, cfg.entropy_window_ms, bank.sample_rate_hz, cfg.entropy_floor);

  surface.inv_entropy.resize(entropy.size());
  for (std::size_t n = 0; n < entropy.size(); ++n) {
    surface.inv_entropy[n] = 1.0 / std::max(entropy[n], cfg.entropy_floor);
  }
  surface.y_ds.resize(surface.r_c.size());
  for (std::size_t n = 0; n < surface.r_c.size(); ++n) {
    surface.y_ds[n] = surface.r_c[n] * surface.inv_entropy[n];
  }
  surface.thresholds = threshold_blocks(
      surface.y_ds, cfg.threshold_block_ms, bank.sample_rate_hz);
  return surface;
}

SegmentList dynamic_threshold(const DecisionSurface& surface,
                              const PipelineConfig& cfg) {
  validate_pipeline_config(cfg);
  if (surface.y_ds.empty() || surface.sample_rate_hz <= 0) {
    throw Error("thresholding requires a populated decision surface");
  }
  const double rate = static_cast<double>(surface.sample_rate_hz);
  // Blocks come from the surface values directly, so a hand-assembled
  // surface thresholds exactly like one built by decision_surface.
  const std::vector<ThresholdBlock> blocks = threshold_blocks(
      surface.y_ds, cfg.threshold_block_ms, surface.sample_rate_hz);
  std::vector<double> theta(surface.y_ds.size(), 0.0);
  for (const ThresholdBlock& block : blocks) {
    for (std::size_t n = block.begin; n < block.end; ++n) {
      theta[n] = block.theta;
    }
  }

  SegmentList out;
  out.total_duration_s = static_cast<double>(surface.y_ds.size()) / rate;
  bool in_run = false;
  std::size_t run_start = 0;
  for (std::size_t n = 0; n <= surface.y_ds.size(); ++n) {
    const bool voiced =
        n < surface.y_ds.size() && surface.y_ds[n] >= theta[n];
    if (voiced && !in_run) {
      in_run = true;
      run_start = n;
    } else if (!voiced && in_run) {
      in_run = false;
      Segment seg;
      seg.start_s = static_cast<double>(run_start) / rate;
      seg.end_s = static_cast<double>(n) / rate;
      out.segments.push_back(seg);
    }
  }
  return out;
}

SegmentList smooth(const SegmentList& segments, const PipelineConfig& cfg) {
  validate_pipeline_config(cfg);
  const double merge_gap_s = cfg.merge_gap_ms / 1000.0;
  const double min_len_s = cfg.min_segment_ms / 1000.0;

  SegmentList out;
  out.total_duration_s = segments.total_duration_s;
  std::vector<Segment> merged;
  for (const Segment& seg : segments.segments) {
    if (!merged.empty() && seg.start_s - merged.back().end_s < merge_gap_s) {
      merged.back().end_s = seg.end_s;
    } else {
      merged.push_back(seg);
    }
  }
  for (const Segment& seg : merged) {
    if (seg.end_s - seg.start_s >= min_len_s) {
      out.segments.push_back(seg);
    }
  }
  return out;
}

DetectResult detect(const SampleBuffer& in, const ZffConfig& zff_cfg,
                    const PipelineConfig& cfg) {
  validate_pipeline_config(cfg);
  const ZffBank bank = compute_bank(in, zff_cfg);
  DetectResult result;
  result.surface = decision_surface(bank, in, cfg);
  result.segments = smooth(dynamic_threshold(result.surface, cfg), cfg);
  return result;
}

std::vector<double> composite_signal(const SampleBuffer& in,
                                     const ZffConfig& zff_cfg,
                                     const PipelineConfig& cfg) {
  validate_pipeline_config(cfg);
  const ZffBank bank = compute_bank(in, zff_cfg);
  return composite_from_bank(bank, cfg);
}

void export_composite(const SampleBuffer& in, const ZffConfig& zff_cfg,
                      const PipelineConfig& cfg,
                      const std::filesystem::path& path) {
  const std::vector<double> r_c = composite_signal(in, zff_cfg, cfg);
  SampleBuffer out;
  out.sample_rate_hz = in.sample_rate_hz;
  out.samples.resize(r_c.size());
  for (std::size_t n = 0; n < r_c.size(); ++n) {
    out.samples[n] = 2.0 * r_c[n] - 1.0;
  }
  write_wav(out, path);
}

}  // namespace zffvad
