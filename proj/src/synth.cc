// src/synth.cc

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

#include "zffvad/synth.h"

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "zffvad/error.h"

namespace zffvad {

namespace {

constexpr double kSpeechPeak = 0.125;  // headroom for heavy noise mixes
constexpr double kRampSeconds = 0.010;
constexpr double kSilentNoiseRms = 0.05;  // burst-free files

struct Resonance {
  double freq_hz;
  double bandwidth_hz;
};

// The fixed two-formant "vocal tract" every burst is shaped with.
constexpr Resonance kTract[] = {{700.0, 130.0}, {1200.0, 180.0}};

// One decaying two-pole resonance applied in place.
void apply_resonance(std::vector<double>* x, const Resonance& res, int rate) {
  const double r = std::exp(-M_PI * res.bandwidth_hz / rate);
  const double a1 = 2.0 * r * std::cos(2.0 * M_PI * res.freq_hz / rate);
  const double a2 = -r * r;
  double y1 = 0.0, y2 = 0.0;
  for (double& v : *x) {
    const double y = v + a1 * y1 + a2 * y2;
    v = y;
    y2 = y1;
    y1 = y;
  }
}

void apply_tract(std::vector<double>* x, int rate) {
  for (const Resonance& res : kTract) apply_resonance(x, res, rate);
}

double mean_square(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum / static_cast<double>(x.size());
}

void validate_spec(const SynthSpec& spec) {
  if (!(spec.duration_s > 0.0)) {
    throw Error("synthesis duration must be positive");
  }
  if (spec.sample_rate_hz <= 0) {
    throw Error("synthesis sample rate must be positive");
  }
  if (!(spec.f0_hz > 0.0) ||
      spec.f0_hz >= static_cast<double>(spec.sample_rate_hz) / 2.0) {
    throw Error("f0_hz must lie in (0, rate/2)");
  }
  double prev_end = 0.0;
  for (const Segment& burst : spec.bursts) {
    if (!(burst.end_s > burst.start_s)) {
      throw Error("burst must have positive length");
    }
    if (burst.start_s < 0.0 || burst.end_s > spec.duration_s + 1e-9) {
      throw Error("burst [" + std::to_string(burst.start_s) + ", " +
                  std::to_string(burst.end_s) + ") lies outside [0, " +
                  std::to_string(spec.duration_s) + ")");
    }
    if (burst.start_s < prev_end) {
      throw Error("bursts overlap or are unordered near t=" +
                  std::to_string(burst.start_s));
    }
    prev_end = burst.end_s;
  }
}

// Raised-cosine gate: 0 outside the burst, 1 in the middle, half-cosine
// ramps over the first and last kRampSeconds (shorter bursts use the
// smaller of the two ramp values).
double burst_gain(double t, const Segment& burst) {
  if (t < burst.start_s || t >= burst.end_s) return 0.0;
  double gain = 1.0;
  const double in_pos = (t - burst.start_s) / kRampSeconds;
  if (in_pos < 1.0) gain = 0.5 * (1.0 - std::cos(M_PI * in_pos));
  const double out_pos = (burst.end_s - t) / kRampSeconds;
  if (out_pos < 1.0) {
    gain = std::min(gain, 0.5 * (1.0 - std::cos(M_PI * out_pos)));
  }
  return gain;
}

std::vector<double> make_noise(const SynthSpec& spec, std::size_t len) {
  // The noise stream is seeded independently of everything the speech
  // path consumes, so a clean render of the same spec reproduces the
  // speech component exactly.
  std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ULL + 0x5851F42D4C957F2DULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(len, 0.0);

  switch (spec.noise) {
    case NoiseKind::kWhite: {
      for (double& v : noise) v = gauss(rng);
      break;
    }
    case NoiseKind::kPink: {
      // Paul Kellet's three-state pinking filter over white noise.
      double b0 = 0.0, b1 = 0.0, b2 = 0.0;
      for (double& v : noise) {
        const double w = gauss(rng);
        b0 = 0.99765 * b0 + w * 0.0990460;
        b1 = 0.96300 * b1 + w * 0.2965164;
        b2 = 0.57000 * b2 + w * 1.0526913;
        v = b0 + b1 + b2 + w * 0.1848;
      }
      break;
    }
    case NoiseKind::kBabble: {
      // A crowd surrogate: several detuned pulse trains through the same
      // tract filter, summed with random phases.
      std::uniform_real_distribution<double> f_dist(80.0, 280.0);
      std::uniform_real_distribution<double> phase_dist(0.0, 1.0);
      const int voices = 8;
      std::vector<double> train(len);
      for (int v = 0; v < voices; ++v) {
        std::fill(train.begin(), train.end(), 0.0);
        const double period =
            static_cast<double>(spec.sample_rate_hz) / f_dist(rng);
        for (double pos = phase_dist(rng) * period;
             pos < static_cast<double>(len); pos += period) {
          train[static_cast<std::size_t>(pos)] += 1.0;
        }
        apply_tract(&train, spec.sample_rate_hz);
        for (std::size_t n = 0; n < len; ++n) noise[n] += train[n];
      }
      break;
    }
  }

  const double power = mean_square(noise);
  if (power > 0.0) {
    const double scale = 1.0 / std::sqrt(power);
    for (double& v : noise) v *= scale;
  }
  return noise;
}

}  // namespace

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite:
      return "white";
    case NoiseKind::kBabble:
      return "babble";
    case NoiseKind::kPink:
      return "pink";
  }
  throw Error("invalid noise kind value");
}

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "white") return NoiseKind::kWhite;
  if (text == "babble") return NoiseKind::kBabble;
  if (text == "pink") return NoiseKind::kPink;
  throw Error("unknown noise kind '" + text +
              "' (expected white, babble, or pink)");
}

SynthResult synthesize(const SynthSpec& spec) {
  validate_spec(spec);
  const int rate = spec.sample_rate_hz;
  const std::size_t len =
      static_cast<std::size_t>(std::llround(spec.duration_s * rate));
  if (len == 0) {
    throw Error("synthesis duration rounds to zero samples");
  }

  // Excitation: one impulse train per burst, restarted at the burst onset.
  std::vector<double> speech(len, 0.0);
  const double period = static_cast<double>(rate) / spec.f0_hz;
  for (const Segment& burst : spec.bursts) {
    const double start = burst.start_s * rate;
    const double end = burst.end_s * rate;
    for (double pos = start; pos < end; pos += period) {
      const std::size_t n = static_cast<std::size_t>(std::llround(pos));
      if (n < len) speech[n] += 1.0;
    }
  }
  apply_tract(&speech, rate);

  // Gate the shaped signal, not the excitation, so everything outside the
  // bursts is exactly zero (filter ring-out included).
  for (std::size_t n = 0; n < len; ++n) {
    if (speech[n] == 0.0) continue;
    const double t = static_cast<double>(n) / rate;
    double gain = 0.0;
    for (const Segment& burst : spec.bursts) {
      if (t >= burst.start_s && t < burst.end_s) {
        gain = burst_gain(t, burst);
        break;
      }
    }
    speech[n] *= gain;
  }

  double peak = 0.0;
  for (double v : speech) peak = std::max(peak, std::fabs(v));
  if (peak > 0.0) {
    const double scale = kSpeechPeak / peak;
    for (double& v : speech) v *= scale;
  }

  // Speech power over the burst regions only.
  double p_speech = 0.0;
  std::size_t burst_samples = 0;
  for (const Segment& burst : spec.bursts) {
    const std::size_t lo =
        static_cast<std::size_t>(std::llround(burst.start_s * rate));
    const std::size_t hi = std::min(
        len, static_cast<std::size_t>(std::llround(burst.end_s * rate)));
    for (std::size_t n = lo; n < hi; ++n) {
      p_speech += speech[n] * speech[n];
      ++burst_samples;
    }
  }
  if (burst_samples > 0) p_speech /= static_cast<double>(burst_samples);

  SynthResult result;
  result.audio.sample_rate_hz = rate;
  result.audio.samples = std::move(speech);

  if (spec.snr_db.has_value()) {
    const std::vector<double> noise = make_noise(spec, len);
    const double p_noise = mean_square(noise);  // 1 up to rounding
    double gain;
    if (p_speech > 0.0 && p_noise > 0.0) {
      gain = std::sqrt(p_speech /
                       (p_noise * std::pow(10.0, *spec.snr_db / 10.0)));
    } else if (p_noise > 0.0) {
      gain = kSilentNoiseRms / std::sqrt(p_noise);  // burst-free file
    } else {
      gain = 0.0;
    }
    for (std::size_t n = 0; n < len; ++n) {
      result.audio.samples[n] += gain * noise[n];
    }
  }

  SegmentList bursts;
  bursts.segments = spec.bursts;
  bursts.total_duration_s = spec.duration_s;
  result.labels = segments_to_frames(bursts, 10.0, spec.duration_s);
  return result;
}

}  // namespace zffvad
