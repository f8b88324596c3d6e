// zffvad/zff.h

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

#ifndef ZFFVAD_ZFF_H_
#define ZFFVAD_ZFF_H_

#include <cstddef>
#include <span>
#include <vector>

#include "zffvad/audio_io.h"

namespace zffvad {

struct ZffConfig {
  // Trend-removal window divisors, one filter channel per entry.
  // Must be strictly positive and ascending.
  std::vector<double> window_divisors = {1.0, 5.0, 10.0};
  // Pitch search range for the trend window size.
  double f0_min_hz = 60.0;
  double f0_max_hz = 400.0;
  // Used when no credible pitch peak is found.
  double t0_fallback_ms = 5.0;
};

// Output of the filter bank over one utterance.
struct ZffBank {
  std::vector<double> x;               // twice-integrated, mean-removed input
  std::vector<std::vector<double>> y;  // trend-removed channels, one per divisor
  int t0_samples = 0;                  // estimated pitch period
  // Per channel: indices n with y[n-1] < 0 <= y[n] (impulse locations).
  std::vector<std::vector<std::size_t>> gci_indices;
  int sample_rate_hz = 0;
};

// The resonator-at-zero-hertz recursion
//   x[n] = s[n] + 2 x[n-1] - x[n-2]
// with zero initial state. Callers must remove the input mean first (a DC
// offset grows quadratically through the double integrator); compute_bank
// does. Raises Error if any output sample is non-finite.
std::vector<double> zero_frequency_filter(const SampleBuffer& in);

// Pitch period in samples: the lag of the maximum of the biased
// autocorrelation over [rate/f0_max, rate/f0_min]. Falls back to
// t0_fallback_ms when the peak is non-positive or statistically
// indistinguishable from noise. Requires len >= 2 * rate / f0_min.
int estimate_t0(const SampleBuffer& in, const ZffConfig& cfg);

// Subtracts the local mean over a centered window of `window_samples`
// (odd, >= 3) from every sample; at the edges the window is clipped to the
// signal and the mean is taken over the available samples. Requires
// len > window_samples.
std::vector<double> trend_remove(std::span<const double> x,
                                 int window_samples);

// Full bank: filter once, then one trend-removal channel per divisor with
// window = nearest odd integer to t0/divisor (minimum 3, ties round up),
// plus the negative-to-positive zero crossings of each channel.
ZffBank compute_bank(const SampleBuffer& in, const ZffConfig& cfg);

}  // namespace zffvad

#endif  // ZFFVAD_ZFF_H_
