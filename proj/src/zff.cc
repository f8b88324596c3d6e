// src/zff.cc

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

#include "zffvad/zff.h"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "zffvad/error.h"

namespace zffvad {

namespace {

void validate_config(const ZffConfig& cfg) {
  if (cfg.window_divisors.empty()) {
    throw Error("window_divisors must not be empty");
  }
  double prev = 0.0;
  for (double d : cfg.window_divisors) {
    if (!(d > prev)) {
      throw Error("window_divisors must be positive and strictly ascending");
    }
    prev = d;
  }
  if (!(cfg.f0_min_hz > 0.0) || !(cfg.f0_max_hz > cfg.f0_min_hz)) {
    throw Error("pitch search range requires 0 < f0_min_hz < f0_max_hz");
  }
  if (!(cfg.t0_fallback_ms > 0.0)) {
    throw Error("t0_fallback_ms must be positive");
  }
}

// Two-pass mean: a first estimate, then the mean of the residuals folded
// back in.  For an all-equal signal the residuals are computed exactly
// (the values are within one rounding step of the estimate), so the
// corrected mean equals the constant and subtraction leaves exact zeros.
// Anything short of that leaks a DC remnant into the double integrator,
// which amplifies it quadratically.
double signal_mean(const std::vector<double>& s) {
  const double n = static_cast<double>(s.size());
  double sum = 0.0;
  for (double v : s) sum += v;
  const double estimate = sum / n;
  double residual = 0.0;
  for (double v : s) residual += v - estimate;
  return estimate + residual / n;
}

// Nearest odd integer to `value`, ties rounded up, never below 3.
int nearest_odd_window(double value) {
  const long long k = std::llround((value - 1.0) / 2.0);
  const long long odd = 2 * k + 1;
  return odd < 3 ? 3 : static_cast<int>(odd);
}

}  // namespace

std::vector<double> zero_frequency_filter(const SampleBuffer& in) {
  const std::vector<double>& s = in.samples;
  if (s.empty()) {
    throw Error("zero_frequency_filter requires a non-empty signal");
  }
  std::vector<double> x(s.size());
  double x1 = 0.0;  // x[n-1]
  double x2 = 0.0;  // x[n-2]
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double v = s[n] + 2.0 * x1 - x2;
    x[n] = v;
    x2 = x1;
    x1 = v;
  }
  if (!std::isfinite(x1) || !std::isfinite(x2)) {
    throw Error("integrator output is non-finite");
  }
  return x;
}

int estimate_t0(const SampleBuffer& in, const ZffConfig& cfg) {
  validate_config(cfg);
  if (in.sample_rate_hz <= 0) {
    throw Error("pitch estimation requires a positive sample rate");
  }
  const double rate = static_cast<double>(in.sample_rate_hz);
  if (!(cfg.f0_max_hz < rate / 2.0)) {
    throw Error("f0_max_hz must lie below the Nyquist frequency");
  }
  const std::vector<double>& s = in.samples;
  const double min_len = 2.0 * rate / cfg.f0_min_hz;
  if (static_cast<double>(s.size()) < min_len) {
    throw Error("signal too short for pitch estimation: " +
                std::to_string(s.size()) + " samples, need at least " +
                std::to_string(static_cast<std::size_t>(min_len)));
  }

  std::vector<double> x(s.size());
  const double mean = signal_mean(s);
  for (std::size_t n = 0; n < s.size(); ++n) x[n] = s[n] - mean;

  const std::size_t len = x.size();
  const double inv_len = 1.0 / static_cast<double>(len);
  double r0 = 0.0;
  for (double v : x) r0 += v * v;
  r0 *= inv_len;

  const int fallback =
      static_cast<int>(ms_to_samples(cfg.t0_fallback_ms, in.sample_rate_hz));
  if (!(r0 > 0.0)) {
    return fallback;  // silent input: nothing to estimate
  }

  std::size_t lag_lo =
      static_cast<std::size_t>(std::ceil(rate / cfg.f0_max_hz));
  if (lag_lo < 1) lag_lo = 1;
  std::size_t lag_hi =
      static_cast<std::size_t>(std::floor(rate / cfg.f0_min_hz));
  if (lag_hi > len - 1) lag_hi = len - 1;
  if (lag_lo > lag_hi) {
    return fallback;
  }

  double best = 0.0;
  std::size_t best_lag = 0;
  for (std::size_t lag = lag_lo; lag <= lag_hi; ++lag) {
    double sum = 0.0;
    for (std::size_t n = 0; n + lag < len; ++n) sum += x[n] * x[n + lag];
    const double r = sum * inv_len;
    if (best_lag == 0 || r > best) {
      best = r;
      best_lag = lag;
    }
  }

  // A non-positive peak carries no periodicity. Beyond that, require the
  // normalized peak to clear the noise floor of the estimator itself: for
  // an uncorrelated signal the normalized autocorrelation at any fixed lag
  // has standard deviation about 1/sqrt(len), so a peak below 4/sqrt(len)
  // is indistinguishable from chance across the searched lags.
  const double significance = 4.0 / std::sqrt(static_cast<double>(len));
  if (!(best > 0.0) || best / r0 < significance) {
    return fallback;
  }
  return static_cast<int>(best_lag);
}

std::vector<double> trend_remove(std::span<const double> x,
                                 int window_samples) {
  if (window_samples < 3 || window_samples % 2 == 0) {
    throw Error("trend window must be an odd integer >= 3, got " +
                std::to_string(window_samples));
  }
  const std::size_t len = x.size();
  if (len <= static_cast<std::size_t>(window_samples)) {
    throw Error("trend window (" + std::to_string(window_samples) +
                ") must be smaller than the signal (" + std::to_string(len) +
                " samples)");
  }
  // Prefix sums give each clipped-window mean in O(1).
  std::vector<double> prefix(len + 1, 0.0);
  for (std::size_t n = 0; n < len; ++n) prefix[n + 1] = prefix[n] + x[n];

  const std::ptrdiff_t half = window_samples / 2;
  const std::ptrdiff_t slen = static_cast<std::ptrdiff_t>(len);
  std::vector<double> y(len);
  for (std::ptrdiff_t n = 0; n < slen; ++n) {
    std::ptrdiff_t lo = n - half;
    std::ptrdiff_t hi = n + half;
    if (lo < 0) lo = 0;
    if (hi > slen - 1) hi = slen - 1;
    const double sum = prefix[static_cast<std::size_t>(hi) + 1] -
                       prefix[static_cast<std::size_t>(lo)];
    y[static_cast<std::size_t>(n)] =
        x[static_cast<std::size_t>(n)] - sum / static_cast<double>(hi - lo + 1);
  }
  return y;
}

ZffBank compute_bank(const SampleBuffer& in, const ZffConfig& cfg) {
  validate_config(cfg);
  if (in.samples.empty()) {
    throw Error("compute_bank requires a non-empty signal");
  }
  const int t0 = estimate_t0(in, cfg);

  SampleBuffer centered;
  centered.sample_rate_hz = in.sample_rate_hz;
  centered.samples.resize(in.samples.size());
  const double mean = signal_mean(in.samples);
  for (std::size_t n = 0; n < in.samples.size(); ++n) {
    centered.samples[n] = in.samples[n] - mean;
  }

  ZffBank bank;
  bank.sample_rate_hz = in.sample_rate_hz;
  bank.t0_samples = t0;
  bank.x = zero_frequency_filter(centered);
  bank.y.reserve(cfg.window_divisors.size());
  bank.gci_indices.reserve(cfg.window_divisors.size());
  for (double divisor : cfg.window_divisors) {
    const int window = nearest_odd_window(static_cast<double>(t0) / divisor);
    std::vector<double> y = trend_remove(bank.x, window);
    std::vector<std::size_t> gci;
    for (std::size_t n = 1; n < y.size(); ++n) {
      if (y[n - 1] < 0.0 && y[n] >= 0.0) gci.push_back(n);
    }
    bank.y.push_back(std::move(y));
    bank.gci_indices.push_back(std::move(gci));
  }
  return bank;
}

}  // namespace zffvad
