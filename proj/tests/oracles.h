// tests/oracles.h

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

// Slow, independent reference implementations. Every routine here favors
// the most literal possible evaluation (explicit loops, no shared helpers
// with the library) so that agreement with the production code means two
// genuinely different computations concur.

#ifndef ZFFVAD_TESTS_ORACLES_H_
#define ZFFVAD_TESTS_ORACLES_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace zffvad {
namespace oracles {

// Direct evaluation of x[n] = s[n] + 2 x[n-1] - x[n-2] with the history
// held in two scalars. No mean handling: that is the caller's business,
// exactly as in the library.
inline std::vector<double> naive_double_integrator(
    const std::vector<double>& s) {
  std::vector<double> x(s.size());
  double x1 = 0.0;  // x[n-1]
  double x2 = 0.0;  // x[n-2]
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double v = s[n] + 2.0 * x1 - x2;
    x[n] = v;
    x2 = x1;
    x1 = v;
  }
  return x;
}

// O(L*N) local-mean subtraction; the window shrinks at the edges.
inline std::vector<double> naive_local_mean_removal(
    const std::vector<double>& x, int window_samples) {
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t half = window_samples / 2;
  std::vector<double> y(x.size());
  for (std::ptrdiff_t n = 0; n < len; ++n) {
    std::ptrdiff_t lo = n - half;
    std::ptrdiff_t hi = n + half;
    if (lo < 0) lo = 0;
    if (hi > len - 1) hi = len - 1;
    double sum = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) sum += x[k];
    y[n] = x[n] - sum / static_cast<double>(hi - lo + 1);
  }
  return y;
}

// Centered clipped-window moving average, double loop. `left` samples
// before and `right` after the center, mean over what the signal offers.
inline std::vector<double> naive_moving_average(const std::vector<double>& d,
                                                int left, int right) {
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(d.size());
  std::vector<double> out(d.size());
  for (std::ptrdiff_t n = 0; n < len; ++n) {
    std::ptrdiff_t lo = n - left;
    std::ptrdiff_t hi = n + right;
    if (lo < 0) lo = 0;
    if (hi > len - 1) hi = len - 1;
    double sum = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) sum += d[k];
    out[n] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

// Biased autocorrelation at one lag, straight off the definition.
inline double biased_autocorrelation(const std::vector<double>& x,
                                     std::size_t lag) {
  double sum = 0.0;
  for (std::size_t n = 0; n + lag < x.size(); ++n) sum += x[n] * x[n + lag];
  return sum / static_cast<double>(x.size());
}

// Shannon entropy (bits) of one window through a direct O(N^2) DFT:
// mean removal, magnitudes of bins 1..N/2, probability normalization.
// Returns max entropy log2(K) when the total magnitude is below `floor`.
inline double direct_dft_entropy(const std::vector<double>& frame,
                                 double floor_total) {
  const std::size_t n_len = frame.size();
  const std::size_t k_bins = n_len / 2;
  double mean = 0.0;
  for (double v : frame) mean += v;
  mean /= static_cast<double>(n_len);

  std::vector<double> mag(k_bins);
  double total = 0.0;
  for (std::size_t k = 1; k <= k_bins; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < n_len; ++n) {
      const double angle = -2.0 * M_PI * static_cast<double>(k) *
                           static_cast<double>(n) / static_cast<double>(n_len);
      const double v = frame[n] - mean;
      re += v * std::cos(angle);
      im += v * std::sin(angle);
    }
    mag[k - 1] = std::sqrt(re * re + im * im);
    total += mag[k - 1];
  }
  const double h_max = std::log2(static_cast<double>(k_bins));
  if (total < floor_total) return h_max;
  double h = 0.0;
  for (double m : mag) {
    const double p = m / total;
    if (p > 0.0) h -= p * std::log2(p);
  }
  if (h < 0.0) h = 0.0;
  if (h > h_max) h = h_max;
  return h;
}

// Confusion counts and Eq.-style ratios with explicit zero-denominator
// rules, evaluated frame by frame.
struct BruteScore {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

inline BruteScore brute_force_score(const std::vector<int>& hyp,
                                    const std::vector<int>& ref) {
  BruteScore s;
  const std::size_t len = hyp.size() > ref.size() ? hyp.size() : ref.size();
  for (std::size_t i = 0; i < len; ++i) {
    const int h = i < hyp.size() ? hyp[i] : 0;
    const int r = i < ref.size() ? ref[i] : 0;
    if (h == 1 && r == 1) ++s.tp;
    if (h == 1 && r == 0) ++s.fp;
    if (h == 0 && r == 1) ++s.fn;
    if (h == 0 && r == 0) ++s.tn;
  }
  s.precision = (s.tp + s.fp) > 0
                    ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp)
                    : 0.0;
  s.recall = (s.tp + s.fn) > 0
                 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn)
                 : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

// Independent theta = min + median/3 over an explicit sorted copy.
inline double block_theta(const std::vector<double>& block) {
  std::vector<double> sorted = block;
  for (std::size_t i = 1; i < sorted.size(); ++i) {  // insertion sort
    double v = sorted[i];
    std::size_t j = i;
    while (j > 0 && sorted[j - 1] > v) {
      sorted[j] = sorted[j - 1];
      --j;
    }
    sorted[j] = v;
  }
  const std::size_t len = sorted.size();
  const double median = (len % 2 == 1)
                            ? sorted[len / 2]
                            : 0.5 * (sorted[len / 2 - 1] + sorted[len / 2]);
  return sorted.front() + median / 3.0;
}

inline std::vector<double> random_signal(std::size_t len, std::uint64_t seed,
                                         double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  std::vector<double> out(len);
  for (double& v : out) v = dist(rng);
  return out;
}

}  // namespace oracles
}  // namespace zffvad

#endif  // ZFFVAD_TESTS_ORACLES_H_
