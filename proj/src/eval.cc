// src/eval.cc

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

#include "zffvad/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include "zffvad/error.h"

namespace zffvad {

namespace {

// Forgiving float parse used for label files: leading/trailing spaces are
// the caller's problem, the full token must be consumed.
bool parse_double(const std::string& token, double* out) {
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  const std::from_chars_result res = std::from_chars(begin, end, *out);
  return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
      ++pos;
    }
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') {
      ++pos;
    }
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

}  // namespace

FrameLabels segments_to_frames(const SegmentList& segments, double hop_ms,
                               double duration_s) {
  if (!(hop_ms > 0.0)) {
    throw Error("frame hop must be positive");
  }
  if (duration_s < 0.0) {
    throw Error("duration must be non-negative");
  }
  FrameLabels out;
  out.hop_ms = hop_ms;
  out.duration_s = duration_s;
  const double hop_s = hop_ms / 1000.0;
  // ceil(duration / hop) with a guard against values like 10.000000000002
  // that are exact multiples distorted by binary rounding.
  const std::size_t count = static_cast<std::size_t>(
      std::ceil(duration_s / hop_s - 1e-9));
  out.voiced.assign(count, 0);
  for (std::size_t f = 0; f < count; ++f) {
    const double frame_start = static_cast<double>(f) * hop_s;
    const double frame_end = frame_start + hop_s;
    double overlap = 0.0;
    for (const Segment& seg : segments.segments) {
      const double lo = std::max(frame_start, seg.start_s);
      const double hi = std::min(frame_end, seg.end_s);
      if (hi > lo) overlap += hi - lo;
    }
    if (overlap >= 0.5 * hop_s - 1e-12) out.voiced[f] = 1;
  }
  return out;
}

double ScoreCounts::precision() const {
  return (tp + fp) > 0
             ? static_cast<double>(tp) / static_cast<double>(tp + fp)
             : 0.0;
}

double ScoreCounts::recall() const {
  return (tp + fn) > 0
             ? static_cast<double>(tp) / static_cast<double>(tp + fn)
             : 0.0;
}

double ScoreCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

ScoreCounts score(const FrameLabels& hyp, const FrameLabels& ref) {
  if (hyp.hop_ms != ref.hop_ms) {
    throw Error("cannot score labels with different hops: " +
                std::to_string(hyp.hop_ms) + " vs " +
                std::to_string(ref.hop_ms) + " ms");
  }
  const std::size_t h_len = hyp.voiced.size();
  const std::size_t r_len = ref.voiced.size();
  const std::size_t gap = h_len > r_len ? h_len - r_len : r_len - h_len;
  if (gap > 1) {
    throw Error("label lengths differ by " + std::to_string(gap) +
                " frames (at most 1 is tolerated): " + std::to_string(h_len) +
                " vs " + std::to_string(r_len));
  }
  ScoreCounts counts;
  const std::size_t len = std::max(h_len, r_len);
  for (std::size_t i = 0; i < len; ++i) {
    const int h = i < h_len ? hyp.voiced[i] : 0;
    const int r = i < r_len ? ref.voiced[i] : 0;
    if (h == 1 && r == 1) ++counts.tp;
    if (h == 1 && r == 0) ++counts.fp;
    if (h == 0 && r == 1) ++counts.fn;
    if (h == 0 && r == 0) ++counts.tn;
  }
  return counts;
}

EvalReport aggregate(const std::vector<FileScore>& files) {
  EvalReport report;
  report.per_file = files;
  report.overall.tag = "overall";
  for (const FileScore& file : files) {
    GroupScore* group = nullptr;
    for (GroupScore& g : report.groups) {
      if (g.tag == file.condition) {
        group = &g;
        break;
      }
    }
    if (group == nullptr) {
      GroupScore fresh;
      fresh.tag = file.condition;
      report.groups.push_back(fresh);
      group = &report.groups.back();
    }
    group->pooled.tp += file.counts.tp;
    group->pooled.fp += file.counts.fp;
    group->pooled.fn += file.counts.fn;
    group->pooled.tn += file.counts.tn;
    group->file_count += 1;
    report.overall.pooled.tp += file.counts.tp;
    report.overall.pooled.fp += file.counts.fp;
    report.overall.pooled.fn += file.counts.fn;
    report.overall.pooled.tn += file.counts.tn;
    report.overall.file_count += 1;
  }
  if (!report.groups.empty()) {
    double mean = 0.0;
    for (const GroupScore& g : report.groups) mean += g.pooled.f1();
    mean /= static_cast<double>(report.groups.size());
    double var = 0.0;
    for (const GroupScore& g : report.groups) {
      const double d = g.pooled.f1() - mean;
      var += d * d;
    }
    var /= static_cast<double>(report.groups.size());
    report.f1_std_across_groups = std::sqrt(var);
  }
  return report;
}

FrameLabels read_labels(const std::filesystem::path& path, double hop_ms,
                        std::optional<double> duration_s) {
  if (!(hop_ms > 0.0)) {
    throw Error("frame hop must be positive");
  }
  std::ifstream file(path);
  if (!file) {
    throw Error("cannot open label file: " + path.string());
  }

  std::vector<std::pair<int, std::string>> lines;  // (line number, content)
  {
    std::string raw;
    int number = 0;
    while (std::getline(file, raw)) {
      ++number;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      bool blank = true;
      for (char c : raw) {
        if (c != ' ' && c != '\t') {
          blank = false;
          break;
        }
      }
      if (!blank) lines.emplace_back(number, raw);
    }
  }

  // Layout (a): exactly one non-blank line consisting of '0'/'1' only.
  if (lines.size() == 1) {
    const std::string& body = lines.front().second;
    bool mask = !body.empty();
    for (char c : body) {
      if (c != '0' && c != '1') {
        mask = false;
        break;
      }
    }
    if (mask) {
      FrameLabels out;
      out.hop_ms = hop_ms;
      out.voiced.reserve(body.size());
      for (char c : body) out.voiced.push_back(c == '1' ? 1 : 0);
      out.duration_s = static_cast<double>(body.size()) * hop_ms / 1000.0;
      return out;
    }
  }

  // Layout (b): "start_s end_s" per line.
  SegmentList segments;
  for (const auto& [number, body] : lines) {
    const std::vector<std::string> tokens = split_whitespace(body);
    double start = 0.0;
    double end = 0.0;
    if (tokens.size() != 2 || !parse_double(tokens[0], &start) ||
        !parse_double(tokens[1], &end) || !(end > start) || start < 0.0) {
      throw Error("malformed label line " + std::to_string(number) + " in " +
                  path.string() + ": '" + body + "'");
    }
    segments.segments.push_back({start, end});
  }
  std::sort(segments.segments.begin(), segments.segments.end(),
            [](const Segment& a, const Segment& b) {
              return a.start_s < b.start_s;
            });
  double duration = duration_s.value_or(0.0);
  if (!duration_s.has_value()) {
    for (const Segment& seg : segments.segments) {
      duration = std::max(duration, seg.end_s);
    }
  }
  segments.total_duration_s = duration;
  return segments_to_frames(segments, hop_ms, duration);
}

}  // namespace zffvad
