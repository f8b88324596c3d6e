// zffvad/eval.h

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

#ifndef ZFFVAD_EVAL_H_
#define ZFFVAD_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zffvad/pipeline.h"

namespace zffvad {

// Frame-level voiced/unvoiced labels on a fixed hop grid covering
// ceil(duration_s * 1000 / hop_ms) frames.
struct FrameLabels {
  std::vector<std::uint8_t> voiced;
  double hop_ms = 10.0;
  double duration_s = 0.0;
};

// Rasterizes segments onto the frame grid: frame i covers
// [i*hop, (i+1)*hop) and is voiced when segments overlap at least half of
// it. Produces ceil(duration / hop) frames.
FrameLabels segments_to_frames(const SegmentList& segments, double hop_ms,
                               double duration_s);

// Frame-level confusion counts. Ratios with a zero denominator are 0 by
// definition, so empty references and empty hypotheses score cleanly.
struct ScoreCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  double precision() const;
  double recall() const;
  double f1() const;
};

// Compares hypothesis to reference frame by frame. Hop values must match;
// lengths may differ by at most one frame (the shorter side is padded
// with unvoiced).
ScoreCounts score(const FrameLabels& hyp, const FrameLabels& ref);

struct FileScore {
  std::string file_id;
  std::string condition;
  ScoreCounts counts;
};

// Counts pooled over the files of one condition tag.
struct GroupScore {
  std::string tag;
  ScoreCounts pooled;
  std::size_t file_count = 0;
};

struct EvalReport {
  std::vector<FileScore> per_file;
  std::vector<GroupScore> groups;  // ordered by first appearance
  GroupScore overall;
  // Population standard deviation of the group F1 values.
  double f1_std_across_groups = 0.0;
};

EvalReport aggregate(const std::vector<FileScore>& files);

// Reads reference labels. Two layouts are accepted: a single line of '0'
// and '1' characters (one per frame at hop_ms), or "start_s end_s" lines
// converted through segments_to_frames. For the segment layout the frame
// count covers `duration_s` when given, otherwise the last segment end.
// Malformed content raises Error naming the line number.
FrameLabels read_labels(const std::filesystem::path& path, double hop_ms,
                        std::optional<double> duration_s = std::nullopt);

}  // namespace zffvad

#endif  // ZFFVAD_EVAL_H_
