// zffvad/run_config.h

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

#ifndef ZFFVAD_RUN_CONFIG_H_
#define ZFFVAD_RUN_CONFIG_H_

#include <filesystem>
#include <string>

#include "zffvad/pipeline.h"
#include "zffvad/zff.h"

namespace zffvad {

// Every tunable of a run, shared by all tool subcommands. Serializes to
// "key = value" lines; parsing rejects unknown keys and enforces the
// range invariants, so a bad config never reaches the pipeline.
struct RunConfig {
  ZffConfig zff;
  PipelineConfig pipeline;
  double eval_hop_ms = 10.0;
  int jobs = 1;

  // Applies one key/value pair; unknown keys or bad values raise Error.
  void apply(const std::string& key, const std::string& value);

  // Raises Error on the first violated invariant.
  void validate() const;

  std::string to_text() const;

  // Parses a key = value file ('#' starts a comment). Errors name the
  // line number.
  static RunConfig from_file(const std::filesystem::path& path);
};

}  // namespace zffvad

#endif  // ZFFVAD_RUN_CONFIG_H_
