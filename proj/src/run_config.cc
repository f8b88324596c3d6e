// src/run_config.cc

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

#include "zffvad/run_config.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zffvad/error.h"

namespace zffvad {

namespace {

std::string trim(const std::string& text) {
  std::size_t lo = 0;
  std::size_t hi = text.size();
  while (lo < hi && (text[lo] == ' ' || text[lo] == '\t')) ++lo;
  while (hi > lo && (text[hi - 1] == ' ' || text[hi - 1] == '\t')) --hi;
  return text.substr(lo, hi - lo);
}

double parse_number(const std::string& key, const std::string& value) {
  const std::string token = trim(value);
  double out = 0.0;
  const std::from_chars_result res =
      std::from_chars(token.data(), token.data() + token.size(), out);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error("config key '" + key + "' needs a number, got '" + value +
                "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const std::string token = trim(value);
  int out = 0;
  const std::from_chars_result res =
      std::from_chars(token.data(), token.data() + token.size(), out);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error("config key '" + key + "' needs an integer, got '" + value +
                "'");
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::stringstream stream(value);
  while (std::getline(stream, item, ',')) {
    out.push_back(parse_number(key, item));
  }
  if (out.empty()) {
    throw Error("config key '" + key + "' needs at least one number");
  }
  return out;
}

void format_number(std::string* out, double v) {
  char buf[64];
  const std::to_chars_result res =
      std::to_chars(buf, buf + sizeof(buf), v);  // shortest round-trip form
  out->append(buf, res.ptr);
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
  if (key == "window_divisors") {
    zff.window_divisors = parse_number_list(key, value);
  } else if (key == "f0_min_hz") {
    zff.f0_min_hz = parse_number(key, value);
  } else if (key == "f0_max_hz") {
    zff.f0_max_hz = parse_number(key, value);
  } else if (key == "t0_fallback_ms") {
    zff.t0_fallback_ms = parse_number(key, value);
  } else if (key == "running_mean_ms") {
    pipeline.running_mean_ms = parse_number(key, value);
  } else if (key == "entropy_window_ms") {
    pipeline.entropy_window_ms = parse_number(key, value);
  } else if (key == "threshold_block_ms") {
    pipeline.threshold_block_ms = parse_number(key, value);
  } else if (key == "merge_gap_ms") {
    pipeline.merge_gap_ms = parse_number(key, value);
  } else if (key == "min_segment_ms") {
    pipeline.min_segment_ms = parse_number(key, value);
  } else if (key == "entropy_floor") {
    pipeline.entropy_floor = parse_number(key, value);
  } else if (key == "entropy_source") {
    pipeline.entropy_source = parse_entropy_source(trim(value));
  } else if (key == "eval_hop_ms") {
    eval_hop_ms = parse_number(key, value);
  } else if (key == "jobs") {
    jobs = parse_int(key, value);
  } else {
    throw Error("unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (zff.window_divisors.empty()) {
    throw Error("window_divisors must not be empty");
  }
  double prev = 0.0;
  for (double d : zff.window_divisors) {
    if (!(d > prev)) {
      throw Error("window_divisors must be positive and strictly ascending");
    }
    prev = d;
  }
  if (!(zff.f0_min_hz > 0.0) || !(zff.f0_max_hz > zff.f0_min_hz)) {
    throw Error("pitch search range requires 0 < f0_min_hz < f0_max_hz");
  }
  if (!(zff.t0_fallback_ms > 0.0)) {
    throw Error("t0_fallback_ms must be positive");
  }
  if (!(pipeline.running_mean_ms > 0.0)) {
    throw Error("running_mean_ms must be positive");
  }
  if (!(pipeline.entropy_window_ms > 0.0)) {
    throw Error("entropy_window_ms must be positive");
  }
  if (!(pipeline.threshold_block_ms > 0.0)) {
    throw Error("threshold_block_ms must be positive");
  }
  if (pipeline.entropy_window_ms > pipeline.threshold_block_ms) {
    throw Error("entropy_window_ms must not exceed threshold_block_ms");
  }
  if (pipeline.merge_gap_ms < 0.0) {
    throw Error("merge_gap_ms must be non-negative");
  }
  if (pipeline.min_segment_ms < 0.0) {
    throw Error("min_segment_ms must be non-negative");
  }
  if (!(pipeline.entropy_floor > 0.0)) {
    throw Error("entropy_floor must be positive");
  }
  if (!(eval_hop_ms > 0.0)) {
    throw Error("eval_hop_ms must be positive");
  }
  if (jobs < 1) {
    throw Error("jobs must be at least 1");
  }
}

std::string RunConfig::to_text() const {
  std::string out;
  out += "window_divisors = ";
  for (std::size_t i = 0; i < zff.window_divisors.size(); ++i) {
    if (i > 0) out += ", ";
    format_number(&out, zff.window_divisors[i]);
  }
  out += "\n";
  const auto line = [&out](const char* key, double v) {
    out += key;
    out += " = ";
    format_number(&out, v);
    out += "\n";
  };
  line("f0_min_hz", zff.f0_min_hz);
  line("f0_max_hz", zff.f0_max_hz);
  line("t0_fallback_ms", zff.t0_fallback_ms);
  line("running_mean_ms", pipeline.running_mean_ms);
  line("entropy_window_ms", pipeline.entropy_window_ms);
  line("threshold_block_ms", pipeline.threshold_block_ms);
  line("merge_gap_ms", pipeline.merge_gap_ms);
  line("min_segment_ms", pipeline.min_segment_ms);
  line("entropy_floor", pipeline.entropy_floor);
  out += "entropy_source = " + to_string(pipeline.entropy_source) + "\n";
  line("eval_hop_ms", eval_hop_ms);
  out += "jobs = " + std::to_string(jobs) + "\n";
  return out;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) {
    throw Error("cannot open config file: " + path.string());
  }
  RunConfig cfg;
  std::string raw;
  int number = 0;
  while (std::getline(file, raw)) {
    ++number;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string body = trim(raw);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(number) + " in " +
                  path.string() + " is not 'key = value': '" + body + "'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    try {
      cfg.apply(key, value);
    } catch (const Error& err) {
      throw Error("config line " + std::to_string(number) + " in " +
                  path.string() + ": " + err.what());
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace zffvad
