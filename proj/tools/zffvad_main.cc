// tools/zffvad_main.cc

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

// Command-line front end: synthesis, detection, composite export, and
// corpus evaluation. Exit codes: 0 all inputs processed, 1 some inputs
// failed, 2 usage errors or nothing processed.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <clocale>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "zffvad/audio_io.h"
#include "zffvad/error.h"
#include "zffvad/eval.h"
#include "zffvad/pipeline.h"
#include "zffvad/run_config.h"
#include "zffvad/synth.h"
#include "zffvad/zff.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

std::string format_fixed(double v, int precision) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(
      buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string format_shortest(double v) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Config file first, command-line overrides second.
zffvad::RunConfig resolve_config(const std::string& config_path,
                                 const std::vector<std::string>& overrides) {
  zffvad::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = zffvad::RunConfig::from_file(config_path);
  }
  for (const std::string& item : overrides) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw zffvad::Error("--set needs key=value, got '" + item + "'");
    }
    cfg.apply(item.substr(0, eq), item.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void write_segments(const zffvad::SegmentList& segments, const fs::path& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) {
    throw zffvad::Error("cannot open for writing: " + path.string());
  }
  for (const zffvad::Segment& seg : segments.segments) {
    file << format_fixed(seg.start_s, 3) << ' ' << format_fixed(seg.end_s, 3)
         << '\n';
  }
}

void write_surface_csv(const zffvad::DecisionSurface& surface,
                       const zffvad::SegmentList& segments,
                       const fs::path& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) {
    throw zffvad::Error("cannot open for writing: " + path.string());
  }
  file << "sample_index,time_s,r_c,inv_entropy,y_ds,theta,decision\n";
  const std::vector<double> theta = surface.expanded_thresholds();
  const double rate = static_cast<double>(surface.sample_rate_hz);
  std::size_t seg_index = 0;
  for (std::size_t n = 0; n < surface.y_ds.size(); ++n) {
    const double t = static_cast<double>(n) / rate;
    while (seg_index < segments.segments.size() &&
           t >= segments.segments[seg_index].end_s) {
      ++seg_index;
    }
    const bool voiced = seg_index < segments.segments.size() &&
                        t >= segments.segments[seg_index].start_s &&
                        t < segments.segments[seg_index].end_s;
    file << n << ',' << format_fixed(t, 6) << ','
         << format_shortest(surface.r_c[n]) << ','
         << format_shortest(surface.inv_entropy[n]) << ','
         << format_shortest(surface.y_ds[n]) << ','
         << format_shortest(theta[n]) << ',' << (voiced ? 1 : 0) << '\n';
  }
}

int cmd_detect(const std::vector<std::string>& inputs,
               const std::string& out_dir, bool dump_surface,
               const zffvad::RunConfig& cfg) {
  fs::create_directories(out_dir);
  std::size_t failed = 0;
  for (const std::string& input : inputs) {
    try {
      const zffvad::SampleBuffer audio = zffvad::read_wav(input);
      const zffvad::DetectResult result =
          zffvad::detect(audio, cfg.zff, cfg.pipeline);
      const std::string stem = fs::path(input).stem().string();
      write_segments(result.segments, fs::path(out_dir) / (stem + ".seg"));
      if (dump_surface) {
        write_surface_csv(result.surface, result.segments,
                          fs::path(out_dir) / (stem + ".surface.csv"));
      }
    } catch (const zffvad::Error& err) {
      std::fprintf(stderr, "error: %s: %s\n", input.c_str(), err.what());
      ++failed;
    }
  }
  if (failed == 0) return kExitOk;
  return failed == inputs.size() ? kExitUsage : kExitPartial;
}

int cmd_export_composite(const std::vector<std::string>& inputs,
                         const std::string& out_dir,
                         const zffvad::RunConfig& cfg) {
  fs::create_directories(out_dir);
  std::size_t failed = 0;
  for (const std::string& input : inputs) {
    try {
      const zffvad::SampleBuffer audio = zffvad::read_wav(input);
      zffvad::export_composite(audio, cfg.zff, cfg.pipeline,
                               fs::path(out_dir) / fs::path(input).filename());
    } catch (const zffvad::Error& err) {
      std::fprintf(stderr, "error: %s: %s\n", input.c_str(), err.what());
      ++failed;
    }
  }
  if (failed == 0) return kExitOk;
  return failed == inputs.size() ? kExitUsage : kExitPartial;
}

struct ManifestEntry {
  std::string wav;
  std::string labels;
  std::string condition;
};

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw zffvad::Error("cannot open manifest: " + path);
  }
  std::vector<ManifestEntry> entries;
  std::string line;
  int number = 0;
  while (std::getline(file, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 =
        tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos) {
      throw zffvad::Error("manifest line " + std::to_string(number) +
                          " needs 'wav<TAB>labels<TAB>condition': '" + line +
                          "'");
    }
    ManifestEntry entry;
    entry.wav = line.substr(0, tab1);
    entry.labels = line.substr(tab1 + 1, tab2 - tab1 - 1);
    entry.condition = line.substr(tab2 + 1);
    if (entry.wav.empty() || entry.labels.empty() || entry.condition.empty()) {
      throw zffvad::Error("manifest line " + std::to_string(number) +
                          " has an empty field");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

void append_counts_row(std::string* csv, const std::string& id,
                       const std::string& condition,
                       const zffvad::ScoreCounts& counts) {
  *csv += id + "," + condition + "," + std::to_string(counts.tp) + "," +
          std::to_string(counts.fp) + "," + std::to_string(counts.fn) + "," +
          std::to_string(counts.tn) + "," +
          format_fixed(counts.precision(), 6) + "," +
          format_fixed(counts.recall(), 6) + "," + format_fixed(counts.f1(), 6) +
          "\n";
}

int cmd_evaluate(const std::string& manifest_path, const std::string& report,
                 const std::string& external_segments,
                 const zffvad::RunConfig& cfg) {
  const std::vector<ManifestEntry> entries = read_manifest(manifest_path);
  if (entries.empty()) {
    throw zffvad::Error("manifest is empty: " + manifest_path);
  }

  struct Outcome {
    bool ok = false;
    zffvad::FileScore score;
    std::string error;
  };
  std::vector<Outcome> outcomes(entries.size());

  const auto process = [&](std::size_t index) {
    const ManifestEntry& entry = entries[index];
    Outcome& outcome = outcomes[index];
    try {
      const zffvad::SampleBuffer audio = zffvad::read_wav(entry.wav);
      const double duration = audio.duration_s();
      const zffvad::FrameLabels ref =
          zffvad::read_labels(entry.labels, cfg.eval_hop_ms, duration);
      zffvad::FrameLabels hyp;
      if (external_segments.empty()) {
        const zffvad::DetectResult det =
            zffvad::detect(audio, cfg.zff, cfg.pipeline);
        hyp = zffvad::segments_to_frames(det.segments, cfg.eval_hop_ms,
                                         duration);
      } else {
        const fs::path seg_path =
            fs::path(external_segments) /
            (fs::path(entry.wav).stem().string() + ".seg");
        hyp = zffvad::read_labels(seg_path, cfg.eval_hop_ms, duration);
      }
      outcome.score.file_id = entry.wav;
      outcome.score.condition = entry.condition;
      outcome.score.counts = zffvad::score(hyp, ref);
      outcome.ok = true;
    } catch (const zffvad::Error& err) {
      outcome.error = err.what();
    }
  };

  const int jobs = cfg.jobs;
  if (jobs <= 1 || entries.size() <= 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) process(i);
  } else {
    std::vector<std::thread> workers;
    std::mutex next_mutex;
    std::size_t next = 0;
    const std::size_t worker_count =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), entries.size());
    for (std::size_t w = 0; w < worker_count; ++w) {
      workers.emplace_back([&]() {
        while (true) {
          std::size_t index;
          {
            std::lock_guard<std::mutex> lock(next_mutex);
            if (next >= entries.size()) return;
            index = next++;
          }
          process(index);
        }
      });
    }
    for (std::thread& worker : workers) worker.join();
  }

  // Deterministic manifest-order merge.
  std::vector<zffvad::FileScore> scores;
  std::vector<std::pair<std::string, std::string>> skipped;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (outcomes[i].ok) {
      scores.push_back(outcomes[i].score);
    } else {
      skipped.emplace_back(entries[i].wav, outcomes[i].error);
      std::fprintf(stderr, "error: %s: %s\n", entries[i].wav.c_str(),
                   outcomes[i].error.c_str());
    }
  }
  if (scores.empty()) {
    throw zffvad::Error("no manifest entry could be processed");
  }

  const zffvad::EvalReport rep = zffvad::aggregate(scores);

  std::string csv = "file_id,condition,tp,fp,fn,tn,precision,recall,f1\n";
  for (const zffvad::FileScore& file : rep.per_file) {
    append_counts_row(&csv, file.file_id, file.condition, file.counts);
  }
  for (const zffvad::GroupScore& group : rep.groups) {
    append_counts_row(&csv, "__group__:" + group.tag, group.tag, group.pooled);
  }
  append_counts_row(&csv, "__group__:overall", "overall", rep.overall.pooled);
  for (const auto& [wav, reason] : skipped) {
    csv += "# skipped " + wav + ": " + reason + "\n";
  }
  {
    std::ofstream file(report, std::ios::trunc);
    if (!file) {
      throw zffvad::Error("cannot open for writing: " + report);
    }
    file << csv;
  }

  for (const zffvad::GroupScore& group : rep.groups) {
    std::printf("condition %s: F1 %s  precision %s  recall %s  (%zu files)\n",
                group.tag.c_str(), format_fixed(group.pooled.f1(), 4).c_str(),
                format_fixed(group.pooled.precision(), 4).c_str(),
                format_fixed(group.pooled.recall(), 4).c_str(),
                group.file_count);
  }
  std::printf("overall: F1 %s  precision %s  recall %s  (%zu files)\n",
              format_fixed(rep.overall.pooled.f1(), 4).c_str(),
              format_fixed(rep.overall.pooled.precision(), 4).c_str(),
              format_fixed(rep.overall.pooled.recall(), 4).c_str(),
              rep.overall.file_count);
  std::printf("std of F1 across conditions: %s\n",
              format_fixed(rep.f1_std_across_groups, 4).c_str());
  return skipped.empty() ? kExitOk : kExitPartial;
}

struct SynthLayout {
  std::vector<zffvad::Segment> bursts;
  double f0 = 120.0;
};

std::vector<SynthLayout> synth_layouts(int count, double duration,
                                       std::uint64_t seed) {
  std::vector<SynthLayout> layouts;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> f0_dist(95.0, 220.0);
  std::uniform_real_distribution<double> start_dist(0.2, 0.4);
  std::uniform_real_distribution<double> len_dist(0.25, 0.5);
  std::uniform_real_distribution<double> gap_dist(0.2, 0.4);
  for (int i = 0; i < count; ++i) {
    SynthLayout layout;
    layout.f0 = f0_dist(rng);
    double t = start_dist(rng);
    while (true) {
      const double len = len_dist(rng);
      if (t + len > duration - 0.1) break;
      layout.bursts.push_back({t, t + len});
      t += len + gap_dist(rng);
    }
    if (layout.bursts.empty()) {
      // Very short files still carry one audible burst.
      const double end = std::min(duration - 0.05, 0.2 + 0.4);
      if (end > 0.25) layout.bursts.push_back({0.2, end});
    }
    layouts.push_back(std::move(layout));
  }
  return layouts;
}

int cmd_synth(const std::string& out_dir, int layouts, double duration,
              std::uint64_t seed, const std::string& snr_list,
              const std::string& noise_list) {
  if (layouts < 1) {
    throw zffvad::Error("--layouts must be at least 1");
  }
  if (!(duration > 0.0)) {
    throw zffvad::Error("--duration must be positive");
  }

  bool want_clean = false;
  std::vector<double> snrs;
  {
    std::stringstream stream(snr_list);
    std::string token;
    while (std::getline(stream, token, ',')) {
      std::size_t lo = token.find_first_not_of(" \t");
      if (lo == std::string::npos) continue;
      std::size_t hi = token.find_last_not_of(" \t");
      token = token.substr(lo, hi - lo + 1);
      if (token == "clean") {
        want_clean = true;
        continue;
      }
      double v = 0.0;
      const std::from_chars_result res =
          std::from_chars(token.data(), token.data() + token.size(), v);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw zffvad::Error("--snr entry '" + token +
                            "' is neither 'clean' nor a number");
      }
      snrs.push_back(v);
    }
  }
  if (!want_clean && snrs.empty()) {
    throw zffvad::Error("--snr selected nothing to synthesize");
  }

  std::vector<zffvad::NoiseKind> kinds;
  {
    std::stringstream stream(noise_list);
    std::string token;
    while (std::getline(stream, token, ',')) {
      if (!token.empty()) kinds.push_back(zffvad::parse_noise_kind(token));
    }
  }
  if (kinds.empty() && !snrs.empty()) {
    throw zffvad::Error("--noise selected no noise kind");
  }

  fs::create_directories(out_dir);
  const std::vector<SynthLayout> plan = synth_layouts(layouts, duration, seed);

  struct Condition {
    std::string tag;
    std::optional<double> snr;
    zffvad::NoiseKind kind = zffvad::NoiseKind::kWhite;
  };
  std::vector<Condition> conditions;
  if (want_clean) {
    conditions.push_back({"clean", std::nullopt, zffvad::NoiseKind::kWhite});
  }
  for (zffvad::NoiseKind kind : kinds) {
    for (double snr : snrs) {
      conditions.push_back(
          {zffvad::to_string(kind) + "_snr" + format_shortest(snr), snr, kind});
    }
  }

  std::string manifest;
  for (int i = 0; i < layouts; ++i) {
    for (std::size_t c = 0; c < conditions.size(); ++c) {
      const Condition& cond = conditions[c];
      zffvad::SynthSpec spec;
      spec.bursts = plan[static_cast<std::size_t>(i)].bursts;
      spec.f0_hz = plan[static_cast<std::size_t>(i)].f0;
      spec.duration_s = duration;
      spec.snr_db = cond.snr;
      spec.noise = cond.kind;
      spec.seed = seed * 1000003ULL + static_cast<std::uint64_t>(i) * 131ULL +
                  static_cast<std::uint64_t>(c);
      const zffvad::SynthResult synth = zffvad::synthesize(spec);

      char stem[64];
      std::snprintf(stem, sizeof(stem), "layout%02d_%s", i, cond.tag.c_str());
      const fs::path wav = fs::path(out_dir) / (std::string(stem) + ".wav");
      const fs::path lab = fs::path(out_dir) / (std::string(stem) + ".lab");
      zffvad::write_wav(synth.audio, wav);
      {
        std::ofstream file(lab, std::ios::trunc);
        if (!file) {
          throw zffvad::Error("cannot open for writing: " + lab.string());
        }
        for (std::uint8_t v : synth.labels.voiced) {
          file << (v != 0 ? '1' : '0');
        }
        file << '\n';
      }
      manifest +=
          wav.string() + "\t" + lab.string() + "\t" + cond.tag + "\n";
    }
  }
  {
    const fs::path path = fs::path(out_dir) / "manifest.tsv";
    std::ofstream file(path, std::ios::trunc);
    if (!file) {
      throw zffvad::Error("cannot open for writing: " + path.string());
    }
    file << manifest;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"Voice activity detection through zero-frequency filtering"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<std::string> inputs;
  std::string out_dir;
  bool dump_surface = false;

  CLI::App* detect = app.add_subcommand(
      "detect", "Detect voiced segments, one .seg file per input");
  detect->add_option("inputs", inputs, "Input wav files")->required();
  detect->add_option("--out", out_dir, "Output directory")->required();
  detect->add_flag("--dump-surface", dump_surface,
                   "Also write <stem>.surface.csv with per-sample evidence");
  detect->add_option("--config", config_path, "key = value config file");
  detect->add_option("--set", overrides,
                     "Override one config key, e.g. --set min_segment_ms=80");

  CLI::App* exporter = app.add_subcommand(
      "export-composite",
      "Write the composite weight as a wav, mirroring input names");
  exporter->add_option("inputs", inputs, "Input wav files")->required();
  exporter->add_option("--out", out_dir, "Output directory")->required();
  exporter->add_option("--config", config_path, "key = value config file");
  exporter->add_option("--set", overrides, "Override one config key");

  std::string manifest_path;
  std::string report_path = "report.csv";
  std::string external_segments;
  int jobs_flag = 0;

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score detection against a wav<TAB>labels<TAB>condition "
                  "manifest");
  evaluate->add_option("manifest", manifest_path, "Manifest file")->required();
  evaluate->add_option("--report", report_path, "Report CSV path");
  evaluate->add_option("--external-segments", external_segments,
                       "Score .seg files from this directory instead of "
                       "running detection");
  evaluate->add_option("--jobs", jobs_flag, "Process files in parallel");
  evaluate->add_option("--config", config_path, "key = value config file");
  evaluate->add_option("--set", overrides, "Override one config key");

  int layouts = 10;
  double duration = 3.0;
  std::uint64_t seed = 0;
  std::string snr_list = "clean,20,15,10,5,0,-5";
  std::string noise_list = "white";

  CLI::App* synth = app.add_subcommand(
      "synth", "Render a labeled synthetic corpus with a manifest");
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--layouts", layouts, "Number of burst layouts");
  synth->add_option("--duration", duration, "Utterance length in seconds");
  synth->add_option("--seed", seed, "Master random seed");
  synth->add_option("--snr", snr_list,
                    "Comma list of SNR dB values and/or 'clean'");
  synth->add_option("--noise", noise_list,
                    "Comma list of noise kinds: white, babble, pink");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (detect->parsed()) {
      const zffvad::RunConfig cfg = resolve_config(config_path, overrides);
      return cmd_detect(inputs, out_dir, dump_surface, cfg);
    }
    if (exporter->parsed()) {
      const zffvad::RunConfig cfg = resolve_config(config_path, overrides);
      return cmd_export_composite(inputs, out_dir, cfg);
    }
    if (evaluate->parsed()) {
      zffvad::RunConfig cfg = resolve_config(config_path, overrides);
      if (jobs_flag > 0) cfg.jobs = jobs_flag;
      return cmd_evaluate(manifest_path, report_path, external_segments, cfg);
    }
    if (synth->parsed()) {
      return cmd_synth(out_dir, layouts, duration, seed, snr_list, noise_list);
    }
  } catch (const zffvad::Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitUsage;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "internal error: %s\n", err.what());
    return kExitUsage;
  }
  return kExitUsage;
}
