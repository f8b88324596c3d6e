// bindings/py_module.cc

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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zffvad/audio_io.h"
#include "zffvad/error.h"
#include "zffvad/eval.h"
#include "zffvad/pipeline.h"
#include "zffvad/run_config.h"
#include "zffvad/synth.h"
#include "zffvad/zff.h"

namespace py = pybind11;

namespace {

zffvad::SampleBuffer to_buffer(const py::array_t<double>& samples, int rate) {
  const py::buffer_info info = samples.request();
  if (info.ndim != 1) {
    throw zffvad::Error("expected a 1-D array of samples");
  }
  zffvad::SampleBuffer buf;
  buf.sample_rate_hz = rate;
  buf.samples.resize(static_cast<std::size_t>(info.shape[0]));
  const double* data = static_cast<const double*>(info.ptr);
  const std::size_t stride =
      static_cast<std::size_t>(info.strides[0]) / sizeof(double);
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    buf.samples[i] = data[i * stride];
  }
  return buf;
}

py::array_t<double> to_array(const std::vector<double>& values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  double* data = static_cast<double*>(out.request().ptr);
  for (std::size_t i = 0; i < values.size(); ++i) data[i] = values[i];
  return out;
}

// Keyword arguments map onto run-config keys, so Python callers tune the
// pipeline with the same vocabulary as config files.
zffvad::RunConfig config_from_kwargs(const py::kwargs& kwargs) {
  zffvad::RunConfig cfg;
  for (const auto& item : kwargs) {
    const std::string key = py::cast<std::string>(item.first);
    std::string value;
    if (py::isinstance<py::str>(item.second)) {
      value = py::cast<std::string>(item.second);
    } else if (py::isinstance<py::list>(item.second) ||
               py::isinstance<py::tuple>(item.second)) {
      bool first = true;
      for (const auto& element : item.second) {
        if (!first) value += ",";
        value += py::cast<std::string>(py::str(element));
        first = false;
      }
    } else {
      value = py::cast<std::string>(py::str(item.second));
    }
    cfg.apply(key, value);
  }
  cfg.validate();
  return cfg;
}

py::list segments_to_list(const zffvad::SegmentList& segments) {
  py::list out;
  for (const zffvad::Segment& seg : segments.segments) {
    out.append(py::make_tuple(seg.start_s, seg.end_s));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Voice activity detection through zero-frequency filtering";

  py::register_exception<zffvad::Error>(m, "ZffvadError", PyExc_RuntimeError);

  m.def(
      "read_wav",
      [](const std::string& path) {
        const zffvad::SampleBuffer buf = zffvad::read_wav(path);
        return py::make_tuple(to_array(buf.samples), buf.sample_rate_hz);
      },
      py::arg("path"),
      "Read a mono wav file; returns (samples, sample_rate_hz).");

  m.def(
      "write_wav",
      [](const py::array_t<double>& samples, int sample_rate_hz,
         const std::string& path) {
        zffvad::write_wav(to_buffer(samples, sample_rate_hz), path);
      },
      py::arg("samples"), py::arg("sample_rate_hz"), py::arg("path"),
      "Write mono PCM16; out-of-range samples saturate.");

  m.def(
      "detect",
      [](const py::array_t<double>& samples, int sample_rate_hz,
         const py::kwargs& kwargs) {
        const zffvad::RunConfig cfg = config_from_kwargs(kwargs);
        const zffvad::DetectResult result = zffvad::detect(
            to_buffer(samples, sample_rate_hz), cfg.zff, cfg.pipeline);
        return segments_to_list(result.segments);
      },
      py::arg("samples"), py::arg("sample_rate_hz"),
      "Detect voiced segments; returns [(start_s, end_s), ...]. Keyword "
      "arguments override config keys, e.g. min_segment_ms=80.");

  m.def(
      "detect_full",
      [](const py::array_t<double>& samples, int sample_rate_hz,
         const py::kwargs& kwargs) {
        const zffvad::RunConfig cfg = config_from_kwargs(kwargs);
        const zffvad::DetectResult result = zffvad::detect(
            to_buffer(samples, sample_rate_hz), cfg.zff, cfg.pipeline);
        py::dict out;
        out["segments"] = segments_to_list(result.segments);
        out["r_c"] = to_array(result.surface.r_c);
        out["inv_entropy"] = to_array(result.surface.inv_entropy);
        out["y_ds"] = to_array(result.surface.y_ds);
        out["theta"] = to_array(result.surface.expanded_thresholds());
        return out;
      },
      py::arg("samples"), py::arg("sample_rate_hz"),
      "Detect and also return the per-sample decision surface arrays.");

  m.def(
      "composite_signal",
      [](const py::array_t<double>& samples, int sample_rate_hz,
         const py::kwargs& kwargs) {
        const zffvad::RunConfig cfg = config_from_kwargs(kwargs);
        return to_array(zffvad::composite_signal(
            to_buffer(samples, sample_rate_hz), cfg.zff, cfg.pipeline));
      },
      py::arg("samples"), py::arg("sample_rate_hz"),
      "The normalized composite weight, one value per input sample.");

  m.def(
      "zero_frequency_filter",
      [](const py::array_t<double>& samples, int sample_rate_hz) {
        return to_array(zffvad::zero_frequency_filter(
            to_buffer(samples, sample_rate_hz)));
      },
      py::arg("samples"), py::arg("sample_rate_hz"),
      "The raw double-integrator recursion (callers remove the mean).");

  m.def(
      "segments_to_frames",
      [](const std::vector<std::pair<double, double>>& segments, double hop_ms,
         double duration_s) {
        zffvad::SegmentList list;
        for (const auto& [start, end] : segments) {
          list.segments.push_back({start, end});
        }
        list.total_duration_s = duration_s;
        const zffvad::FrameLabels labels =
            zffvad::segments_to_frames(list, hop_ms, duration_s);
        py::list out;
        for (std::uint8_t v : labels.voiced) out.append(static_cast<int>(v));
        return out;
      },
      py::arg("segments"), py::arg("hop_ms"), py::arg("duration_s"),
      "Rasterize segments onto a frame grid (majority-overlap rule).");

  m.def(
      "score_frames",
      [](const std::vector<int>& hyp, const std::vector<int>& ref,
         double hop_ms) {
        zffvad::FrameLabels h, r;
        h.hop_ms = r.hop_ms = hop_ms;
        for (int v : hyp) h.voiced.push_back(v != 0 ? 1 : 0);
        for (int v : ref) r.voiced.push_back(v != 0 ? 1 : 0);
        h.duration_s = static_cast<double>(h.voiced.size()) * hop_ms / 1000.0;
        r.duration_s = static_cast<double>(r.voiced.size()) * hop_ms / 1000.0;
        const zffvad::ScoreCounts counts = zffvad::score(h, r);
        py::dict out;
        out["tp"] = counts.tp;
        out["fp"] = counts.fp;
        out["fn"] = counts.fn;
        out["tn"] = counts.tn;
        out["precision"] = counts.precision();
        out["recall"] = counts.recall();
        out["f1"] = counts.f1();
        return out;
      },
      py::arg("hyp"), py::arg("ref"), py::arg("hop_ms") = 10.0,
      "Frame-level confusion counts and ratios for two 0/1 label lists.");

  m.def(
      "synthesize",
      [](const std::vector<std::pair<double, double>>& bursts, double f0_hz,
         std::optional<double> snr_db, const std::string& noise,
         double duration_s, std::uint64_t seed, int sample_rate_hz) {
        zffvad::SynthSpec spec;
        for (const auto& [start, end] : bursts) {
          spec.bursts.push_back({start, end});
        }
        spec.f0_hz = f0_hz;
        spec.snr_db = snr_db;
        spec.noise = zffvad::parse_noise_kind(noise);
        spec.duration_s = duration_s;
        spec.seed = seed;
        spec.sample_rate_hz = sample_rate_hz;
        const zffvad::SynthResult result = zffvad::synthesize(spec);
        py::list labels;
        for (std::uint8_t v : result.labels.voiced) {
          labels.append(static_cast<int>(v));
        }
        return py::make_tuple(to_array(result.audio.samples),
                              result.audio.sample_rate_hz, labels);
      },
      py::arg("bursts"), py::arg("f0_hz") = 120.0,
      py::arg("snr_db") = py::none(), py::arg("noise") = "white",
      py::arg("duration_s") = 3.0, py::arg("seed") = 0,
      py::arg("sample_rate_hz") = 8000,
      "Render a labeled synthetic utterance; returns (samples, rate, "
      "frame_labels).");
}
