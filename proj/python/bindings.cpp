// Copyright 2026 The Varco Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "varco/codec.hpp"
#include "varco/config.hpp"
#include "varco/error.hpp"
#include "varco/experiment.hpp"
#include "varco/partition.hpp"
#include "varco/scheduler.hpp"

namespace py = pybind11;

namespace {

py::dict metrics_dict(const varco::MetricsRecord& m) {
  py::dict d;
  d["epoch"] = m.epoch;
  d["ratio"] = m.ratio;
  d["train_loss"] = m.train_loss;
  d["val_acc"] = m.val_acc;
  d["test_acc"] = m.test_acc;
  d["fwd_floats"] = m.fwd_floats;
  d["bwd_floats"] = m.bwd_floats;
  d["param_floats"] = m.param_floats;
  d["cum_floats"] = m.cum_floats;
  return d;
}

varco::TrainConfig make_config(const std::map<std::string, std::string>& settings) {
  varco::TrainConfig cfg;
  for (const auto& [key, value] : settings) varco::apply_setting(cfg, key, value);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_varco, m) {
  m.doc() = "Distributed graph convolutional training with compressed halo exchange.";

  auto error = py::register_exception<varco::Error>(m, "Error");
  py::register_exception<varco::InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<varco::ParseError>(m, "ParseError", error.ptr());
  py::register_exception<varco::NumericFailure>(m, "NumericFailure", error.ptr());
  py::register_exception<varco::CorruptBlock>(m, "CorruptBlock", error.ptr());
  py::register_exception<varco::IoError>(m, "IoError", error.ptr());

  m.def(
      "train",
      [](const std::map<std::string, std::string>& settings) {
        const auto result = varco::run_training(make_config(settings));
        py::list rows;
        for (const auto& r : result.metrics) rows.append(metrics_dict(r));
        return rows;
      },
      py::arg("settings") = std::map<std::string, std::string>{},
      "Trains with dotted config keys (as in config files) and returns per-epoch metrics.");

  m.def(
      "partition_stats",
      [](const std::map<std::string, std::string>& settings) {
        const auto cfg = make_config(settings);
        const auto g = varco::build_graph(cfg);
        const auto p = varco::build_partition(g, cfg);
        const auto s = varco::cross_edge_stats(p);
        py::dict d;
        d["workers"] = p.num_workers;
        d["nodes"] = g.num_nodes();
        d["self_edges"] = s.self_count;
        d["cross_edges"] = s.cross_count;
        d["cross_fraction"] = s.cross_fraction;
        return d;
      },
      py::arg("settings") = std::map<std::string, std::string>{});

  m.def(
      "ratio_at",
      [](const std::string& kind, std::uint32_t t, std::uint32_t horizon, double c_max,
         double c_min, double slope, double step, double base) {
        varco::SchedulerSpec spec;
        spec.kind = varco::parse_scheduler_kind(kind);
        spec.horizon = horizon;
        spec.c_max = c_max;
        spec.c_min = c_min;
        spec.slope = slope;
        spec.step = step;
        spec.base = base;
        varco::validate(spec);
        return varco::ratio_at(spec, t);
      },
      py::arg("kind"), py::arg("t"), py::arg("horizon") = 300, py::arg("c_max") = 128.0,
      py::arg("c_min") = 1.0, py::arg("slope") = 5.0, py::arg("step") = 0.0,
      py::arg("base") = 2.0);

  m.def("kept_count", &varco::kept_count, py::arg("length"), py::arg("ratio"));

  m.def(
      "round_trip",
      [](const std::vector<double>& x, double ratio, std::uint64_t key_seed, std::uint32_t epoch,
         std::uint32_t node) {
        const varco::Codec codec(varco::MasterKey::from_seed(key_seed));
        varco::KeyContext ctx;
        ctx.epoch = epoch;
        ctx.node = node;
        return codec.decompress(codec.compress(x, ratio, ctx), ctx);
      },
      py::arg("x"), py::arg("ratio"), py::arg("key_seed") = 0, py::arg("epoch") = 0,
      py::arg("node") = 0, "Compresses and decompresses one vector.");
}
