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

#include "varco/config.hpp"

#include <fstream>
#include <functional>
#include <limits>

#include "varco/error.hpp"
#include "varco/text.hpp"

namespace varco {
namespace {

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  const auto v = parse_uint(value);
  if (!v) throw InvalidArgument(std::string(key) + ": expected a nonnegative integer, got \"" +
                                std::string(value) + "\"");
  return *v;
}

std::uint32_t to_u32(std::string_view key, std::string_view value) {
  const auto v = to_uint(key, value);
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument(std::string(key) + ": value too large");
  }
  return static_cast<std::uint32_t>(v);
}

double to_double(std::string_view key, std::string_view value) {
  const auto v = parse_double(value);
  if (!v) throw InvalidArgument(std::string(key) + ": expected a number, got \"" +
                                std::string(value) + "\"");
  return *v;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidArgument(std::string(key) + ": expected true/false, got \"" + std::string(value) + "\"");
}

using Setter = std::function<void(TrainConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"data.source",
       [](TrainConfig& c, auto k, auto v) {
         if (v == "synth") {
           c.data_source = DataSource::synth;
         } else if (v == "files") {
           c.data_source = DataSource::files;
         } else {
           throw InvalidArgument(std::string(k) + ": expected synth or files");
         }
       }},
      {"data.n", [](TrainConfig& c, auto k, auto v) { c.sbm.n = to_uint(k, v); }},
      {"data.classes", [](TrainConfig& c, auto k, auto v) { c.sbm.classes = to_uint(k, v); }},
      {"data.p_in", [](TrainConfig& c, auto k, auto v) { c.sbm.p_in = to_double(k, v); }},
      {"data.p_out", [](TrainConfig& c, auto k, auto v) { c.sbm.p_out = to_double(k, v); }},
      {"data.feat_dim", [](TrainConfig& c, auto k, auto v) { c.sbm.feat_dim = to_uint(k, v); }},
      {"data.noise", [](TrainConfig& c, auto k, auto v) { c.sbm.noise = to_double(k, v); }},
      {"data.seed", [](TrainConfig& c, auto k, auto v) { c.sbm.seed = to_uint(k, v); }},
      {"data.edges", [](TrainConfig& c, auto, auto v) { c.edge_path = std::string(v); }},
      {"data.features", [](TrainConfig& c, auto, auto v) { c.feature_path = std::string(v); }},
      {"data.labels", [](TrainConfig& c, auto, auto v) { c.label_path = std::string(v); }},
      {"data.split_seed", [](TrainConfig& c, auto k, auto v) { c.split_seed = to_uint(k, v); }},
      {"partition.method",
       [](TrainConfig& c, auto k, auto v) {
         if (v == "random") {
           c.partition_method = PartitionMethod::random;
         } else if (v == "bfs") {
           c.partition_method = PartitionMethod::bfs;
         } else if (v == "file") {
           c.partition_method = PartitionMethod::file;
         } else {
           throw InvalidArgument(std::string(k) + ": expected random, bfs or file");
         }
       }},
      {"partition.workers", [](TrainConfig& c, auto k, auto v) { c.workers = to_u32(k, v); }},
      {"partition.seed", [](TrainConfig& c, auto k, auto v) { c.partition_seed = to_uint(k, v); }},
      {"partition.file", [](TrainConfig& c, auto, auto v) { c.partition_path = std::string(v); }},
      {"model.layers", [](TrainConfig& c, auto k, auto v) { c.layers = to_u32(k, v); }},
      {"model.hidden", [](TrainConfig& c, auto k, auto v) { c.hidden = to_u32(k, v); }},
      {"model.taps", [](TrainConfig& c, auto k, auto v) { c.taps = to_u32(k, v); }},
      {"model.activation", [](TrainConfig& c, auto, auto v) { c.activation = parse_activation(v); }},
      {"model.gso", [](TrainConfig& c, auto, auto v) { c.gso = parse_gso_kind(v); }},
      {"model.init_seed", [](TrainConfig& c, auto k, auto v) { c.init_seed = to_uint(k, v); }},
      {"train.epochs", [](TrainConfig& c, auto k, auto v) { c.epochs = to_u32(k, v); }},
      {"train.lr", [](TrainConfig& c, auto k, auto v) { c.lr = to_double(k, v); }},
      {"train.arm", [](TrainConfig& c, auto, auto v) { c.arm = parse_arm(v); }},
      {"train.fixed_ratio", [](TrainConfig& c, auto k, auto v) { c.fixed_ratio = to_double(k, v); }},
      {"train.spectral_bound",
       [](TrainConfig& c, auto k, auto v) { c.spectral_bound = to_double(k, v); }},
      {"scheduler.kind",
       [](TrainConfig& c, auto, auto v) { c.scheduler.kind = parse_scheduler_kind(v); }},
      {"scheduler.c_max", [](TrainConfig& c, auto k, auto v) { c.scheduler.c_max = to_double(k, v); }},
      {"scheduler.c_min", [](TrainConfig& c, auto k, auto v) { c.scheduler.c_min = to_double(k, v); }},
      {"scheduler.slope", [](TrainConfig& c, auto k, auto v) { c.scheduler.slope = to_double(k, v); }},
      {"scheduler.step", [](TrainConfig& c, auto k, auto v) { c.scheduler.step = to_double(k, v); }},
      {"scheduler.base", [](TrainConfig& c, auto k, auto v) { c.scheduler.base = to_double(k, v); }},
      {"codec.key",
       [](TrainConfig& c, auto, auto v) {
         c.codec_key = v.size() == 32 && !parse_uint(v) ? MasterKey::from_hex(v)
                                                        : MasterKey::from_seed(to_uint("codec.key", v));
       }},
      {"codec.unbiased",
       [](TrainConfig& c, auto k, auto v) { c.codec_unbiased = to_bool(k, v); }},
      {"runtime.mode", [](TrainConfig& c, auto, auto v) { c.mode = parse_execution_mode(v); }},
      {"output.dir", [](TrainConfig& c, auto, auto v) { c.output_dir = std::string(v); }},
  };
  return table;
}

}  // namespace

Arm parse_arm(std::string_view name) {
  if (name == "varco") return Arm::varco;
  if (name == "full") return Arm::full;
  if (name == "nocomm") return Arm::nocomm;
  if (name == "fixed") return Arm::fixed;
  throw InvalidArgument("unknown arm \"" + std::string(name) + "\" (varco, full, nocomm, fixed)");
}

std::string_view to_string(Arm arm) {
  switch (arm) {
    case Arm::varco:
      return "varco";
    case Arm::full:
      return "full";
    case Arm::nocomm:
      return "nocomm";
    case Arm::fixed:
      return "fixed";
  }
  return "unknown";
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(path.string(), lineno, "expected \"key = value\"");
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(path.string(), lineno, "empty key");
    out[std::string(key)] = std::string(value);
  }
  return out;
}

void apply_setting(TrainConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw InvalidArgument("unknown config key \"" + std::string(key) + "\"");
  it->second(cfg, key, trim(value));
}

TrainConfig load_config(const std::filesystem::path& path) {
  TrainConfig cfg;
  for (const auto& [k, v] : read_key_values(path)) {
    try {
      apply_setting(cfg, k, v);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(path.string() + ": " + e.what());
    }
  }
  return cfg;
}

void validate(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw InvalidArgument("train.epochs must be >= 1");
  if (!(cfg.lr > 0.0)) throw InvalidArgument("train.lr must be > 0");
  if (cfg.workers < 1) throw InvalidArgument("partition.workers must be >= 1");
  if (cfg.layers < 1) throw InvalidArgument("model.layers must be >= 1");
  if (cfg.taps < 1) throw InvalidArgument("model.taps must be >= 1");
  if (cfg.layers > 1 && cfg.hidden < 1) throw InvalidArgument("model.hidden must be >= 1");
  if (cfg.arm == Arm::fixed && !(cfg.fixed_ratio >= 1.0)) {
    throw InvalidArgument("train.fixed_ratio must be >= 1");
  }
  validate(effective_schedule(cfg));
  auto require = [](const std::filesystem::path& p, const char* key) {
    if (p.empty()) throw InvalidArgument(std::string(key) + " is required");
    if (!std::filesystem::exists(p)) {
      throw InvalidArgument(std::string(key) + ": " + p.string() + " does not exist");
    }
  };
  if (cfg.data_source == DataSource::files) {
    require(cfg.edge_path, "data.edges");
    require(cfg.feature_path, "data.features");
    require(cfg.label_path, "data.labels");
  }
  if (cfg.partition_method == PartitionMethod::file) require(cfg.partition_path, "partition.file");
}

SchedulerSpec effective_schedule(const TrainConfig& cfg) {
  switch (cfg.arm) {
    case Arm::full:
    case Arm::nocomm:
      return SchedulerSpec::fixed(1.0, cfg.epochs);
    case Arm::fixed:
      return SchedulerSpec::fixed(cfg.fixed_ratio, cfg.epochs);
    case Arm::varco:
      break;
  }
  SchedulerSpec s = cfg.scheduler;
  s.horizon = cfg.epochs;
  return s;
}

std::vector<std::size_t> model_dims(const TrainConfig& cfg, std::size_t features,
                                    std::size_t classes) {
  std::vector<std::size_t> dims{features};
  for (std::uint32_t l = 1; l < cfg.layers; ++l) dims.push_back(cfg.hidden);
  dims.push_back(classes);
  return dims;
}

}  // namespace varco
