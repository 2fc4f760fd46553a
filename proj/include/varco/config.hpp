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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "varco/codec.hpp"
#include "varco/graph.hpp"
#include "varco/gso.hpp"
#include "varco/model.hpp"
#include "varco/runtime.hpp"
#include "varco/scheduler.hpp"

namespace varco {

// Experiment arms. full = lossless exchange, nocomm = halo buffers stay zero,
// fixed = constant ratio, varco = the configured decreasing scheduler.
enum class Arm { varco, full, nocomm, fixed };

Arm parse_arm(std::string_view name);
std::string_view to_string(Arm arm);

enum class DataSource { synth, files };
enum class PartitionMethod { random, bfs, file };

struct TrainConfig {
  DataSource data_source = DataSource::synth;
  SbmParams sbm;
  std::filesystem::path edge_path;
  std::filesystem::path feature_path;
  std::filesystem::path label_path;
  std::uint64_t split_seed = 0;

  PartitionMethod partition_method = PartitionMethod::random;
  std::uint32_t workers = 4;
  std::uint64_t partition_seed = 0;
  std::filesystem::path partition_path;

  std::uint32_t layers = 3;
  std::uint32_t hidden = 32;
  std::uint32_t taps = 2;
  Activation activation = Activation::relu;
  GsoKind gso = GsoKind::mean_neighbor;
  std::uint64_t init_seed = 0;

  std::uint32_t epochs = 300;
  double lr = 0.5;
  Arm arm = Arm::varco;
  double fixed_ratio = 4.0;
  double spectral_bound = 0.0;
  SchedulerSpec scheduler;

  MasterKey codec_key = MasterKey::from_seed(0);
  bool codec_unbiased = false;

  ExecutionMode mode = ExecutionMode::sequential;
  std::filesystem::path output_dir = "out";
};

// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

// Applies one dotted key. Throws InvalidArgument on unknown keys or bad values.
void apply_setting(TrainConfig& cfg, std::string_view key, std::string_view value);

TrainConfig load_config(const std::filesystem::path& path);

// epochs >= 1, lr > 0, a valid scheduler, and referenced input files exist.
void validate(const TrainConfig& cfg);

// The schedule the arm actually runs (horizon = epochs).
SchedulerSpec effective_schedule(const TrainConfig& cfg);

// Model widths F_0..F_L for a graph with `features` inputs and `classes` outputs.
std::vector<std::size_t> model_dims(const TrainConfig& cfg, std::size_t features,
                                    std::size_t classes);

}  // namespace varco
