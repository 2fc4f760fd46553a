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

#include <functional>
#include <vector>

#include "varco/config.hpp"
#include "varco/graph.hpp"
#include "varco/metrics.hpp"
#include "varco/model.hpp"
#include "varco/partition.hpp"

namespace varco {

Graph build_graph(const TrainConfig& cfg);
Partition build_partition(const Graph& g, const TrainConfig& cfg);
RuntimeOptions runtime_options(const TrainConfig& cfg);

struct TrainResult {
  std::vector<MetricsRecord> metrics;
  ModelParams params;
};

using EpochCallback = std::function<void(const MetricsRecord&)>;

// Runs cfg.epochs rounds of the configured arm. Throws NumericFailure on a
// non-finite loss.
TrainResult run_training(const TrainConfig& cfg, const Graph& g, const Partition& p,
                         const EpochCallback& on_epoch = {});
TrainResult run_training(const TrainConfig& cfg, const EpochCallback& on_epoch = {});

}  // namespace varco
