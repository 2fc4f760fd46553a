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

#include "varco/experiment.hpp"

#include "varco/error.hpp"
#include "varco/graph_io.hpp"
#include "varco/gso.hpp"
#include "varco/runtime.hpp"

namespace varco {

Graph build_graph(const TrainConfig& cfg) {
  if (cfg.data_source == DataSource::synth) return synth_sbm(cfg.sbm);
  LoadOptions opts;
  opts.split_seed = cfg.split_seed;
  return load_graph(cfg.edge_path, cfg.feature_path, cfg.label_path, opts);
}

Partition build_partition(const Graph& g, const TrainConfig& cfg) {
  switch (cfg.partition_method) {
    case PartitionMethod::random:
      return partition_random(g, cfg.workers, cfg.partition_seed);
    case PartitionMethod::bfs:
      return partition_greedy_bfs(g, cfg.workers, cfg.partition_seed);
    case PartitionMethod::file:
      return import_partition(g, cfg.partition_path);
  }
  throw InvalidArgument("unknown partition method");
}

RuntimeOptions runtime_options(const TrainConfig& cfg) {
  RuntimeOptions opts;
  opts.activation = cfg.activation;
  opts.mode = execution_mode_from_env(cfg.mode);
  opts.halo = cfg.arm == Arm::nocomm ? HaloMode::zero : HaloMode::compressed;
  opts.spectral_bound = cfg.spectral_bound;
  opts.codec.unbiased = cfg.codec_unbiased;
  return opts;
}

TrainResult run_training(const TrainConfig& cfg, const Graph& g, const Partition& p,
                         const EpochCallback& on_epoch) {
  validate(cfg);
  const Gso gso = build_gso(g, cfg.gso);
  const auto dims = model_dims(cfg, g.feature_dim(), static_cast<std::size_t>(g.num_classes()));
  const ModelParams init = init_params(dims, cfg.taps, cfg.init_seed);
  Cluster cluster(g, gso, p, init, cfg.codec_key, runtime_options(cfg));
  const SchedulerSpec schedule = effective_schedule(cfg);

  TrainResult result;
  result.metrics.reserve(cfg.epochs);
  for (std::uint32_t t = 0; t < cfg.epochs; ++t) {
    result.metrics.push_back(cluster.varco_epoch(schedule, t, cfg.lr));
    if (on_epoch) on_epoch(result.metrics.back());
  }
  result.params = cluster.params();
  return result;
}

TrainResult run_training(const TrainConfig& cfg, const EpochCallback& on_epoch) {
  validate(cfg);
  const Graph g = build_graph(cfg);
  const Partition p = build_partition(g, cfg);
  return run_training(cfg, g, p, on_epoch);
}

}  // namespace varco
