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

// Simulated distributed full-batch training with compressed halo exchange.
//
// Each worker owns a slice of the graph (its nodes' GSO rows, features and
// labels) and a replica of the model. A layer is computed in lock step: before
// every diffusion hop, owners compress the previous signal of their boundary
// nodes and send it to the workers that need it; consumers decompress into a
// halo buffer and diffuse using local rows plus the halo. The backward pass
// mirrors this: gradients with respect to halo copies are masked with the same
// key-derived positions and sent back to the owners, which accumulate them.
// Each worker then takes one SGD step and the server replaces every replica
// with the mean.
//
// Workers only touch their own state and their mailbox slots, so the same
// phase functions run either round-robin on one thread or on one thread per
// worker separated by barriers, with identical results.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "varco/codec.hpp"
#include "varco/graph.hpp"
#include "varco/gso.hpp"
#include "varco/metrics.hpp"
#include "varco/model.hpp"
#include "varco/partition.hpp"
#include "varco/scheduler.hpp"

namespace varco {

enum class ExecutionMode { sequential, threaded };

// VARCO_EXEC=sequential|threads overrides `fallback` when set.
ExecutionMode execution_mode_from_env(ExecutionMode fallback);
ExecutionMode parse_execution_mode(std::string_view name);

// compressed: halo buffers hold decompressed remote signals.
// zero: nothing is exchanged and halo buffers stay zero ("no communication").
enum class HaloMode { compressed, zero };

enum class LossKind { cross_entropy, mse };

struct RuntimeOptions {
  Activation activation = Activation::relu;
  ExecutionMode mode = ExecutionMode::sequential;
  HaloMode halo = HaloMode::compressed;
  LossKind loss = LossKind::cross_entropy;
  // Regression targets (n x F_L), required for LossKind::mse.
  std::optional<Matrix> targets;
  // Spectral bound applied to the averaged parameters; <= 0 disables it.
  double spectral_bound = 0.0;
  CodecOptions codec;
};

// Floats sent per phase. Header bytes are blocks * kWireHeaderBytes.
struct CommLedger {
  std::uint64_t forward_floats = 0;
  std::uint64_t backward_floats = 0;
  std::uint64_t param_floats = 0;
  std::uint64_t forward_messages = 0;
  std::uint64_t backward_messages = 0;
  std::uint64_t param_messages = 0;
  std::uint64_t forward_blocks = 0;
  std::uint64_t backward_blocks = 0;

  CommLedger& operator+=(const CommLedger& other);
  bool operator==(const CommLedger&) const = default;
};

// For every ordered worker pair with a nonempty halo_out set, the nodes the
// owner sends to the consumer at every hop.
struct ExchangePlan {
  struct Route {
    WorkerId from = 0;
    WorkerId to = 0;
    std::vector<NodeId> nodes;
  };
  std::vector<Route> routes;
};

ExchangePlan make_exchange_plan(const Partition& p);

// One direction of a route as seen by a worker: positions in the worker's
// owned rows (send) or halo rows (receive), in the route's node order.
struct RouteEnd {
  WorkerId peer = 0;
  std::vector<std::uint32_t> rows;
};

struct WorkerLayerState {
  std::vector<Matrix> diffused;  // Z_k on owned rows
  std::vector<Matrix> halo;      // decompressed Z_{k-1} of halo nodes, for hops k = 1..K-1
  Matrix pre;
  Matrix out;
  Activation activation = Activation::identity;
};

struct Worker {
  WorkerId id = 0;
  std::vector<NodeId> owned;  // global ids, ascending
  std::vector<NodeId> halo;   // global ids, ascending
  // GSO rows of owned nodes. A slot below owned.size() is an owned row, the
  // rest index halo rows (slot - owned.size()).
  std::vector<std::size_t> row_offsets;
  std::vector<std::uint32_t> slots;
  std::vector<double> weights;
  std::vector<RouteEnd> send;  // owned rows each peer needs
  std::vector<RouteEnd> recv;  // halo rows each peer provides

  Matrix features;                   // owned rows of X_0
  std::vector<int> labels;           // owned rows
  std::vector<NodeId> train_rows;    // local row indices in the train split
  std::optional<Matrix> targets;     // owned rows, mse only

  ModelParams params;
  ModelParams grads;
  std::optional<Matrix> input_grad;  // dloss/dX_0 on owned rows after backward
  std::vector<WorkerLayerState> layers;
  Matrix logits;
  Matrix d_logits;
  double loss = 0.0;  // this worker's share of the global mean loss
  CommLedger ledger;

  // Backward scratch: gradient at the current layer's pre-activation and at
  // the diffused signal being propagated.
  Matrix d_pre;
  Matrix d_signal;

  // Positions derived during the forward exchange, reused by the backward
  // exchange: [layer][hop-1][route][i].
  std::vector<std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>>> send_positions;
  std::vector<std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>>> recv_positions;
};

// Splits graph, GSO and labels by the partition and replicates `params`.
std::vector<Worker> make_workers(const Graph& g, const Gso& gso, const Partition& p,
                                 const ModelParams& params,
                                 const std::optional<Matrix>& targets = std::nullopt);

class Cluster {
 public:
  Cluster(const Graph& g, const Gso& gso, const Partition& p, const ModelParams& init,
          MasterKey key, RuntimeOptions options = {});

  std::span<Worker> workers() { return workers_; }
  std::span<const Worker> workers() const { return workers_; }
  const ExchangePlan& plan() const { return plan_; }
  const RuntimeOptions& options() const { return options_; }
  const Codec& codec() const { return codec_; }

  // Exchange of the signal entering hop `hop` (1-based) of layer `layer`
  // (0-based). Exposed for tests; distributed_forward drives it.
  void forward_exchange(std::uint32_t layer, std::uint32_t hop, double ratio, std::uint32_t epoch);

  // Fills every worker's logits and layer states.
  void distributed_forward(double ratio, std::uint32_t epoch);

  // Per-worker loss on owned train rows, weighted by Q * n_q / N so that the
  // mean of worker gradients is the gradient of the global mean loss.
  // Returns the global mean train loss.
  double compute_loss();

  // Reverse pass from the workers' d_logits; fills grads (and input_grad).
  void distributed_backward(double ratio, std::uint32_t epoch);
  // Same, from externally provided per-worker logit gradients.
  void distributed_backward(std::span<const Matrix> d_logits, double ratio, std::uint32_t epoch);

  void local_step(double eta);
  // Mean of the replicas, broadcast back to every worker.
  ModelParams average_params();

  // Full round: forward, loss, backward, local step, averaging, then a
  // lossless centralized evaluation pass that is not counted in the ledger.
  MetricsRecord varco_epoch(const SchedulerSpec& schedule, std::uint32_t t, double eta);

  // Worker logits scattered back into global node order.
  Matrix gather_logits() const;
  // Sum of worker ledgers since construction.
  CommLedger total_ledger() const;
  const ModelParams& params() const { return workers_.front().params; }

 private:
  using Phase = std::function<void(WorkerId)>;
  void run_phases(const std::vector<Phase>& phases);

  void post_forward(Worker& w, std::uint32_t layer, std::uint32_t hop, double ratio,
                    std::uint32_t epoch);
  void collect_forward(Worker& w, std::uint32_t layer, std::uint32_t hop, std::uint32_t epoch);
  void finish_layer(Worker& w, std::uint32_t layer);

  const Graph* graph_;
  const Gso* gso_;
  RuntimeOptions options_;
  Codec codec_;
  ExchangePlan plan_;
  std::vector<Worker> workers_;
  // mailbox_[from][to]: blocks in route order for the current exchange.
  std::vector<std::vector<std::vector<CompressedBlock>>> mailbox_;
  std::vector<NodeId> train_nodes_;
  std::vector<NodeId> val_nodes_;
  std::vector<NodeId> test_nodes_;
  CommLedger previous_total_;
  std::uint64_t cumulative_floats_ = 0;
};

}  // namespace varco
