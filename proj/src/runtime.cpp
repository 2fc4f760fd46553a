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

#include "varco/runtime.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "varco/error.hpp"

namespace varco {
namespace {

std::span<const double> row_span(const Matrix& m, Eigen::Index row) {
  return {m.data() + row * m.cols(), static_cast<std::size_t>(m.cols())};
}

std::span<double> row_span(Matrix& m, Eigen::Index row) {
  return {m.data() + row * m.cols(), static_cast<std::size_t>(m.cols())};
}

// Z_out[i] = sum_e w_e * (slot_e < owned ? local[slot_e] : halo[slot_e - owned])
Matrix diffuse_local(const Worker& w, const Matrix& local, const Matrix& halo) {
  const auto n_owned = static_cast<std::uint32_t>(w.owned.size());
  Matrix out = Matrix::Zero(local.rows(), local.cols());
  for (std::size_t i = 0; i < w.owned.size(); ++i) {
    for (std::size_t e = w.row_offsets[i]; e < w.row_offsets[i + 1]; ++e) {
      const auto slot = w.slots[e];
      if (slot < n_owned) {
        out.row(static_cast<Eigen::Index>(i)) += w.weights[e] * local.row(slot);
      } else {
        out.row(static_cast<Eigen::Index>(i)) += w.weights[e] * halo.row(slot - n_owned);
      }
    }
  }
  return out;
}

}  // namespace

ExecutionMode parse_execution_mode(std::string_view name) {
  if (name == "sequential" || name == "seq") return ExecutionMode::sequential;
  if (name == "threads" || name == "threaded") return ExecutionMode::threaded;
  throw InvalidArgument("unknown execution mode \"" + std::string(name) + "\"");
}

ExecutionMode execution_mode_from_env(ExecutionMode fallback) {
  const char* value = std::getenv("VARCO_EXEC");
  if (value == nullptr || *value == '\0') return fallback;
  return parse_execution_mode(value);
}

CommLedger& CommLedger::operator+=(const CommLedger& o) {
  forward_floats += o.forward_floats;
  backward_floats += o.backward_floats;
  param_floats += o.param_floats;
  forward_messages += o.forward_messages;
  backward_messages += o.backward_messages;
  param_messages += o.param_messages;
  forward_blocks += o.forward_blocks;
  backward_blocks += o.backward_blocks;
  return *this;
}

ExchangePlan make_exchange_plan(const Partition& p) {
  ExchangePlan plan;
  for (WorkerId from = 0; from < p.num_workers; ++from) {
    for (WorkerId to = 0; to < p.num_workers; ++to) {
      if (from == to || p.halo_out[from][to].empty()) continue;
      plan.routes.push_back({from, to, p.halo_out[from][to]});
    }
  }
  return plan;
}

std::vector<Worker> make_workers(const Graph& g, const Gso& gso, const Partition& p,
                                 const ModelParams& params, const std::optional<Matrix>& targets) {
  if (p.num_nodes() != g.num_nodes() || gso.num_nodes() != g.num_nodes()) {
    throw InvalidArgument("partition, gso and graph disagree on the node count");
  }
  if (params.dims.empty() || params.dims.front() != g.feature_dim()) {
    throw ShapeMismatch("model input width does not match the graph's feature dimension");
  }
  if (targets && (static_cast<std::size_t>(targets->rows()) != g.num_nodes() ||
                  static_cast<std::size_t>(targets->cols()) != params.dims.back())) {
    throw ShapeMismatch("regression targets must be n x output width");
  }

  constexpr std::uint32_t absent = ~std::uint32_t{0};
  std::vector<std::uint32_t> slot_of(g.num_nodes(), absent);
  std::vector<Worker> workers(p.num_workers);
  for (WorkerId q = 0; q < p.num_workers; ++q) {
    Worker& w = workers[q];
    w.id = q;
    w.owned = p.local_nodes[q];
    w.halo = p.halo_in[q];
    const auto n_owned = static_cast<std::uint32_t>(w.owned.size());
    for (std::uint32_t i = 0; i < n_owned; ++i) slot_of[w.owned[i]] = i;
    for (std::uint32_t h = 0; h < w.halo.size(); ++h) slot_of[w.halo[h]] = n_owned + h;

    w.row_offsets.assign(1, 0);
    for (NodeId u : w.owned) {
      for (std::size_t e = gso.row_offsets[u]; e < gso.row_offsets[u + 1]; ++e) {
        const auto slot = slot_of[gso.columns[e]];
        if (slot == absent) throw InvalidArgument("partition halo sets are inconsistent with the graph");
        w.slots.push_back(slot);
        w.weights.push_back(gso.values[e]);
      }
      w.row_offsets.push_back(w.slots.size());
    }

    for (WorkerId r = 0; r < p.num_workers; ++r) {
      if (r == q) continue;
      if (!p.halo_out[q][r].empty()) {
        RouteEnd end{r, {}};
        for (NodeId u : p.halo_out[q][r]) end.rows.push_back(slot_of[u]);
        w.send.push_back(std::move(end));
      }
      if (!p.halo_out[r][q].empty()) {
        RouteEnd end{r, {}};
        for (NodeId u : p.halo_out[r][q]) end.rows.push_back(slot_of[u] - n_owned);
        w.recv.push_back(std::move(end));
      }
    }

    w.features.resize(n_owned, static_cast<Eigen::Index>(g.feature_dim()));
    w.labels.resize(n_owned);
    if (targets) w.targets = Matrix(n_owned, targets->cols());
    for (std::uint32_t i = 0; i < n_owned; ++i) {
      const NodeId u = w.owned[i];
      w.features.row(i) = g.features().row(u);
      w.labels[i] = g.labels()[u];
      if (g.split()[u] == Split::train) w.train_rows.push_back(i);
      if (targets) w.targets->row(i) = targets->row(u);
    }
    w.params = params;
    w.grads = ModelParams::zeros(params.dims, params.num_taps);

    for (NodeId u : w.owned) slot_of[u] = absent;
    for (NodeId u : w.halo) slot_of[u] = absent;
  }
  return workers;
}

Cluster::Cluster(const Graph& g, const Gso& gso, const Partition& p, const ModelParams& init,
                 MasterKey key, RuntimeOptions options)
    : graph_(&g),
      gso_(&gso),
      options_(std::move(options)),
      codec_(key, options_.codec),
      plan_(make_exchange_plan(p)),
      workers_(make_workers(g, gso, p, init, options_.targets)),
      train_nodes_(g.nodes_in(Split::train)),
      val_nodes_(g.nodes_in(Split::val)),
      test_nodes_(g.nodes_in(Split::test)) {
  if (options_.loss == LossKind::mse && !options_.targets) {
    throw InvalidArgument("mse loss requires regression targets");
  }
  if (train_nodes_.empty()) throw InvalidArgument("graph has no training nodes");
  mailbox_.assign(workers_.size(), std::vector<std::vector<CompressedBlock>>(workers_.size()));
}

void Cluster::run_phases(const std::vector<Phase>& phases) {
  const auto q = static_cast<WorkerId>(workers_.size());
  if (options_.mode == ExecutionMode::sequential || q == 1) {
    for (const auto& phase : phases) {
      for (WorkerId id = 0; id < q; ++id) phase(id);
    }
    return;
  }
  std::barrier sync(static_cast<std::ptrdiff_t>(q));
  std::vector<std::exception_ptr> errors(q);
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> threads;
    threads.reserve(q);
    for (WorkerId id = 0; id < q; ++id) {
      threads.emplace_back([&, id] {
        for (const auto& phase : phases) {
          if (!failed.load()) {
            try {
              phase(id);
            } catch (...) {
              errors[id] = std::current_exception();
              failed.store(true);
            }
          }
          sync.arrive_and_wait();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void Cluster::post_forward(Worker& w, std::uint32_t layer, std::uint32_t hop, double ratio,
                           std::uint32_t epoch) {
  auto& state = w.layers[layer];
  if (hop == 1) {
    state.diffused.clear();
    state.halo.clear();
    state.diffused.push_back(layer == 0 ? w.features : w.layers[layer - 1].out);
  }
  if (options_.halo == HaloMode::zero) return;

  const Matrix& signal = state.diffused[hop - 1];
  const auto width = static_cast<std::uint32_t>(signal.cols());
  const auto kept = kept_count(width, ratio);
  auto& positions = w.send_positions[layer][hop - 1];
  positions.assign(w.send.size(), {});
  for (std::size_t ri = 0; ri < w.send.size(); ++ri) {
    const auto& route = w.send[ri];
    auto& box = mailbox_[w.id][route.peer];
    box.clear();
    box.reserve(route.rows.size());
    positions[ri].resize(route.rows.size());
    for (std::size_t i = 0; i < route.rows.size(); ++i) {
      const auto row = route.rows[i];
      const KeyContext ctx{epoch, layer, hop - 1, w.id, route.peer, w.owned[row], Direction::forward};
      positions[ri][i] = codec_.derive_indices(ctx, width, kept);
      box.push_back(codec_.encode(row_span(signal, row), positions[ri][i], ratio, ctx));
      w.ledger.forward_floats += kept;
      ++w.ledger.forward_blocks;
    }
    ++w.ledger.forward_messages;
  }
}

void Cluster::collect_forward(Worker& w, std::uint32_t layer, std::uint32_t hop,
                              std::uint32_t epoch) {
  auto& state = w.layers[layer];
  const Matrix& signal = state.diffused[hop - 1];
  const auto width = static_cast<std::uint32_t>(signal.cols());
  Matrix halo = Matrix::Zero(static_cast<Eigen::Index>(w.halo.size()), signal.cols());
  if (options_.halo == HaloMode::compressed) {
    auto& positions = w.recv_positions[layer][hop - 1];
    positions.assign(w.recv.size(), {});
    for (std::size_t ri = 0; ri < w.recv.size(); ++ri) {
      const auto& route = w.recv[ri];
      auto& box = mailbox_[route.peer][w.id];
      if (box.size() != route.rows.size()) {
        throw Error("worker " + std::to_string(w.id) + " expected " +
                    std::to_string(route.rows.size()) + " blocks from worker " +
                    std::to_string(route.peer) + ", got " + std::to_string(box.size()));
      }
      positions[ri].resize(route.rows.size());
      for (std::size_t i = 0; i < route.rows.size(); ++i) {
        const auto row = route.rows[i];
        const KeyContext ctx{epoch, layer, hop - 1, route.peer, w.id, w.halo[row], Direction::forward};
        positions[ri][i] = codec_.derive_indices(ctx, width, box[i].kept);
        codec_.decode_into(box[i], positions[ri][i], ctx, row_span(halo, row));
      }
      box.clear();
    }
  }
  state.diffused.push_back(diffuse_local(w, signal, halo));
  state.halo.push_back(std::move(halo));
  if (hop + 1 == w.params.num_taps) finish_layer(w, layer);
}

void Cluster::finish_layer(Worker& w, std::uint32_t layer) {
  auto& state = w.layers[layer];
  const auto& taps = w.params.layers[layer].taps;
  state.pre = state.diffused[0] * taps[0];
  for (std::size_t k = 1; k < taps.size(); ++k) state.pre.noalias() += state.diffused[k] * taps[k];
  const bool last = layer + 1 == w.params.num_layers();
  state.activation = last ? Activation::identity : options_.activation;
  state.out = activate(state.activation, state.pre);
  if (last) w.logits = state.out;
}

void Cluster::forward_exchange(std::uint32_t layer, std::uint32_t hop, double ratio,
                               std::uint32_t epoch) {
  run_phases({[&](WorkerId q) { post_forward(workers_[q], layer, hop, ratio, epoch); },
              [&](WorkerId q) { collect_forward(workers_[q], layer, hop, epoch); }});
}

void Cluster::distributed_forward(double ratio, std::uint32_t epoch) {
  kept_count(1, ratio);  // validates the ratio
  const auto num_layers = static_cast<std::uint32_t>(params().num_layers());
  const auto num_taps = static_cast<std::uint32_t>(params().num_taps);
  for (auto& w : workers_) {
    w.layers.assign(num_layers, {});
    w.send_positions.assign(num_layers, std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>>(
                                            num_taps > 0 ? num_taps - 1 : 0));
    w.recv_positions = w.send_positions;
  }
  std::vector<Phase> phases;
  for (std::uint32_t l = 0; l < num_layers; ++l) {
    if (num_taps == 1) {
      phases.emplace_back([this, l](WorkerId q) {
        Worker& w = workers_[q];
        w.layers[l].diffused = {l == 0 ? w.features : w.layers[l - 1].out};
        finish_layer(w, l);
      });
      continue;
    }
    for (std::uint32_t hop = 1; hop < num_taps; ++hop) {
      phases.emplace_back([this, l, hop, ratio, epoch](WorkerId q) {
        post_forward(workers_[q], l, hop, ratio, epoch);
      });
      phases.emplace_back(
          [this, l, hop, epoch](WorkerId q) { collect_forward(workers_[q], l, hop, epoch); });
    }
  }
  run_phases(phases);
}

double Cluster::compute_loss() {
  const double total_train = static_cast<double>(train_nodes_.size());
  const double num_workers = static_cast<double>(workers_.size());
  run_phases({[&](WorkerId q) {
    Worker& w = workers_[q];
    if (w.train_rows.empty()) {
      w.loss = 0.0;
      w.d_logits = Matrix::Zero(w.logits.rows(), w.logits.cols());
      return;
    }
    const double weight = num_workers * static_cast<double>(w.train_rows.size()) / total_train;
    LossResult r = options_.loss == LossKind::cross_entropy
                       ? cross_entropy_loss(w.logits, w.labels, w.train_rows, weight)
                       : mse_loss(w.logits, *w.targets, w.train_rows, weight);
    w.loss = r.loss / num_workers;
    w.d_logits = std::move(r.grad);
  }});
  double loss = 0.0;
  for (const auto& w : workers_) loss += w.loss;
  return loss;
}

void Cluster::distributed_backward(double ratio, std::uint32_t epoch) {
  std::vector<Matrix> d_logits;
  d_logits.reserve(workers_.size());
  for (const auto& w : workers_) d_logits.push_back(w.d_logits);
  distributed_backward(d_logits, ratio, epoch);
}

void Cluster::distributed_backward(std::span<const Matrix> d_logits, double ratio,
                                   std::uint32_t epoch) {
  if (d_logits.size() != workers_.size()) throw ShapeMismatch("one logit gradient per worker expected");
  const auto num_layers = static_cast<std::uint32_t>(params().num_layers());
  const auto num_taps = static_cast<std::uint32_t>(params().num_taps);
  for (std::size_t q = 0; q < workers_.size(); ++q) {
    Worker& w = workers_[q];
    if (w.layers.size() != num_layers || w.logits.size() == 0) {
      throw InvalidArgument("distributed_backward needs a completed forward pass");
    }
    if (d_logits[q].rows() != w.logits.rows() || d_logits[q].cols() != w.logits.cols()) {
      throw ShapeMismatch("logit gradient shape does not match worker " + std::to_string(q));
    }
    w.d_logits = d_logits[q];
    w.grads = ModelParams::zeros(w.params.dims, w.params.num_taps);
    w.input_grad.reset();
  }

  std::vector<Phase> phases;
  for (std::uint32_t l = num_layers; l-- > 0;) {
    phases.emplace_back([this, l, num_layers](WorkerId q) {
      Worker& w = workers_[q];
      const auto& state = w.layers[l];
      const auto& taps = w.params.layers[l].taps;
      const Matrix& d_out = l + 1 == num_layers ? w.d_logits : w.d_signal;
      w.d_pre = activation_backward(state.activation, state.pre, d_out);
      for (std::size_t k = 0; k < taps.size(); ++k) {
        w.grads.layers[l].taps[k].noalias() = state.diffused[k].transpose() * w.d_pre;
      }
      w.d_signal = w.d_pre * taps.back().transpose();
      if (l == 0 && taps.size() == 1) w.input_grad = w.d_signal;
    });
    for (std::uint32_t hop = num_taps - 1; hop >= 1; --hop) {
      // Scatter through S^T: owned targets locally, halo targets back to their owners.
      phases.emplace_back([this, l, hop, ratio, epoch](WorkerId q) {
        Worker& w = workers_[q];
        const auto& taps = w.params.layers[l].taps;
        const auto n_owned = static_cast<std::uint32_t>(w.owned.size());
        const auto width = w.d_signal.cols();
        Matrix local = Matrix::Zero(n_owned, width);
        Matrix halo = Matrix::Zero(static_cast<Eigen::Index>(w.halo.size()), width);
        for (std::size_t i = 0; i < w.owned.size(); ++i) {
          for (std::size_t e = w.row_offsets[i]; e < w.row_offsets[i + 1]; ++e) {
            const auto slot = w.slots[e];
            if (slot < n_owned) {
              local.row(slot) += w.weights[e] * w.d_signal.row(static_cast<Eigen::Index>(i));
            } else {
              halo.row(slot - n_owned) += w.weights[e] * w.d_signal.row(static_cast<Eigen::Index>(i));
            }
          }
        }
        local.noalias() += w.d_pre * taps[hop - 1].transpose();
        w.d_signal = std::move(local);
        if (options_.halo == HaloMode::zero) return;

        const auto& positions = w.recv_positions[l][hop - 1];
        for (std::size_t ri = 0; ri < w.recv.size(); ++ri) {
          const auto& route = w.recv[ri];
          auto& box = mailbox_[w.id][route.peer];
          box.clear();
          box.reserve(route.rows.size());
          for (std::size_t i = 0; i < route.rows.size(); ++i) {
            const auto row = route.rows[i];
            const KeyContext ctx{epoch, l, hop - 1, route.peer, w.id, w.halo[row], Direction::backward};
            box.push_back(codec_.encode(row_span(halo, row), positions[ri][i], ratio, ctx));
            w.ledger.backward_floats += positions[ri][i].size();
            ++w.ledger.backward_blocks;
          }
          ++w.ledger.backward_messages;
        }
      });
      phases.emplace_back([this, l, hop, epoch](WorkerId q) {
        Worker& w = workers_[q];
        if (options_.halo == HaloMode::compressed) {
          const auto& positions = w.send_positions[l][hop - 1];
          std::vector<double> scratch(static_cast<std::size_t>(w.d_signal.cols()));
          for (std::size_t ri = 0; ri < w.send.size(); ++ri) {
            const auto& route = w.send[ri];
            auto& box = mailbox_[route.peer][w.id];
            if (box.size() != route.rows.size()) {
              throw Error("worker " + std::to_string(w.id) + " expected " +
                          std::to_string(route.rows.size()) + " gradient blocks from worker " +
                          std::to_string(route.peer) + ", got " + std::to_string(box.size()));
            }
            for (std::size_t i = 0; i < route.rows.size(); ++i) {
              const auto row = route.rows[i];
              const KeyContext ctx{epoch, l, hop - 1, w.id, route.peer, w.owned[row], Direction::backward};
              codec_.decode_into(box[i], positions[ri][i], ctx, scratch);
              w.d_signal.row(row) += Eigen::Map<const Eigen::RowVectorXd>(
                  scratch.data(), static_cast<Eigen::Index>(scratch.size()));
            }
            box.clear();
          }
        }
        if (l == 0 && hop == 1) w.input_grad = w.d_signal;
      });
    }
  }
  run_phases(phases);
}

void Cluster::local_step(double eta) {
  run_phases({[&](WorkerId q) {
    Worker& w = workers_[q];
    w.params = sgd_step(w.params, w.grads, eta);
  }});
}

ModelParams Cluster::average_params() {
  ModelParams mean = workers_.front().params;
  for (std::size_t q = 1; q < workers_.size(); ++q) {
    if (!workers_[q].params.same_shape(mean)) throw ShapeMismatch("replica shapes differ");
    for (std::size_t l = 0; l < mean.layers.size(); ++l) {
      for (std::size_t k = 0; k < mean.layers[l].taps.size(); ++k) {
        mean.layers[l].taps[k] += workers_[q].params.layers[l].taps[k];
      }
    }
  }
  const double count = static_cast<double>(workers_.size());
  for (auto& layer : mean.layers) {
    for (auto& h : layer.taps) h /= count;
  }
  if (options_.spectral_bound > 0.0) mean = spectral_clip(mean, options_.spectral_bound);
  const auto size = static_cast<std::uint64_t>(mean.size());
  for (auto& w : workers_) {
    w.params = mean;
    w.ledger.param_floats += 2 * size;
    w.ledger.param_messages += 2;
  }
  return mean;
}

Matrix Cluster::gather_logits() const {
  const auto& first = workers_.front().logits;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(graph_->num_nodes()), first.cols());
  for (const auto& w : workers_) {
    for (std::size_t i = 0; i < w.owned.size(); ++i) {
      out.row(w.owned[i]) = w.logits.row(static_cast<Eigen::Index>(i));
    }
  }
  return out;
}

CommLedger Cluster::total_ledger() const {
  CommLedger total;
  for (const auto& w : workers_) total += w.ledger;
  return total;
}

MetricsRecord Cluster::varco_epoch(const SchedulerSpec& schedule, std::uint32_t t, double eta) {
  if (t >= schedule.horizon) {
    throw InvalidArgument("epoch " + std::to_string(t) + " is beyond the training horizon " +
                          std::to_string(schedule.horizon));
  }
  MetricsRecord m;
  m.epoch = t;
  m.ratio = ratio_at(schedule, t);

  distributed_forward(m.ratio, t);
  m.train_loss = compute_loss();
  if (!std::isfinite(m.train_loss)) {
    throw NumericFailure("non-finite training loss at epoch " + std::to_string(t));
  }
  distributed_backward(m.ratio, t);
  local_step(eta);
  const ModelParams& averaged = average_params();

  if (options_.loss == LossKind::cross_entropy) {
    const auto eval = model_forward(graph_->features(), *gso_, averaged, options_.activation);
    m.val_acc = accuracy(eval.logits, graph_->labels(), val_nodes_);
    m.test_acc = accuracy(eval.logits, graph_->labels(), test_nodes_);
  }

  const CommLedger total = total_ledger();
  m.fwd_floats = total.forward_floats - previous_total_.forward_floats;
  m.bwd_floats = total.backward_floats - previous_total_.backward_floats;
  m.param_floats = total.param_floats - previous_total_.param_floats;
  cumulative_floats_ += m.fwd_floats + m.bwd_floats;
  m.cum_floats = cumulative_floats_;
  previous_total_ = total;
  return m;
}

}  // namespace varco
