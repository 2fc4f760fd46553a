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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "varco/gso.hpp"
#include "varco/types.hpp"

namespace varco {

enum class Activation { relu, tanh, identity };

Activation parse_activation(std::string_view name);
std::string_view to_string(Activation a);

Matrix activate(Activation a, const Matrix& pre);
// Gradient through the activation: d_out ⊙ a'(pre). ReLU'(0) is taken as 0.
Matrix activation_backward(Activation a, const Matrix& pre, const Matrix& d_out);

// Filter taps H_{l,0..K-1} of one layer, each F_{l-1} x F_l.
struct LayerParams {
  std::vector<Matrix> taps;
};

// The coefficient set of an L-layer, K-tap graph convolutional network.
// The same structure holds gradients.
struct ModelParams {
  std::vector<std::size_t> dims;  // F_0 .. F_L
  std::size_t num_taps = 0;       // K
  std::vector<LayerParams> layers;

  std::size_t num_layers() const { return layers.size(); }
  // Total scalar count |H|.
  std::size_t size() const;
  bool same_shape(const ModelParams& other) const;
  bool operator==(const ModelParams& other) const;

  static ModelParams zeros(std::span<const std::size_t> dims, std::size_t num_taps);
};

// Uniform(-1/sqrt(F_in), 1/sqrt(F_in)) entries, seeded.
ModelParams init_params(std::span<const std::size_t> dims, std::size_t num_taps,
                        std::uint64_t seed);

// What one layer keeps for the backward pass.
struct LayerTape {
  std::vector<Matrix> diffused;  // Z_k = S^k X_{l-1}, k = 0..K-1 (Z_0 is the layer input)
  Matrix pre;                    // sum_k Z_k H_k
  Matrix out;                    // activation(pre)
  Activation activation = Activation::identity;
};

struct ActivationTape {
  Matrix input;  // X_0
  std::vector<LayerTape> layers;
};

struct Gradients {
  ModelParams weights;
  std::optional<Matrix> input;  // dloss/dX_0, when requested
};

// sum_k S^k X H_k computed by repeated diffusion, never forming S^k.
Matrix conv_forward(const Matrix& x, const Gso& gso, std::span<const Matrix> taps);

struct LayerOutput {
  Matrix out;
  LayerTape tape;
};
LayerOutput layer_forward(const Matrix& x, const Gso& gso, const LayerParams& layer,
                          Activation activation);

struct ForwardResult {
  Matrix logits;
  ActivationTape tape;
};
// Hidden layers apply `activation`; the last layer is linear (logits).
ForwardResult model_forward(const Matrix& x, const Gso& gso, const ModelParams& params,
                            Activation activation);

// X_self W_self + X_agg W_neigh: the two-tap layer with S^0 and a
// mean-neighbor S^1.
Matrix sage_layer(const Matrix& x_self, const Matrix& x_agg, const Matrix& w_self,
                  const Matrix& w_neigh);

struct LossResult {
  double loss = 0.0;
  Matrix grad;  // dloss/doutputs, zero outside the mask
};

// weight * mean over `nodes` of -log softmax(logits_i)[label_i].
LossResult cross_entropy_loss(const Matrix& logits, std::span<const int> labels,
                              std::span<const NodeId> nodes, double weight = 1.0);

// weight * mean over `nodes` of 0.5 * ||outputs_i - targets_i||^2.
LossResult mse_loss(const Matrix& outputs, const Matrix& targets, std::span<const NodeId> nodes,
                    double weight = 1.0);

// Fraction of `nodes` whose argmax logit equals the label.
double accuracy(const Matrix& logits, std::span<const int> labels, std::span<const NodeId> nodes);

// Reverse-mode gradients of every H_{l,k}; diffusion is reversed with S^T.
Gradients model_backward(const ActivationTape& tape, const Matrix& d_logits, const Gso& gso,
                         const ModelParams& params, bool want_input_grad = false);

ModelParams sgd_step(const ModelParams& params, const ModelParams& grads, double eta);

// Largest singular value by power iteration on A^T A.
double top_singular_value(const Matrix& a, int max_iters = 100, double tol = 1e-6);

// Rescales each layer whose stacked filter [H_0; ...; H_{K-1}] has top
// singular value above `lambda_max` so that it equals `lambda_max`.
ModelParams spectral_clip(const ModelParams& params, double lambda_max);

// Binary checkpoint: "VARCOCKP" magic, u32 version, u32 L, u32 K, u32 dims[L+1],
// then every tap matrix as row-major little-endian float64, layer-major.
void write_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams read_checkpoint(const std::filesystem::path& path);

}  // namespace varco
