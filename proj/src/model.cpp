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

#include "varco/model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "varco/error.hpp"
#include "varco/random.hpp"

namespace varco {
namespace {

void check_rows(const Matrix& x, const Gso& gso) {
  if (static_cast<std::size_t>(x.rows()) != gso.num_nodes()) {
    throw ShapeMismatch("input has " + std::to_string(x.rows()) + " rows, graph has " +
                        std::to_string(gso.num_nodes()) + " nodes");
  }
}

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity" || name == "linear") return Activation::identity;
  throw InvalidArgument("unknown activation \"" + std::string(name) + "\"");
}

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    case Activation::identity:
      return "identity";
  }
  return "unknown";
}

Matrix activate(Activation a, const Matrix& pre) {
  switch (a) {
    case Activation::relu:
      return pre.cwiseMax(0.0);
    case Activation::tanh:
      return pre.array().tanh().matrix();
    case Activation::identity:
      return pre;
  }
  return pre;
}

Matrix activation_backward(Activation a, const Matrix& pre, const Matrix& d_out) {
  switch (a) {
    case Activation::relu:
      return (pre.array() > 0.0).select(d_out, 0.0);
    case Activation::tanh: {
      const auto t = pre.array().tanh();
      return (d_out.array() * (1.0 - t * t)).matrix();
    }
    case Activation::identity:
      return d_out;
  }
  return d_out;
}

std::size_t ModelParams::size() const {
  std::size_t total = 0;
  for (const auto& layer : layers) {
    for (const auto& h : layer.taps) total += static_cast<std::size_t>(h.size());
  }
  return total;
}

bool ModelParams::same_shape(const ModelParams& other) const {
  if (dims != other.dims || num_taps != other.num_taps || layers.size() != other.layers.size()) {
    return false;
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].taps.size() != other.layers[l].taps.size()) return false;
    for (std::size_t k = 0; k < layers[l].taps.size(); ++k) {
      if (layers[l].taps[k].rows() != other.layers[l].taps[k].rows() ||
          layers[l].taps[k].cols() != other.layers[l].taps[k].cols()) {
        return false;
      }
    }
  }
  return true;
}

bool ModelParams::operator==(const ModelParams& other) const {
  if (!same_shape(other)) return false;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t k = 0; k < layers[l].taps.size(); ++k) {
      if (layers[l].taps[k] != other.layers[l].taps[k]) return false;
    }
  }
  return true;
}

ModelParams ModelParams::zeros(std::span<const std::size_t> dims, std::size_t num_taps) {
  if (dims.size() < 2) throw InvalidArgument("a model needs at least input and output dims");
  if (num_taps == 0) throw InvalidArgument("a layer needs at least one tap");
  ModelParams p;
  p.dims.assign(dims.begin(), dims.end());
  p.num_taps = num_taps;
  p.layers.resize(dims.size() - 1);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l] == 0 || dims[l + 1] == 0) throw InvalidArgument("layer widths must be positive");
    p.layers[l].taps.assign(num_taps, Matrix::Zero(static_cast<Eigen::Index>(dims[l]),
                                                   static_cast<Eigen::Index>(dims[l + 1])));
  }
  return p;
}

ModelParams init_params(std::span<const std::size_t> dims, std::size_t num_taps,
                        std::uint64_t seed) {
  ModelParams p = ModelParams::zeros(dims, num_taps);
  Rng rng(derive_seed(seed, 0x1417));
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    for (auto& h : p.layers[l].taps) {
      for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = rng.uniform(-bound, bound);
    }
  }
  return p;
}

Matrix conv_forward(const Matrix& x, const Gso& gso, std::span<const Matrix> taps) {
  check_rows(x, gso);
  if (taps.empty()) throw ShapeMismatch("convolution needs at least one tap");
  for (const auto& h : taps) {
    if (h.rows() != x.cols() || h.cols() != taps.front().cols()) {
      throw ShapeMismatch("tap " + shape_of(h) + " does not fit input " + shape_of(x));
    }
  }
  Matrix out = x * taps[0];
  Matrix z = x;
  for (std::size_t k = 1; k < taps.size(); ++k) {
    z = gso.apply(z);
    out.noalias() += z * taps[k];
  }
  return out;
}

LayerOutput layer_forward(const Matrix& x, const Gso& gso, const LayerParams& layer,
                          Activation activation) {
  check_rows(x, gso);
  if (layer.taps.empty()) throw ShapeMismatch("convolution needs at least one tap");
  LayerOutput r;
  r.tape.activation = activation;
  r.tape.diffused.reserve(layer.taps.size());
  r.tape.diffused.push_back(x);
  for (std::size_t k = 1; k < layer.taps.size(); ++k) {
    r.tape.diffused.push_back(gso.apply(r.tape.diffused.back()));
  }
  for (std::size_t k = 0; k < layer.taps.size(); ++k) {
    const auto& h = layer.taps[k];
    if (h.rows() != x.cols() || h.cols() != layer.taps.front().cols()) {
      throw ShapeMismatch("tap " + shape_of(h) + " does not fit input " + shape_of(x));
    }
    if (k == 0) {
      r.tape.pre = r.tape.diffused[0] * h;
    } else {
      r.tape.pre.noalias() += r.tape.diffused[k] * h;
    }
  }
  r.tape.out = activate(activation, r.tape.pre);
  r.out = r.tape.out;
  return r;
}

ForwardResult model_forward(const Matrix& x, const Gso& gso, const ModelParams& params,
                            Activation activation) {
  if (params.dims.empty() || static_cast<std::size_t>(x.cols()) != params.dims.front()) {
    throw ShapeMismatch("input has " + std::to_string(x.cols()) + " features, model expects " +
                        (params.dims.empty() ? std::string("none")
                                             : std::to_string(params.dims.front())));
  }
  ForwardResult r;
  r.tape.input = x;
  const Matrix* current = &r.tape.input;
  for (std::size_t l = 0; l < params.num_layers(); ++l) {
    const bool last = l + 1 == params.num_layers();
    auto step = layer_forward(*current, gso, params.layers[l],
                              last ? Activation::identity : activation);
    r.tape.layers.push_back(std::move(step.tape));
    current = &r.tape.layers.back().out;
  }
  r.logits = *current;
  return r;
}

Matrix sage_layer(const Matrix& x_self, const Matrix& x_agg, const Matrix& w_self,
                  const Matrix& w_neigh) {
  if (x_self.rows() != x_agg.rows() || x_self.cols() != w_self.rows() ||
      x_agg.cols() != w_neigh.rows() || w_self.cols() != w_neigh.cols()) {
    throw ShapeMismatch("sage layer operands " + shape_of(x_self) + ", " + shape_of(x_agg) +
                        ", " + shape_of(w_self) + ", " + shape_of(w_neigh) + " do not agree");
  }
  Matrix out = x_self * w_self;
  out.noalias() += x_agg * w_neigh;
  return out;
}

LossResult cross_entropy_loss(const Matrix& logits, std::span<const int> labels,
                              std::span<const NodeId> nodes, double weight) {
  if (nodes.empty()) throw InvalidArgument("loss mask is empty");
  if (labels.size() != static_cast<std::size_t>(logits.rows())) {
    throw ShapeMismatch("labels/logits row count mismatch");
  }
  LossResult r;
  r.grad = Matrix::Zero(logits.rows(), logits.cols());
  const double scale = weight / static_cast<double>(nodes.size());
  for (NodeId i : nodes) {
    const auto row = logits.row(i);
    const int y = labels[i];
    if (y < 0 || y >= logits.cols()) {
      throw InvalidArgument("label " + std::to_string(y) + " outside " +
                            std::to_string(logits.cols()) + " classes");
    }
    const double m = row.maxCoeff();
    const auto e = (row.array() - m).exp();
    const double s = e.sum();
    r.loss += m + std::log(s) - row(y);
    r.grad.row(i) = (e / s).matrix() * scale;
    r.grad(i, y) -= scale;
  }
  r.loss *= scale;
  return r;
}

LossResult mse_loss(const Matrix& outputs, const Matrix& targets, std::span<const NodeId> nodes,
                    double weight) {
  if (nodes.empty()) throw InvalidArgument("loss mask is empty");
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
    throw ShapeMismatch("outputs " + shape_of(outputs) + " vs targets " + shape_of(targets));
  }
  LossResult r;
  r.grad = Matrix::Zero(outputs.rows(), outputs.cols());
  const double scale = weight / static_cast<double>(nodes.size());
  for (NodeId i : nodes) {
    const auto diff = outputs.row(i) - targets.row(i);
    r.loss += 0.5 * diff.squaredNorm();
    r.grad.row(i) = scale * diff;
  }
  r.loss *= scale;
  return r;
}

double accuracy(const Matrix& logits, std::span<const int> labels, std::span<const NodeId> nodes) {
  if (nodes.empty()) return 0.0;
  std::size_t correct = 0;
  for (NodeId i : nodes) {
    Eigen::Index best = 0;
    logits.row(i).maxCoeff(&best);
    if (best == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

Gradients model_backward(const ActivationTape& tape, const Matrix& d_logits, const Gso& gso,
                         const ModelParams& params, bool want_input_grad) {
  if (tape.layers.size() != params.num_layers()) {
    throw ShapeMismatch("tape has " + std::to_string(tape.layers.size()) + " layers, model has " +
                        std::to_string(params.num_layers()));
  }
  if (tape.layers.empty() || d_logits.rows() != tape.layers.back().out.rows() ||
      d_logits.cols() != tape.layers.back().out.cols()) {
    throw ShapeMismatch("logit gradient does not match the tape");
  }
  Gradients g;
  g.weights = ModelParams::zeros(params.dims, params.num_taps);
  Matrix d_out = d_logits;
  for (std::size_t l = params.num_layers(); l-- > 0;) {
    const auto& lt = tape.layers[l];
    const auto& taps = params.layers[l].taps;
    if (lt.diffused.size() != taps.size()) throw ShapeMismatch("tape/params tap count mismatch");
    const Matrix d_pre = activation_backward(lt.activation, lt.pre, d_out);
    for (std::size_t k = 0; k < taps.size(); ++k) {
      g.weights.layers[l].taps[k].noalias() = lt.diffused[k].transpose() * d_pre;
    }
    if (l == 0 && !want_input_grad) break;
    // dZ_{K-1} = dP H_{K-1}^T;  dZ_{k-1} = dP H_{k-1}^T + S^T dZ_k.
    Matrix d_z = d_pre * taps.back().transpose();
    for (std::size_t k = taps.size() - 1; k > 0; --k) {
      Matrix next = gso.apply_transpose(d_z);
      next.noalias() += d_pre * taps[k - 1].transpose();
      d_z = std::move(next);
    }
    d_out = std::move(d_z);
    if (l == 0) g.input = d_out;
  }
  return g;
}

ModelParams sgd_step(const ModelParams& params, const ModelParams& grads, double eta) {
  if (!params.same_shape(grads)) throw ShapeMismatch("parameter/gradient shapes differ");
  ModelParams next = params;
  for (std::size_t l = 0; l < next.layers.size(); ++l) {
    for (std::size_t k = 0; k < next.layers[l].taps.size(); ++k) {
      next.layers[l].taps[k] -= eta * grads.layers[l].taps[k];
    }
  }
  return next;
}

double top_singular_value(const Matrix& a, int max_iters, double tol) {
  if (a.size() == 0) return 0.0;
  Rng rng(0x5eed);
  Vector v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform(0.5, 1.5);
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = a.transpose() * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    v = w / norm;
    if (std::abs(next - sigma) <= tol * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return (a * v).norm();
}

ModelParams spectral_clip(const ModelParams& params, double lambda_max) {
  if (!(lambda_max > 0.0)) throw InvalidArgument("spectral bound must be positive");
  ModelParams out = params;
  for (auto& layer : out.layers) {
    if (layer.taps.empty()) continue;
    const auto rows = layer.taps.front().rows();
    Matrix stacked(rows * static_cast<Eigen::Index>(layer.taps.size()), layer.taps.front().cols());
    for (std::size_t k = 0; k < layer.taps.size(); ++k) {
      stacked.middleRows(static_cast<Eigen::Index>(k) * rows, rows) = layer.taps[k];
    }
    const double sigma = top_singular_value(stacked);
    if (sigma > lambda_max) {
      for (auto& h : layer.taps) h *= lambda_max / sigma;
    }
  }
  return out;
}

namespace {

constexpr std::array<char, 8> kCheckpointMagic = {'V', 'A', 'R', 'C', 'O', 'C', 'K', 'P'};
constexpr std::uint32_t kCheckpointVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<unsigned char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_le(std::istream& in, int bytes, const std::filesystem::path& path) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), bytes)) {
    throw ParseError(path.string(), 0, "truncated checkpoint");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(params.num_layers()));
  put_u32(out, static_cast<std::uint32_t>(params.num_taps));
  for (auto d : params.dims) put_u32(out, static_cast<std::uint32_t>(d));
  for (const auto& layer : params.layers) {
    for (const auto& h : layer.taps) {
      for (Eigen::Index i = 0; i < h.size(); ++i) put_f64(out, h.data()[i]);
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

ModelParams read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kCheckpointMagic) {
    throw ParseError(path.string(), 0, "not a checkpoint (bad magic)");
  }
  const auto version = get_le(in, 4, path);
  if (version != kCheckpointVersion) {
    throw ParseError(path.string(), 0, "unsupported checkpoint version " + std::to_string(version));
  }
  const auto layers = get_le(in, 4, path);
  const auto taps = get_le(in, 4, path);
  if (layers == 0 || layers > 1024 || taps == 0 || taps > 1024) {
    throw ParseError(path.string(), 0, "implausible checkpoint header");
  }
  std::vector<std::size_t> dims(layers + 1);
  for (auto& d : dims) d = get_le(in, 4, path);
  ModelParams p = ModelParams::zeros(dims, taps);
  for (auto& layer : p.layers) {
    for (auto& h : layer.taps) {
      for (Eigen::Index i = 0; i < h.size(); ++i) {
        h.data()[i] = std::bit_cast<double>(get_le(in, 8, path));
      }
    }
  }
  return p;
}

}  // namespace varco
