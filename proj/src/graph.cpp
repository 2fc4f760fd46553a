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

#include "varco/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "varco/error.hpp"
#include "varco/random.hpp"

namespace varco {

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                        Matrix features, std::vector<int> labels,
                        std::vector<Split> split) {
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw InvalidArgument("feature row count " + std::to_string(features.rows()) +
                          " does not match node count " + std::to_string(n));
  }
  if (labels.size() != n) {
    throw InvalidArgument("label count " + std::to_string(labels.size()) +
                          " does not match node count " + std::to_string(n));
  }
  if (split.size() != n) {
    throw InvalidArgument("split size does not match node count");
  }

  std::vector<std::size_t> degree(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") out of range for n = " + std::to_string(n));
    }
    if (u == v) continue;
    ++degree[u];
    ++degree[v];
  }

  Graph g;
  g.row_offsets_.assign(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) g.row_offsets_[u + 1] = g.row_offsets_[u] + degree[u];
  g.columns_.resize(g.row_offsets_[n]);
  std::vector<std::size_t> fill(g.row_offsets_.begin(), g.row_offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    g.columns_[fill[u]++] = v;
    g.columns_[fill[v]++] = u;
  }

  // Sort and deduplicate each row, then compact.
  std::vector<std::size_t> offsets(n + 1, 0);
  std::size_t out = 0;
  for (std::size_t u = 0; u < n; ++u) {
    auto first = g.columns_.begin() + static_cast<std::ptrdiff_t>(g.row_offsets_[u]);
    auto last = g.columns_.begin() + static_cast<std::ptrdiff_t>(g.row_offsets_[u + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) g.columns_[out++] = *it;
    offsets[u + 1] = out;
  }
  g.columns_.resize(out);
  g.columns_.shrink_to_fit();
  g.row_offsets_ = std::move(offsets);

  int max_label = -1;
  for (int y : labels) {
    if (y < 0) throw InvalidArgument("negative label " + std::to_string(y));
    max_label = std::max(max_label, y);
  }
  g.num_classes_ = max_label + 1;

  normalize_rows(features);
  g.features_ = std::move(features);
  g.labels_ = std::move(labels);
  g.split_ = std::move(split);
  return g;
}

std::vector<NodeId> Graph::nodes_in(Split s) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < split_.size(); ++i) {
    if (split_[i] == s) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

std::size_t Graph::count_in(Split s) const {
  return static_cast<std::size_t>(std::count(split_.begin(), split_.end(), s));
}

bool Graph::operator==(const Graph& other) const {
  return row_offsets_ == other.row_offsets_ && columns_ == other.columns_ &&
         features_.rows() == other.features_.rows() &&
         features_.cols() == other.features_.cols() && features_ == other.features_ &&
         labels_ == other.labels_ && split_ == other.split_;
}

void normalize_rows(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm == 0.0 || std::abs(norm - 1.0) <= 1e-12) continue;
    m.row(i) /= norm;
  }
}

std::vector<Split> random_split(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(derive_seed(seed, 0x5e11));
  rng.shuffle(std::span<NodeId>(order));

  const std::size_t n_train = n * 6 / 10;
  const std::size_t n_val = n * 2 / 10;
  std::vector<Split> split(n, Split::test);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train) {
      split[order[i]] = Split::train;
    } else if (i < n_train + n_val) {
      split[order[i]] = Split::val;
    }
  }
  return split;
}

Graph synth_sbm(const SbmParams& p) {
  if (!(p.p_in >= 0.0 && p.p_in <= 1.0 && p.p_out >= 0.0 && p.p_out <= 1.0)) {
    throw InvalidArgument("edge probabilities must lie in [0, 1]");
  }
  if (p.p_out > p.p_in) throw InvalidArgument("p_out must not exceed p_in");
  if (p.classes == 0 || p.classes > p.n) {
    throw InvalidArgument("classes must be in [1, n]");
  }
  if (p.feat_dim == 0) throw InvalidArgument("feature dimension must be positive");
  if (!(p.noise >= 0.0)) throw InvalidArgument("noise must be nonnegative");

  std::vector<int> labels(p.n);
  for (std::size_t i = 0; i < p.n; ++i) labels[i] = static_cast<int>(i * p.classes / p.n);

  Rng edge_rng(derive_seed(p.seed, 0xed9e));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < p.n; ++u) {
    for (std::size_t v = u + 1; v < p.n; ++v) {
      const double prob = labels[u] == labels[v] ? p.p_in : p.p_out;
      if (edge_rng.bernoulli(prob)) {
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
      }
    }
  }

  Rng feat_rng(derive_seed(p.seed, 0xfea7));
  Matrix means(static_cast<Eigen::Index>(p.classes), static_cast<Eigen::Index>(p.feat_dim));
  for (Eigen::Index c = 0; c < means.rows(); ++c) {
    for (Eigen::Index j = 0; j < means.cols(); ++j) means(c, j) = feat_rng.normal();
    const double norm = means.row(c).norm();
    if (norm > 0.0) means.row(c) /= norm;
  }
  Matrix features(static_cast<Eigen::Index>(p.n), static_cast<Eigen::Index>(p.feat_dim));
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t j = 0; j < p.feat_dim; ++j) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          means(labels[i], static_cast<Eigen::Index>(j)) + p.noise * feat_rng.normal();
    }
  }

  return Graph::from_edges(p.n, edges, std::move(features), std::move(labels),
                           random_split(p.n, p.seed));
}

}  // namespace varco
