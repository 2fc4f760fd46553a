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
#include <span>
#include <utility>
#include <vector>

#include "varco/types.hpp"

namespace varco {

// Which evaluation split a node belongs to. One value per node keeps the
// train/val/test sets disjoint by construction.
enum class Split : std::uint8_t { none = 0, train = 1, val = 2, test = 3 };

// Immutable, partition-agnostic graph. Adjacency is stored as the symmetric
// closure in CSR form with strictly increasing column indices per row and no
// self-loops; every count derived from it is a count of directed edges.
class Graph {
 public:
  Graph() = default;

  // Builds the symmetric closure of `edges`. Self-loops and duplicates are
  // dropped. Feature rows are scaled to unit norm (see normalize_rows).
  static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                          Matrix features, std::vector<int> labels,
                          std::vector<Split> split);

  std::size_t num_nodes() const { return row_offsets_.empty() ? 0 : row_offsets_.size() - 1; }
  std::size_t num_edges() const { return columns_.size(); }
  std::size_t feature_dim() const { return static_cast<std::size_t>(features_.cols()); }
  int num_classes() const { return num_classes_; }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const NodeId> columns() const { return columns_; }
  std::span<const NodeId> neighbors(NodeId u) const {
    return {columns_.data() + row_offsets_[u], row_offsets_[u + 1] - row_offsets_[u]};
  }
  std::size_t degree(NodeId u) const { return row_offsets_[u + 1] - row_offsets_[u]; }

  const Matrix& features() const { return features_; }
  std::span<const int> labels() const { return labels_; }
  std::span<const Split> split() const { return split_; }

  // Sorted node ids in the given split.
  std::vector<NodeId> nodes_in(Split s) const;
  std::size_t count_in(Split s) const;

  bool operator==(const Graph& other) const;

 private:
  std::vector<std::size_t> row_offsets_;
  std::vector<NodeId> columns_;
  Matrix features_;
  std::vector<int> labels_;
  std::vector<Split> split_;
  int num_classes_ = 0;
};

// Scales every row to unit Euclidean norm. Zero rows stay zero and rows whose
// norm is already within 1e-12 of one are left untouched, which makes the
// operation idempotent bit for bit.
void normalize_rows(Matrix& m);

// Seeded 60/20/20 train/val/test assignment: floor(0.6 n) train, floor(0.2 n)
// val, the rest test.
std::vector<Split> random_split(std::size_t n, std::uint64_t seed);

struct SbmParams {
  std::size_t n = 1000;
  std::size_t classes = 3;
  double p_in = 0.03;
  double p_out = 0.005;
  std::size_t feat_dim = 16;
  double noise = 1.0;
  std::uint64_t seed = 0;
};

// Stochastic block model with contiguous blocks (label = floor(i * classes / n),
// so block sizes differ by at most one and are equal when classes divides n). Features are a per-class random unit mean plus isotropic Gaussian
// noise, then row-normalized. The split is random_split(n, seed).
Graph synth_sbm(const SbmParams& params);

}  // namespace varco
