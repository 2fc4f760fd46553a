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

#include <span>
#include <string_view>
#include <vector>

#include "varco/graph.hpp"
#include "varco/types.hpp"

namespace varco {

enum class GsoKind { mean_neighbor, symmetric_normalized, raw_adjacency };

GsoKind parse_gso_kind(std::string_view name);
std::string_view to_string(GsoKind kind);

// Graph shift operator S: one value per directed edge of the graph's CSR
// structure. The sparsity pattern is the adjacency's; the diagonal is empty.
struct Gso {
  GsoKind kind = GsoKind::mean_neighbor;
  std::vector<std::size_t> row_offsets;
  std::vector<NodeId> columns;
  std::vector<double> values;

  std::size_t num_nodes() const { return row_offsets.empty() ? 0 : row_offsets.size() - 1; }

  // S * x
  Matrix apply(const Matrix& x) const;
  // S^T * x
  Matrix apply_transpose(const Matrix& x) const;
  // Dense copy, for tests on small graphs.
  Matrix dense() const;
};

//   mean-neighbor:        S_uv = 1/d_u          (rows of isolated nodes are zero)
//   symmetric-normalized: S_uv = 1/sqrt(d_u d_v)
//   raw-adjacency:        S_uv = 1
Gso build_gso(const Graph& g, GsoKind kind);

}  // namespace varco
