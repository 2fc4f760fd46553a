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

#include "varco/gso.hpp"

#include <cmath>
#include <string>

#include "varco/error.hpp"

namespace varco {

GsoKind parse_gso_kind(std::string_view name) {
  if (name == "mean" || name == "mean-neighbor") return GsoKind::mean_neighbor;
  if (name == "sym" || name == "symmetric-normalized") return GsoKind::symmetric_normalized;
  if (name == "raw" || name == "raw-adjacency") return GsoKind::raw_adjacency;
  throw InvalidArgument("unknown gso kind \"" + std::string(name) + "\"");
}

std::string_view to_string(GsoKind kind) {
  switch (kind) {
    case GsoKind::mean_neighbor:
      return "mean-neighbor";
    case GsoKind::symmetric_normalized:
      return "symmetric-normalized";
    case GsoKind::raw_adjacency:
      return "raw-adjacency";
  }
  return "unknown";
}

Gso build_gso(const Graph& g, GsoKind kind) {
  Gso s;
  s.kind = kind;
  s.row_offsets.assign(g.row_offsets().begin(), g.row_offsets().end());
  s.columns.assign(g.columns().begin(), g.columns().end());
  s.values.resize(s.columns.size());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const double du = static_cast<double>(g.degree(u));
    for (std::size_t e = s.row_offsets[u]; e < s.row_offsets[u + 1]; ++e) {
      switch (kind) {
        case GsoKind::mean_neighbor:
          s.values[e] = 1.0 / du;
          break;
        case GsoKind::symmetric_normalized:
          s.values[e] = 1.0 / std::sqrt(du * static_cast<double>(g.degree(s.columns[e])));
          break;
        case GsoKind::raw_adjacency:
          s.values[e] = 1.0;
          break;
      }
    }
  }
  return s;
}

Matrix Gso::apply(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != num_nodes()) {
    throw ShapeMismatch("gso has " + std::to_string(num_nodes()) + " nodes, operand has " +
                        std::to_string(x.rows()) + " rows");
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    for (std::size_t e = row_offsets[u]; e < row_offsets[u + 1]; ++e) {
      out.row(static_cast<Eigen::Index>(u)) += values[e] * x.row(columns[e]);
    }
  }
  return out;
}

Matrix Gso::apply_transpose(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != num_nodes()) {
    throw ShapeMismatch("gso has " + std::to_string(num_nodes()) + " nodes, operand has " +
                        std::to_string(x.rows()) + " rows");
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    for (std::size_t e = row_offsets[u]; e < row_offsets[u + 1]; ++e) {
      out.row(columns[e]) += values[e] * x.row(static_cast<Eigen::Index>(u));
    }
  }
  return out;
}

Matrix Gso::dense() const {
  const auto n = static_cast<Eigen::Index>(num_nodes());
  Matrix d = Matrix::Zero(n, n);
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    for (std::size_t e = row_offsets[u]; e < row_offsets[u + 1]; ++e) {
      d(static_cast<Eigen::Index>(u), columns[e]) = values[e];
    }
  }
  return d;
}

}  // namespace varco
