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

#include "varco/graph.hpp"

namespace varco {

struct LoadOptions {
  // Node count. When absent it is taken from the feature file.
  std::optional<std::size_t> num_nodes;
  // Seed for the 60/20/20 split assigned to loaded graphs.
  std::uint64_t split_seed = 0;
};

// Reads a graph from three files:
//   edges    - "u v" per line, 0-based, '#' starts a comment
//   features - CSV (n rows x F0, no header), or when the extension is .bin,
//              an 8-byte header (u32 n, u32 F0, little-endian) followed by
//              n*F0 little-endian float32 values in row-major order
//   labels   - "node_id,class" lines or one class per line in node order
// The adjacency is symmetrized and features are row-normalized.
Graph load_graph(const std::filesystem::path& edge_path,
                 const std::filesystem::path& feature_path,
                 const std::filesystem::path& label_path, const LoadOptions& options = {});

// Writes each undirected edge once (u < v).
void write_edges(const Graph& g, const std::filesystem::path& path);
// CSV with round-trip precision.
void write_features_csv(const Matrix& features, const std::filesystem::path& path);
void write_features_bin(const Matrix& features, const std::filesystem::path& path);
// "node_id,class" lines.
void write_labels(const Graph& g, const std::filesystem::path& path);

}  // namespace varco
