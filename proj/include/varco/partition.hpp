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
#include <vector>

#include "varco/graph.hpp"

namespace varco {

// Node-to-worker assignment with the halo bookkeeping the distributed runtime
// needs. All node lists are sorted ascending.
struct Partition {
  std::uint32_t num_workers = 0;
  std::vector<WorkerId> owner;
  // local_nodes[q]: nodes owned by q.
  std::vector<std::vector<NodeId>> local_nodes;
  // halo_in[q]: remote nodes adjacent to at least one node owned by q.
  std::vector<std::vector<NodeId>> halo_in;
  // halo_out[q][r]: nodes owned by q that worker r needs (halo_in[r] ∩ local_nodes[q]).
  std::vector<std::vector<std::vector<NodeId>>> halo_out;
  std::size_t self_edges = 0;
  std::size_t cross_edges = 0;

  std::size_t num_nodes() const { return owner.size(); }
};

// Derives halo sets and edge counts from an owner vector.
Partition make_partition(const Graph& g, std::vector<WorkerId> owner, std::uint32_t num_workers);

// Uniformly random balanced assignment: owned counts differ by at most one.
Partition partition_random(const Graph& g, std::uint32_t num_workers, std::uint64_t seed);

// Locality-aware balanced assignment. Worker q grows a BFS region from a
// seeded random unassigned root until it holds its quota (ceil or floor of
// n/Q); exhausted components restart from another random unassigned node.
Partition partition_greedy_bfs(const Graph& g, std::uint32_t num_workers, std::uint64_t seed);

// Reads one worker id per line (n lines, '#' comments allowed). When
// `num_workers` is absent it is inferred as max id + 1.
Partition import_partition(const Graph& g, const std::filesystem::path& path,
                           std::optional<std::uint32_t> num_workers = std::nullopt);

void write_partition(const Partition& p, const std::filesystem::path& path);

struct CrossEdgeStats {
  std::size_t self_count = 0;
  std::size_t cross_count = 0;
  double self_fraction = 0.0;
  double cross_fraction = 0.0;
};

CrossEdgeStats cross_edge_stats(const Partition& p);

}  // namespace varco
