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

#include "varco/partition.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <string>

#include "varco/error.hpp"
#include "varco/random.hpp"
#include "varco/text.hpp"

namespace varco {
namespace {

void check_worker_count(const Graph& g, std::uint32_t num_workers) {
  if (num_workers == 0) throw InvalidArgument("worker count must be positive");
  if (num_workers > g.num_nodes()) {
    throw InvalidArgument("worker count " + std::to_string(num_workers) +
                          " exceeds node count " + std::to_string(g.num_nodes()));
  }
}

// Balanced quotas: the first n % Q workers get one extra node.
std::vector<std::size_t> quotas(std::size_t n, std::uint32_t q) {
  std::vector<std::size_t> out(q, n / q);
  for (std::size_t i = 0; i < n % q; ++i) ++out[i];
  return out;
}

}  // namespace

Partition make_partition(const Graph& g, std::vector<WorkerId> owner, std::uint32_t num_workers) {
  const std::size_t n = g.num_nodes();
  if (owner.size() != n) {
    throw InvalidArgument("owner vector has " + std::to_string(owner.size()) +
                          " entries for " + std::to_string(n) + " nodes");
  }
  if (num_workers == 0) throw InvalidArgument("worker count must be positive");

  Partition p;
  p.num_workers = num_workers;
  p.local_nodes.resize(num_workers);
  p.halo_in.resize(num_workers);
  p.halo_out.assign(num_workers, std::vector<std::vector<NodeId>>(num_workers));
  for (NodeId u = 0; u < n; ++u) {
    if (owner[u] >= num_workers) {
      throw InvalidArgument("node " + std::to_string(u) + " assigned to worker " +
                            std::to_string(owner[u]) + " but only " +
                            std::to_string(num_workers) + " workers exist");
    }
    p.local_nodes[owner[u]].push_back(u);
  }

  // Node u is in halo_in[r] iff some neighbor of u is owned by r != owner[u].
  // Iterating u ascending keeps every list sorted.
  std::vector<std::uint32_t> seen(num_workers, 0);
  std::uint32_t stamp = 0;
  for (NodeId u = 0; u < n; ++u) {
    ++stamp;
    const WorkerId q = owner[u];
    for (NodeId v : g.neighbors(u)) {
      const WorkerId r = owner[v];
      if (r == q) {
        ++p.self_edges;
        continue;
      }
      ++p.cross_edges;
      if (seen[r] != stamp) {
        seen[r] = stamp;
        p.halo_in[r].push_back(u);
        p.halo_out[q][r].push_back(u);
      }
    }
  }
  for (auto& h : p.halo_in) std::sort(h.begin(), h.end());
  p.owner = std::move(owner);
  return p;
}

Partition partition_random(const Graph& g, std::uint32_t num_workers, std::uint64_t seed) {
  check_worker_count(g, num_workers);
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(derive_seed(seed, 0x9a27));
  rng.shuffle(std::span<NodeId>(order));
  std::vector<WorkerId> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[order[i]] = static_cast<WorkerId>(i % num_workers);
  return make_partition(g, std::move(owner), num_workers);
}

Partition partition_greedy_bfs(const Graph& g, std::uint32_t num_workers, std::uint64_t seed) {
  check_worker_count(g, num_workers);
  const std::size_t n = g.num_nodes();
  constexpr WorkerId unassigned = ~WorkerId{0};
  std::vector<WorkerId> owner(n, unassigned);
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  Rng rng(derive_seed(seed, 0xbf5));
  rng.shuffle(std::span<NodeId>(pool));
  std::size_t pool_pos = 0;

  const auto quota = quotas(n, num_workers);
  for (WorkerId q = 0; q < num_workers; ++q) {
    std::size_t claimed = 0;
    std::deque<NodeId> frontier;
    while (claimed < quota[q]) {
      if (frontier.empty()) {
        while (owner[pool[pool_pos]] != unassigned) ++pool_pos;
        const NodeId root = pool[pool_pos];
        owner[root] = q;
        ++claimed;
        frontier.push_back(root);
        continue;
      }
      const NodeId u = frontier.front();
      frontier.pop_front();
      for (NodeId v : g.neighbors(u)) {
        if (claimed == quota[q]) break;
        if (owner[v] != unassigned) continue;
        owner[v] = q;
        ++claimed;
        frontier.push_back(v);
      }
    }
  }
  return make_partition(g, std::move(owner), num_workers);
}

Partition import_partition(const Graph& g, const std::filesystem::path& path,
                           std::optional<std::uint32_t> num_workers) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<WorkerId> owner;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto id = parse_uint(body);
    if (!id || *id > 0xffffffffULL) {
      throw ParseError(path.string(), lineno, "invalid worker id \"" + line + "\"");
    }
    if (num_workers && *id >= *num_workers) {
      throw ParseError(path.string(), lineno, "worker id " + std::to_string(*id) +
                                                  " >= worker count " +
                                                  std::to_string(*num_workers));
    }
    owner.push_back(static_cast<WorkerId>(*id));
  }
  if (owner.size() != g.num_nodes()) {
    throw ParseError(path.string(), 0, "expected " + std::to_string(g.num_nodes()) +
                                           " lines, got " + std::to_string(owner.size()));
  }
  const std::uint32_t q =
      num_workers.value_or(owner.empty() ? 1 : *std::max_element(owner.begin(), owner.end()) + 1);
  return make_partition(g, std::move(owner), q);
}

void write_partition(const Partition& p, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (WorkerId w : p.owner) out << w << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

CrossEdgeStats cross_edge_stats(const Partition& p) {
  CrossEdgeStats s;
  s.self_count = p.self_edges;
  s.cross_count = p.cross_edges;
  const std::size_t total = p.self_edges + p.cross_edges;
  if (total == 0) {
    s.self_fraction = 1.0;
    return s;
  }
  s.cross_fraction = static_cast<double>(p.cross_edges) / static_cast<double>(total);
  s.self_fraction = 1.0 - s.cross_fraction;
  return s;
}

}  // namespace varco
