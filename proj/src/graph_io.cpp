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

#include "varco/graph_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "varco/error.hpp"
#include "varco/text.hpp"

namespace varco {
namespace {

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path,
                       std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::vector<std::pair<NodeId, NodeId>> read_edges(const std::filesystem::path& path,
                                                  std::size_t n) {
  auto in = open_in(path);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = strip_comment(line);
    const auto fields = split_fields(body, " \t\r");
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError(path.string(), lineno, "expected \"u v\", got \"" + line + "\"");
    }
    const auto u = parse_uint(fields[0]);
    const auto v = parse_uint(fields[1]);
    if (!u || !v || *u > 0xffffffffULL || *v > 0xffffffffULL) {
      throw ParseError(path.string(), lineno, "invalid node id in \"" + line + "\"");
    }
    if (*u >= n || *v >= n) {
      throw ParseError(path.string(), lineno,
                       "node id out of range for n = " + std::to_string(n) + " in \"" + line + "\"");
    }
    edges.emplace_back(static_cast<NodeId>(*u), static_cast<NodeId>(*v));
  }
  return edges;
}

Matrix read_features_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line, ",");
    if (fields.empty()) continue;
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      const auto value = parse_double(f);
      if (!value) throw ParseError(path.string(), lineno, "invalid number \"" + std::string(f) + "\"");
      row.push_back(*value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path.string(), lineno, "expected " + std::to_string(rows.front().size()) +
                                                  " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  const auto cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::uint32_t load_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32_le(std::uint32_t v, unsigned char* p) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

Matrix read_features_bin(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  std::array<unsigned char, 8> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
    throw ParseError(path.string(), 0, "truncated header");
  }
  const std::uint32_t n = load_u32_le(header.data());
  const std::uint32_t f = load_u32_le(header.data() + 4);
  std::vector<unsigned char> payload(static_cast<std::size_t>(n) * f * 4);
  if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()))) {
    throw ParseError(path.string(), 0, "truncated payload: expected " +
                                           std::to_string(payload.size()) + " bytes");
  }
  Matrix m(n, f);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * f; ++i) {
    m.data()[i] = static_cast<double>(std::bit_cast<float>(load_u32_le(payload.data() + 4 * i)));
  }
  return m;
}

std::vector<int> read_labels(const std::filesystem::path& path, std::size_t n) {
  auto in = open_in(path);
  std::vector<int> labels(n, -1);
  std::string line;
  std::size_t lineno = 0;
  std::size_t position = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = strip_comment(line);
    const auto fields = split_fields(body, ", \t\r");
    if (fields.empty()) continue;
    std::uint64_t node = position;
    std::string_view cls_field = fields[0];
    if (fields.size() == 2) {
      const auto id = parse_uint(fields[0]);
      if (!id) throw ParseError(path.string(), lineno, "invalid node id in \"" + line + "\"");
      node = *id;
      cls_field = fields[1];
    } else if (fields.size() != 1) {
      throw ParseError(path.string(), lineno, "expected \"node_id,class\" or \"class\"");
    }
    const auto cls = parse_uint(cls_field);
    if (!cls) throw ParseError(path.string(), lineno, "invalid class in \"" + line + "\"");
    if (node >= n) {
      throw ParseError(path.string(), lineno, "node id " + std::to_string(node) +
                                                  " out of range for n = " + std::to_string(n));
    }
    // A class id beyond the node count cannot be a dense class index.
    if (*cls >= n) {
      throw ParseError(path.string(), lineno, "class id " + std::to_string(*cls) +
                                                  " out of range for n = " + std::to_string(n));
    }
    labels[node] = static_cast<int>(*cls);
    ++position;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0) throw ParseError(path.string(), 0, "missing label for node " + std::to_string(i));
  }
  return labels;
}

}  // namespace

Graph load_graph(const std::filesystem::path& edge_path,
                 const std::filesystem::path& feature_path,
                 const std::filesystem::path& label_path, const LoadOptions& options) {
  Matrix features = feature_path.extension() == ".bin" ? read_features_bin(feature_path)
                                                       : read_features_csv(feature_path);
  const std::size_t n = options.num_nodes.value_or(static_cast<std::size_t>(features.rows()));
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw ParseError(feature_path.string(), 0,
                     "feature row count " + std::to_string(features.rows()) +
                         " does not match node count " + std::to_string(n));
  }
  auto edges = read_edges(edge_path, n);
  auto labels = read_labels(label_path, n);
  return Graph::from_edges(n, edges, std::move(features), std::move(labels),
                           random_split(n, options.split_seed));
}

void write_edges(const Graph& g, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# undirected edge list, " << g.num_nodes() << " nodes\n";
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << u << ' ' << v << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_features_csv(const Matrix& features, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      if (j) out << ',';
      out << format_double(features(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_features_bin(const Matrix& features, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::binary);
  std::vector<unsigned char> buf(8 + static_cast<std::size_t>(features.size()) * 4);
  store_u32_le(static_cast<std::uint32_t>(features.rows()), buf.data());
  store_u32_le(static_cast<std::uint32_t>(features.cols()), buf.data() + 4);
  for (Eigen::Index i = 0; i < features.size(); ++i) {
    store_u32_le(std::bit_cast<std::uint32_t>(static_cast<float>(features.data()[i])),
                 buf.data() + 8 + 4 * i);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_labels(const Graph& g, const std::filesystem::path& path) {
  auto out = open_out(path);
  const auto labels = g.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace varco
