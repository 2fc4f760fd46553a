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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "support.hpp"
#include "varco/error.hpp"
#include "varco/graph.hpp"
#include "varco/graph_io.hpp"

namespace varco {
namespace {

using testing::make_graph;
using testing::temp_dir;

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

void expect_valid_csr(const Graph& g) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const auto nb = g.neighbors(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      EXPECT_LT(nb[i], g.num_nodes());
      EXPECT_NE(nb[i], u);
      if (i > 0) EXPECT_LT(nb[i - 1], nb[i]);
      const auto back = g.neighbors(nb[i]);
      EXPECT_TRUE(std::binary_search(back.begin(), back.end(), u));
    }
  }
  for (Eigen::Index i = 0; i < g.features().rows(); ++i) {
    EXPECT_LE(g.features().row(i).norm(), 1.0 + 1e-9);
  }
}

TEST(Graph, FromEdgesSymmetrizesAndDedups) {
  const std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 0}, {1, 2}, {2, 2}, {2, 1}};
  const Graph g = make_graph(3, edges, 2, 1);
  EXPECT_EQ(g.num_edges(), 4u);
  EXPECT_EQ(std::vector<NodeId>(g.neighbors(1).begin(), g.neighbors(1).end()),
            (std::vector<NodeId>{0, 2}));
  expect_valid_csr(g);
}

TEST(Graph, RejectsOutOfRangeEdge) {
  EXPECT_THROW(make_graph(3, {{0, 3}}, 2, 1), InvalidArgument);
}

TEST(Graph, NormalizeRowsIsIdempotentAndKeepsZeroRows) {
  Matrix m(3, 2);
  m << 3, 4, 0, 0, 0.6, 0.8;
  normalize_rows(m);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.8);
  EXPECT_EQ(m.row(1).norm(), 0.0);
  const Matrix once = m;
  normalize_rows(m);
  EXPECT_EQ(m, once);
}

TEST(Graph, RandomSplitSizesAndDisjointness) {
  for (std::size_t n : {1u, 7u, 10u, 1000u}) {
    const auto split = random_split(n, 3);
    std::size_t counts[4] = {0, 0, 0, 0};
    for (auto s : split) ++counts[static_cast<int>(s)];
    EXPECT_EQ(counts[static_cast<int>(Split::none)], 0u);
    EXPECT_EQ(counts[static_cast<int>(Split::train)], n * 6 / 10);
    EXPECT_EQ(counts[static_cast<int>(Split::val)], n * 2 / 10);
    EXPECT_EQ(counts[static_cast<int>(Split::test)], n - n * 6 / 10 - n * 2 / 10);
  }
  EXPECT_EQ(random_split(100, 1), random_split(100, 1));
  EXPECT_NE(random_split(100, 1), random_split(100, 2));
}

TEST(Sbm, TwoCliques) {
  const Graph g = synth_sbm({.n = 4, .classes = 2, .p_in = 1, .p_out = 0, .feat_dim = 2,
                             .noise = 0, .seed = 0});
  EXPECT_EQ(std::vector<int>(g.labels().begin(), g.labels().end()),
            (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(g.num_edges(), 4u);
  EXPECT_EQ(g.neighbors(0)[0], 1u);
  EXPECT_EQ(g.neighbors(2)[0], 3u);
  EXPECT_EQ(g.features().row(0), g.features().row(1));
  EXPECT_NEAR(g.features().row(0).norm(), 1.0, 1e-12);
}

TEST(Sbm, WithinBlockDensityWithinThreeSigma) {
  const SbmParams p{.n = 300, .classes = 3, .p_in = 0.1, .p_out = 0.01, .feat_dim = 4,
                    .noise = 1.0, .seed = 11};
  const Graph g = synth_sbm(p);
  std::size_t in = 0;
  std::size_t out = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) (g.labels()[u] == g.labels()[v] ? in : out)++;
    }
  }
  const double in_pairs = 3.0 * 100 * 99 / 2;
  const double out_pairs = 300.0 * 299 / 2 - in_pairs;
  const double sigma_in = std::sqrt(in_pairs * 0.1 * 0.9);
  const double sigma_out = std::sqrt(out_pairs * 0.01 * 0.99);
  EXPECT_LE(std::abs(static_cast<double>(in) - in_pairs * 0.1), 3 * sigma_in);
  EXPECT_LE(std::abs(static_cast<double>(out) - out_pairs * 0.01), 3 * sigma_out);
  expect_valid_csr(g);
}

TEST(Sbm, UnevenBlocksDifferByAtMostOne) {
  const Graph g = synth_sbm({.n = 1000, .classes = 3, .seed = 1});
  std::vector<int> sizes(3, 0);
  for (int l : g.labels()) ++sizes[l];
  EXPECT_EQ(sizes, (std::vector<int>{334, 333, 333}));
  EXPECT_EQ(g.num_classes(), 3);
}

TEST(Sbm, DeterministicPerSeed) {
  const SbmParams p{.n = 120, .classes = 4, .p_in = 0.2, .p_out = 0.02, .seed = 5};
  EXPECT_TRUE(synth_sbm(p) == synth_sbm(p));
  SbmParams q = p;
  q.seed = 6;
  EXPECT_FALSE(synth_sbm(p) == synth_sbm(q));
}

TEST(Sbm, InvalidArguments) {
  EXPECT_THROW(synth_sbm({.n = 10, .classes = 2, .p_in = 1.5}), InvalidArgument);
  EXPECT_THROW(synth_sbm({.n = 10, .classes = 2, .p_in = -0.1, .p_out = -0.2}), InvalidArgument);
  EXPECT_THROW(synth_sbm({.n = 10, .classes = 2, .p_in = 0.1, .p_out = 0.2}), InvalidArgument);
  EXPECT_THROW(synth_sbm({.n = 3, .classes = 4}), InvalidArgument);
  EXPECT_THROW(synth_sbm({.n = 3, .classes = 0}), InvalidArgument);
}

class GraphIo : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = temp_dir(::testing::UnitTest::GetInstance()->current_test_info()->name()); }
  std::filesystem::path dir_;
};

TEST_F(GraphIo, PathGraphAndNormalization) {
  write_file(dir_ / "e.txt", "# path\n0 1\n1 2\n");
  write_file(dir_ / "f.csv", "3,4\n1,0\n0,2\n");
  write_file(dir_ / "l.csv", "0,0\n1,1\n2,0\n");
  const Graph g = load_graph(dir_ / "e.txt", dir_ / "f.csv", dir_ / "l.csv");
  ASSERT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(std::vector<std::size_t>(g.row_offsets().begin(), g.row_offsets().end()),
            (std::vector<std::size_t>{0, 1, 3, 4}));
  EXPECT_EQ(std::vector<NodeId>(g.columns().begin(), g.columns().end()),
            (std::vector<NodeId>{1, 0, 2, 1}));
  EXPECT_DOUBLE_EQ(g.features()(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(g.features()(0, 1), 0.8);
  EXPECT_DOUBLE_EQ(g.features()(2, 1), 1.0);
}

TEST_F(GraphIo, PositionalLabels) {
  write_file(dir_ / "e.txt", "0 1\n");
  write_file(dir_ / "f.csv", "1,0\n0,1\n");
  write_file(dir_ / "l.txt", "1\n0\n");
  const Graph g = load_graph(dir_ / "e.txt", dir_ / "f.csv", dir_ / "l.txt");
  EXPECT_EQ(g.labels()[0], 1);
  EXPECT_EQ(g.labels()[1], 0);
}

TEST_F(GraphIo, LabelOutOfRangeReportsLine) {
  write_file(dir_ / "e.txt", "0 1\n1 2\n");
  write_file(dir_ / "f.csv", "1,0\n0,1\n1,1\n");
  write_file(dir_ / "l.csv", "0,0\n1,7\n2,0\n");
  try {
    load_graph(dir_ / "e.txt", dir_ / "f.csv", dir_ / "l.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("l.csv:2"), std::string::npos);
  }
}

TEST_F(GraphIo, MalformedAndOutOfRangeEdges) {
  write_file(dir_ / "f.csv", "1,0\n0,1\n1,1\n");
  write_file(dir_ / "l.csv", "0\n1\n0\n");
  write_file(dir_ / "bad.txt", "0 1\n1 x\n");
  try {
    load_graph(dir_ / "bad.txt", dir_ / "f.csv", dir_ / "l.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  write_file(dir_ / "far.txt", "0 1\n\n2 9\n");
  try {
    load_graph(dir_ / "far.txt", dir_ / "f.csv", dir_ / "l.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST_F(GraphIo, FeatureRowCountMismatch) {
  write_file(dir_ / "e.txt", "0 1\n");
  write_file(dir_ / "f.csv", "1,0\n0,1\n");
  write_file(dir_ / "l.csv", "0\n1\n");
  LoadOptions opts;
  opts.num_nodes = 3;
  EXPECT_THROW(load_graph(dir_ / "e.txt", dir_ / "f.csv", dir_ / "l.csv", opts), ParseError);
  write_file(dir_ / "ragged.csv", "1,0\n0\n");
  EXPECT_THROW(load_graph(dir_ / "e.txt", dir_ / "ragged.csv", dir_ / "l.csv"), ParseError);
}

TEST_F(GraphIo, MissingFile) {
  EXPECT_THROW(load_graph(dir_ / "none", dir_ / "none", dir_ / "none"), Error);
}

TEST_F(GraphIo, CsvRoundTrip) {
  const Graph g = synth_sbm({.n = 60, .classes = 3, .p_in = 0.3, .p_out = 0.05, .seed = 4});
  write_edges(g, dir_ / "edges.txt");
  write_features_csv(g.features(), dir_ / "features.csv");
  write_labels(g, dir_ / "labels.csv");
  const Graph h = load_graph(dir_ / "edges.txt", dir_ / "features.csv", dir_ / "labels.csv",
                             {.num_nodes = std::nullopt, .split_seed = 4});
  EXPECT_TRUE(g == h);
}

TEST_F(GraphIo, BinaryFeaturesRoundTripAtFloatPrecision) {
  const Graph g = synth_sbm({.n = 30, .classes = 3, .p_in = 0.3, .p_out = 0.05, .seed = 2});
  write_edges(g, dir_ / "edges.txt");
  write_features_bin(g.features(), dir_ / "features.bin");
  write_labels(g, dir_ / "labels.csv");
  const Graph h = load_graph(dir_ / "edges.txt", dir_ / "features.bin", dir_ / "labels.csv",
                             {.num_nodes = std::nullopt, .split_seed = 2});
  EXPECT_EQ(h.num_edges(), g.num_edges());
  EXPECT_LT((h.features() - g.features()).cwiseAbs().maxCoeff(), 1e-6);
}

}  // namespace
}  // namespace varco
