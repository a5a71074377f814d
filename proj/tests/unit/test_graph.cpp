// Copyright 2026 The loopgbs Authors.
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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>

#include "gbs/errors.hpp"
#include "gbs/gaussian.hpp"
#include "gbs/graph.hpp"
#include "gbs/json_io.hpp"

namespace {

using gbs::RMatrix;
using gbs::WeightedGraph;

WeightedGraph random_weighted(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.2, 1.0);
  RMatrix a = RMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  return WeightedGraph(a);
}

// Bitmask enumeration, lowest mask order differs from the library's loop.
std::pair<std::vector<int>, double> densest_by_masks(const WeightedGraph& g, int k) {
  const int n = g.node_count();
  double best = -1e300;
  std::vector<int> arg;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    double sum = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b) sum += g.weight(s[a], s[b]);
    const double d = 2.0 * sum / (k * (k - 1.0));
    if (d > best || (d == best && s < arg)) {
      best = d;
      arg = s;
    }
  }
  return {arg, best};
}

TEST(Density, Examples) {
  RMatrix k4 = RMatrix::Ones(4, 4);
  k4.diagonal().setZero();
  const WeightedGraph g(k4);
  EXPECT_DOUBLE_EQ(gbs::density(g, {0, 1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(gbs::density(g, {0, 2}), 1.0);
  RMatrix tri = RMatrix::Zero(3, 3);
  tri(0, 1) = tri(1, 0) = 0.3;
  tri(1, 2) = tri(2, 1) = 0.3;
  tri(0, 2) = tri(2, 0) = 0.3;
  EXPECT_NEAR(gbs::density(WeightedGraph(tri), {0, 1, 2}), 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(gbs::density(WeightedGraph(RMatrix::Zero(3, 3)), {0, 1, 2}), 0.0);
}

TEST(Density, RejectsBadSubsets) {
  const WeightedGraph g(RMatrix::Zero(4, 4));
  EXPECT_THROW(gbs::density(g, {1}), std::invalid_argument);
  EXPECT_THROW(gbs::density(g, {1, 1}), std::invalid_argument);
  EXPECT_THROW(gbs::density(g, {2, 1}), std::invalid_argument);
  EXPECT_THROW(gbs::density(g, {0, 4}), std::invalid_argument);
  EXPECT_THROW(gbs::make_subset({1, 1}, 4), std::invalid_argument);
  EXPECT_EQ(gbs::make_subset({3, 0, 2}, 4), (gbs::NodeSubset{0, 2, 3}));
}

TEST(Graph, ConstructionChecks) {
  RMatrix a = RMatrix::Zero(3, 3);
  a(0, 1) = 1.0;
  EXPECT_THROW(WeightedGraph{a}, std::invalid_argument);
  a(1, 0) = 1.0;
  a(2, 2) = 0.5;
  EXPECT_THROW(WeightedGraph{a}, std::invalid_argument);
  a(2, 2) = 0.0;
  const WeightedGraph g(a);
  EXPECT_EQ(g.labels(), (std::vector<std::string>{"1", "2", "3"}));
}

TEST(Graph, FromKernel) {
  // Vacuum kernel: edgeless graph.
  const auto vac = gbs::graph_from_kernel(gbs::kernel_matrix(gbs::vacuum_state(3)));
  EXPECT_EQ(vac.adjacency().cwiseAbs().maxCoeff(), 0.0);
  // Product of squeezers: self loops only.
  std::vector<gbs::SqueezerSpec> sq{gbs::SqueezerSpec::from_tanh(0.3), gbs::SqueezerSpec::from_tanh(0.2)};
  const auto g = gbs::graph_from_kernel(gbs::kernel_matrix(gbs::smsv_state(sq)));
  EXPECT_EQ(g.adjacency().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(g.self_loops()[0], 0.3, 1e-13);
  // TMSV: a single edge of weight lambda.
  const auto t = gbs::graph_from_kernel(gbs::kernel_matrix(gbs::tmsv_state(std::atanh(0.31))));
  EXPECT_NEAR(t.weight(0, 1), 0.31, 1e-13);
  // A complex block is rejected.
  gbs::KernelMatrix k;
  k.mode_count = 2;
  k.b_block = gbs::CMatrix::Zero(2, 2);
  k.b_block(0, 1) = k.b_block(1, 0) = gbs::Complex(0.1, 0.1);
  EXPECT_THROW(gbs::graph_from_kernel(k), std::invalid_argument);
}

TEST(Graph, NonnegativityAndInducedSubgraph) {
  RMatrix a = RMatrix::Zero(4, 4);
  a(0, 1) = a(1, 0) = 0.5;
  a(2, 3) = a(3, 2) = -0.1;
  const WeightedGraph g(a, {"a", "b", "c", "d"});
  EXPECT_TRUE(gbs::is_nonnegative(g, {0, 1, 2}));
  EXPECT_FALSE(gbs::is_nonnegative(g, {1, 2, 3}));
  const auto h = gbs::induced_subgraph(g, {1, 3});
  EXPECT_EQ(h.labels(), (std::vector<std::string>{"b", "d"}));
  EXPECT_EQ(h.weight(0, 1), 0.0);
  const auto h2 = gbs::induced_subgraph(g, {0, 1});
  EXPECT_EQ(h2.weight(0, 1), 0.5);
}

TEST(Planted, StructureAndDeterminism) {
  const gbs::PlantedGraphParams p;
  const auto g = gbs::planted_graph(5, p);
  EXPECT_EQ(g.node_count(), 26);
  EXPECT_EQ(g.hash(), gbs::planted_graph(5, p).hash());
  EXPECT_NE(g.hash(), gbs::planted_graph(6, p).hash());
  int cross = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 6; j < 26; ++j) cross += g.weight(i, j) != 0.0;
  EXPECT_EQ(cross, p.k_attach);
  for (int i = 0; i < 26; ++i)
    for (int j = 0; j < 26; ++j) EXPECT_TRUE(g.weight(i, j) == 0.0 || g.weight(i, j) == 1.0);
}

TEST(Planted, PerNodeAttachment) {
  gbs::PlantedGraphParams p;
  p.attach = gbs::AttachMode::per_node;
  p.k_attach = 3;
  const auto g = gbs::planted_graph(9, p);
  for (int i = 0; i < 6; ++i) {
    int deg = 0;
    for (int j = 6; j < 26; ++j) deg += g.weight(i, j) != 0.0;
    EXPECT_EQ(deg, 3);
  }
  p.k_attach = 21;
  EXPECT_THROW(gbs::planted_graph(1, p), std::invalid_argument);
}

TEST(Planted, EdgeProbabilitiesMatchOnAverage) {
  const gbs::PlantedGraphParams p;
  double small = 0.0, large = 0.0;
  const int seeds = 2000;
  std::vector<int> s6{0, 1, 2, 3, 4, 5};
  std::vector<int> s20(20);
  for (int i = 0; i < 20; ++i) s20[i] = 6 + i;
  for (int s = 0; s < seeds; ++s) {
    const auto g = gbs::planted_graph(1000 + s, p);
    small += gbs::density(g, s6);
    large += gbs::density(g, s20);
  }
  // Four standard errors of the mean.
  EXPECT_NEAR(small / seeds, 0.875, 4 * std::sqrt(0.875 * 0.125 / 15 / seeds));
  EXPECT_NEAR(large / seeds, 0.3, 4 * std::sqrt(0.3 * 0.7 / 190 / seeds));
}

TEST(Densest, MatchesMaskEnumeration) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 8; ++trial) {
    const auto g = random_weighted(10, rng);
    for (int k : {2, 3, 5}) {
      const auto want = densest_by_masks(g, k);
      for (int threads : {1, 3}) {
        const auto got = gbs::densest_subgraph_bruteforce(g, k, threads);
        EXPECT_EQ(got.nodes, want.first);
        EXPECT_NEAR(got.density, want.second, 1e-14);
      }
    }
  }
}

TEST(Densest, TiesPickLexicographicallySmallest) {
  const WeightedGraph g(RMatrix::Zero(6, 6));
  EXPECT_EQ(gbs::densest_subgraph_bruteforce(g, 3).nodes, (gbs::NodeSubset{0, 1, 2}));
}

TEST(Densest, PlantedBlockIsFound) {
  gbs::PlantedGraphParams p;
  p.p_small = 1.0;
  p.p_large = 0.1;
  p.k_attach = 0;
  const auto g = gbs::planted_graph(3, p);
  const auto r = gbs::densest_subgraph_bruteforce(g, 6, 2);
  EXPECT_EQ(r.nodes, (gbs::NodeSubset{0, 1, 2, 3, 4, 5}));
  EXPECT_DOUBLE_EQ(r.density, 1.0);
}

TEST(Densest, InvariantUnderRelabelAndScaling) {
  std::mt19937_64 rng(73);
  const auto g = random_weighted(9, rng);
  std::vector<int> perm{4, 7, 0, 2, 8, 1, 6, 3, 5};
  RMatrix pa(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) pa(i, j) = g.weight(perm[i], perm[j]);
  const auto a = gbs::densest_subgraph_bruteforce(g, 4);
  const auto b = gbs::densest_subgraph_bruteforce(WeightedGraph(pa), 4);
  EXPECT_NEAR(a.density, b.density, 1e-14);
  const auto c = gbs::densest_subgraph_bruteforce(WeightedGraph(RMatrix(3.0 * g.adjacency())), 4);
  EXPECT_EQ(c.nodes, a.nodes);
  EXPECT_NEAR(c.density, 3.0 * a.density, 1e-13);
}

TEST(Densest, Guards) {
  const WeightedGraph g(RMatrix::Zero(40, 40));
  EXPECT_THROW(gbs::densest_subgraph_bruteforce(g, 20), gbs::GuardError);
  EXPECT_THROW(gbs::densest_subgraph_bruteforce(g, 1), std::invalid_argument);
  EXPECT_THROW(gbs::densest_subgraph_bruteforce(g, 41), std::invalid_argument);
}

TEST(Serialisation, EdgeListAndJsonRoundTrip) {
  std::mt19937_64 rng(79);
  const auto g = random_weighted(7, rng);
  const auto e = gbs::from_edge_list(gbs::to_edge_list(g));
  EXPECT_EQ(e.adjacency(), g.adjacency());
  EXPECT_EQ(e.labels(), g.labels());
  EXPECT_EQ(e.hash(), g.hash());
  const auto j = gbs::graph_from_json(gbs::graph_to_json(g));
  EXPECT_EQ(j.adjacency(), g.adjacency());
  EXPECT_EQ(j.hash(), g.hash());
  EXPECT_THROW(gbs::from_edge_list("0 1 0.5\n"), std::invalid_argument);
  EXPECT_THROW(gbs::from_edge_list("# nodes 2\n0 2 0.5\n"), std::invalid_argument);
  EXPECT_THROW(gbs::from_edge_list("# nodes 2\n0 x\n"), std::invalid_argument);
}

}  // namespace
