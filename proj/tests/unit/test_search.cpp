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

#include <algorithm>
#include <cmath>
#include <map>

#include "gbs/combinatorics.hpp"
#include "gbs/graph.hpp"
#include "gbs/search.hpp"

namespace {

using gbs::NodeSubset;
using gbs::RMatrix;
using gbs::SearchConfig;
using gbs::SeedStream;
using gbs::WeightedGraph;

WeightedGraph small_planted(std::uint64_t seed) {
  gbs::PlantedGraphParams p;
  p.n_small = 4;
  p.n_large = 8;
  p.k_attach = 3;
  return gbs::planted_graph(seed, p);
}

// E[max of b iid uniform draws of subset density] from the exact CDF.
double expected_running_max(const WeightedGraph& g, int k, int b) {
  std::map<double, double> mass;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[i] = i;
  double total = 0.0;
  do {
    mass[gbs::density(g, c)] += 1.0;
    total += 1.0;
  } while (gbs::next_combination(c, g.node_count()));
  double e = 0.0, cdf_prev = 0.0;
  for (const auto& [v, w] : mass) {
    const double cdf = cdf_prev + w / total;
    e += v * (std::pow(cdf, b) - std::pow(cdf_prev, b));
    cdf_prev = cdf;
  }
  return e;
}

TEST(SeedStreams, UniformCoversAllSubsets) {
  const auto s = SeedStream::uniform(6, 3);
  EXPECT_EQ(s.candidates().size(), 20u);
  EXPECT_EQ(s.subset_size(), 3);
  EXPECT_EQ(s.label(), "uniform");
  EXPECT_THROW(SeedStream::uniform(3, 4), std::invalid_argument);
  EXPECT_THROW(SeedStream::uniform(60, 12), std::exception);
}

TEST(SeedStreams, DistributionMapsModesToNodes) {
  gbs::PatternDistribution d;
  d.mode_count = 4;
  d.n_photons = 2;
  d.patterns = {{0, 3}, {1, 2}};
  d.probs = {0.25, 0.75};
  const auto s = SeedStream::from_distribution(d, {5, 1, 0, 2});
  EXPECT_EQ(s.candidates()[0], (NodeSubset{2, 5}));
  EXPECT_EQ(s.candidates()[1], (NodeSubset{0, 1}));
  EXPECT_THROW(SeedStream::from_distribution(d, {-1, 1, 0, 2}), std::invalid_argument);
  d.collision_free = false;
  EXPECT_THROW(SeedStream::from_distribution(d), std::invalid_argument);
}

TEST(SeedStreams, PoolAndFileParsing) {
  const auto pool = gbs::parse_seed_file("# recorded\n1-2-3\n\n 4-2-6 \n", 6);
  ASSERT_EQ(pool.size(), 2u);
  EXPECT_EQ(pool[1], (NodeSubset{1, 3, 5}));
  const auto s = SeedStream::from_pool(pool);
  EXPECT_TRUE(s.with_replacement());
  EXPECT_THROW(gbs::parse_seed_file("1-7\n", 6), std::invalid_argument);
  EXPECT_THROW(gbs::parse_seed_file("1-1\n", 6), std::invalid_argument);
  EXPECT_THROW(SeedStream::from_pool({{0, 1}, {0, 1, 2}}), std::invalid_argument);
  EXPECT_THROW(SeedStream::from_pool({}), std::invalid_argument);
}

TEST(RandomSearch, RunningMaxIsMonotoneAndBounded) {
  const auto g = small_planted(1);
  const auto best = gbs::densest_subgraph_bruteforce(g, 4);
  SearchConfig cfg{4, gbs::dense_budget_grid(200), 50, 9};
  const auto c = gbs::random_search(g, SeedStream::uniform(12, 4), cfg);
  for (const auto& row : c.per_repeat) {
    for (std::size_t b = 1; b < row.size(); ++b) EXPECT_GE(row[b], row[b - 1]);
    EXPECT_LE(row.back(), best.density + 1e-15);
  }
  for (std::size_t b = 1; b < c.mean.size(); ++b) EXPECT_GE(c.mean[b], c.mean[b - 1]);
}

TEST(RandomSearch, UniformMeanMatchesExactExpectation) {
  const auto g = small_planted(2);
  SearchConfig cfg{4, {1, 2, 5, 20, 60}, 4000, 5};
  const auto c = gbs::random_search(g, SeedStream::uniform(12, 4), cfg, 2);
  // Budget 1 is the mean edge density of the whole graph.
  RMatrix adj = g.adjacency();
  const double pairs = 12 * 11 / 2.0;
  EXPECT_NEAR(expected_running_max(g, 4, 1), adj.sum() / 2 / pairs, 1e-12);
  for (std::size_t b = 0; b < c.budgets.size(); ++b) {
    const double want = expected_running_max(g, 4, c.budgets[b]);
    EXPECT_NEAR(c.mean[b], want, 5.0 * c.stderr_[b] + 1e-12) << c.budgets[b];
  }
}

TEST(RandomSearch, ConvergesToDensestWithLargeBudget) {
  const auto g = small_planted(3);
  const auto best = gbs::densest_subgraph_bruteforce(g, 3);
  SearchConfig cfg{3, {5000}, 20, 1};
  const auto c = gbs::random_search(g, SeedStream::uniform(12, 3), cfg);
  EXPECT_DOUBLE_EQ(c.mean[0], best.density);
  EXPECT_EQ(c.stderr_[0], 0.0);
}

TEST(RandomSearch, DeterministicAcrossThreadCounts) {
  const auto g = small_planted(4);
  SearchConfig cfg{4, gbs::geometric_budget_grid(300, 20), 64, 77};
  const auto s = SeedStream::uniform(12, 4);
  const auto a = gbs::random_search(g, s, cfg, 1);
  const auto b = gbs::random_search(g, s, cfg, 3);
  EXPECT_EQ(a.per_repeat, b.per_repeat);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(gbs::search_curve_csv(a), gbs::search_curve_csv(b));
  cfg.rng_seed = 78;
  EXPECT_NE(gbs::random_search(g, s, cfg).per_repeat, a.per_repeat);
}

TEST(RandomSearch, PrefixOfLongerGridAgrees) {
  const auto g = small_planted(5);
  const auto s = SeedStream::uniform(12, 4);
  const auto a = gbs::random_search(g, s, {4, {1, 2, 3}, 30, 4});
  const auto b = gbs::random_search(g, s, {4, {1, 2, 3, 4, 5, 6}, 30, 4});
  for (int r = 0; r < 30; ++r)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(a.per_repeat[r][j], b.per_repeat[r][j]);
}

TEST(RandomSearch, BiasedSeedsBeatUniform) {
  // A pool that only holds the densest subgraph finds it at once.
  const auto g = small_planted(6);
  const auto best = gbs::densest_subgraph_bruteforce(g, 4);
  const auto pool = SeedStream::from_pool({best.nodes});
  const auto c = gbs::random_search(g, pool, {4, {1, 10}, 10, 3});
  EXPECT_DOUBLE_EQ(c.mean[0], best.density);
}

TEST(RandomSearch, ConfigValidation) {
  const auto g = small_planted(7);
  const auto s = SeedStream::uniform(12, 4);
  EXPECT_THROW(gbs::random_search(g, s, {3, {1}, 1, 0}), std::invalid_argument);
  EXPECT_THROW(gbs::random_search(g, s, {4, {}, 1, 0}), std::invalid_argument);
  EXPECT_THROW(gbs::random_search(g, s, {4, {2, 2}, 1, 0}), std::invalid_argument);
  EXPECT_THROW(gbs::random_search(g, s, {4, {1}, 0, 0}), std::invalid_argument);
}

TEST(BudgetGrids, Shapes) {
  const auto geo = gbs::geometric_budget_grid(20000, 60);
  EXPECT_EQ(geo.front(), 1);
  EXPECT_EQ(geo.back(), 20000);
  EXPECT_TRUE(std::is_sorted(geo.begin(), geo.end()));
  EXPECT_EQ(std::adjacent_find(geo.begin(), geo.end()), geo.end());
  EXPECT_LE(geo.size(), 60u);
  const auto dense = gbs::dense_budget_grid(5);
  EXPECT_EQ(dense, (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_THROW(gbs::geometric_budget_grid(0), std::invalid_argument);
}

gbs::SearchCurve synthetic_curve() {
  gbs::SearchCurve c;
  c.budgets = {1, 2, 4, 8};
  c.per_repeat = {{0.2, 0.5, 0.8, 1.0}, {0.4, 0.5, 0.6, 1.0}};
  c.mean = {0.3, 0.5, 0.7, 1.0};
  c.stderr_ = {0.1, 0.0, 0.1, 0.0};
  return c;
}

TEST(FractionMetrics, SamplesAtFraction) {
  const auto c = synthetic_curve();
  EXPECT_EQ(gbs::samples_at_density_fraction(c, 0.0, 1.0).samples, 1);
  EXPECT_EQ(gbs::samples_at_density_fraction(c, 0.5, 1.0).samples, 2);
  EXPECT_EQ(gbs::samples_at_density_fraction(c, 0.7, 1.0).samples, 4);
  const auto never = gbs::samples_at_density_fraction(c, 0.95, 2.0, 50);
  EXPECT_FALSE(never.samples.has_value());
  EXPECT_EQ(never.bootstrap_unreached, 50);
  EXPECT_EQ(never.max_budget, 8);
  // Resamples of repeat 1 alone cross at budget 1, the others at 2.
  const auto r = gbs::samples_at_density_fraction(c, 0.35, 1.0, 200, 3);
  EXPECT_EQ(r.samples, 2);
  EXPECT_GT(r.uncertainty, 0.0);
  EXPECT_EQ(r.uncertainty, gbs::samples_at_density_fraction(c, 0.35, 1.0, 200, 3).uncertainty);
  EXPECT_THROW(gbs::samples_at_density_fraction(c, 1.5, 1.0), std::invalid_argument);
}

TEST(FractionMetrics, DensityAtBudgetInterpolates) {
  const auto c = synthetic_curve();
  EXPECT_DOUBLE_EQ(gbs::density_at_budget(c, 2).value, 0.5);
  EXPECT_DOUBLE_EQ(gbs::density_at_budget(c, 3).value, 0.6);
  EXPECT_DOUBLE_EQ(gbs::density_at_budget(c, 3).error, 0.05);
  EXPECT_THROW(gbs::density_at_budget(c, 9), std::invalid_argument);
  EXPECT_THROW(gbs::density_at_budget(c, 0), std::invalid_argument);
}

TEST(FractionMetrics, CrossingBudgetInterpolates) {
  const auto c = synthetic_curve();
  const auto x = gbs::crossing_budget(c, 0.6, 1.0, 10.0);
  EXPECT_DOUBLE_EQ(x.samples, 3.0);
  EXPECT_DOUBLE_EQ(x.runs, 30.0);
  EXPECT_DOUBLE_EQ(gbs::crossing_budget(c, 0.2, 1.0).samples, 1.0);
  EXPECT_THROW(gbs::crossing_budget(c, 0.9, 2.0), std::domain_error);
}

}  // namespace
