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
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gbs/graph.hpp"
#include "gbs/rng.hpp"
#include "gbs/sampling.hpp"

namespace gbs {

enum class SeedKind { uniform, distribution, file };

std::string to_string(SeedKind kind);

/// Source of k-node candidate subsets for the random search. Every source
/// is a finite pool of subsets with draw weights, so candidate densities
/// can be computed once per graph.
class SeedStream {
 public:
  /// Uniform over all k-subsets of n nodes (guarded at 1e7 subsets).
  static SeedStream uniform(int node_count, int k);
  /// Categorical over a collision-free distribution. `node_of_mode` maps
  /// mode indices to graph nodes (identity when empty).
  static SeedStream from_distribution(const PatternDistribution& dist,
                                      const std::vector<int>& node_of_mode = {});
  /// Uniform with replacement from a pool of recorded samples.
  static SeedStream from_pool(std::vector<NodeSubset> pool, std::string origin = "file");

  SeedKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  int subset_size() const { return k_; }
  const std::vector<NodeSubset>& candidates() const { return candidates_; }
  const CategoricalSampler& sampler() const { return sampler_; }
  /// Whether draws from a finite pool are made with replacement.
  bool with_replacement() const { return true; }

 private:
  SeedStream(SeedKind kind, std::string label, int k, std::vector<NodeSubset> candidates,
             const std::vector<double>& weights);

  SeedKind kind_;
  std::string label_;
  int k_;
  std::vector<NodeSubset> candidates_;
  CategoricalSampler sampler_;
};

/// Newline-delimited 1-based patterns "i-j-k-l"; blank and '#' lines skipped.
std::vector<NodeSubset> parse_seed_file(const std::string& text, int node_count);

struct SearchConfig {
  int k = 4;
  std::vector<int> budgets;  // ascending, >= 1
  int repeats = 400;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Running-maximum density of the random search at each grid budget.
struct SearchCurve {
  std::vector<int> budgets;
  std::vector<double> mean;
  std::vector<double> stderr_;
  /// per_repeat[r][b]: running max of repetition r at budgets[b].
  std::vector<std::vector<double>> per_repeat;
  std::uint64_t graph_hash = 0;
  std::string source;
  int k = 0;
  int repeats = 0;
  std::uint64_t rng_seed = 0;
};

/// Each repetition r draws from its own stream derive_seed(seed, "search", r),
/// so the curve does not depend on `threads`.
SearchCurve random_search(const WeightedGraph& g, const SeedStream& seeds, const SearchConfig& cfg,
                          int threads = 1);

/// Integer budget grid 1..max with about `points` geometrically spaced values.
std::vector<int> geometric_budget_grid(int max_budget, int points = 60);
/// 1, 2, ..., max_budget.
std::vector<int> dense_budget_grid(int max_budget);

struct FractionResult {
  std::optional<int> samples;  // empty: not reached within the grid
  double uncertainty = 0.0;    // bootstrap standard deviation
  int max_budget = 0;
  int bootstrap_resamples = 0;
  int bootstrap_unreached = 0;  // resamples that never crossed (excluded)
};

/// Smallest grid budget whose mean density is >= fraction * d_max.
FractionResult samples_at_density_fraction(const SearchCurve& curve, double fraction, double d_max,
                                           int resamples = 1000, std::uint64_t seed = 0);

struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};

/// Mean density at budget n, interpolated linearly between grid points.
ValueWithError density_at_budget(const SearchCurve& curve, double n);

struct CrossingResult {
  double samples = 0.0;  // interpolated budget where the mean crosses
  double runs = 0.0;     // samples * runs_per_sample
};

/// Throws std::domain_error when the curve never reaches threshold * d_max.
CrossingResult crossing_budget(const SearchCurve& curve, double threshold_fraction, double d_max,
                               double runs_per_sample = 1.0);

/// "budget,mean,stderr" rows.
std::string search_curve_csv(const SearchCurve& curve);

}  // namespace gbs
