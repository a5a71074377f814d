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
#include <string>
#include <utility>
#include <vector>

#include "gbs/gaussian.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// Undirected weighted graph: symmetric adjacency with zero diagonal.
/// Self-loop weights (e.g. the diagonal of a kernel block) are kept only as
/// metadata and never enter densities.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  /// Labels default to "1".."n". Symmetry is checked to 1e-12 and then
  /// enforced exactly; a non-zero diagonal is rejected.
  explicit WeightedGraph(RMatrix adjacency, std::vector<std::string> labels = {},
                         std::vector<double> self_loops = {});

  int node_count() const { return static_cast<int>(adj_.rows()); }
  const RMatrix& adjacency() const { return adj_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& self_loops() const { return self_loops_; }
  double weight(int i, int j) const { return adj_(i, j); }

  /// FNV-1a over the edge weights' bit patterns and the labels.
  std::uint64_t hash() const;

 private:
  RMatrix adj_;
  std::vector<std::string> labels_;
  std::vector<double> self_loops_;
};

/// Sorted distinct node indices.
using NodeSubset = std::vector<int>;

/// Sorts and validates; throws on duplicates or indices outside [0, n).
NodeSubset make_subset(std::vector<int> nodes, int n);

/// 2 * sum_{i<j in s} w_ij / (|s| (|s|-1)).
double density(const WeightedGraph& g, const NodeSubset& s);

/// Graph on the real part of the B block; rejects |Im B| > 1e-9.
WeightedGraph graph_from_kernel(const KernelMatrix& k);

bool is_nonnegative(const WeightedGraph& g, const NodeSubset& s);

WeightedGraph induced_subgraph(const WeightedGraph& g, const NodeSubset& s);

/// How the small graph is wired to the large one.
enum class AttachMode {
  global,    // k_attach cross edges drawn uniformly from all small x large pairs
  per_node,  // every small node gets k_attach distinct large neighbours
};

struct PlantedGraphParams {
  int n_small = 6;
  double p_small = 0.875;
  int n_large = 20;
  double p_large = 0.3;
  int k_attach = 8;
  AttachMode attach = AttachMode::global;

  void validate() const;
};

/// Unweighted Erdos-Renyi small graph joined to a larger one. The small
/// graph's nodes are 0..n_small-1.
WeightedGraph planted_graph(std::uint64_t seed, const PlantedGraphParams& params = {});

struct DensestResult {
  NodeSubset nodes;
  double density = 0.0;
};

inline constexpr std::uint64_t kBruteForceGuard = 10'000'000;

/// Exact densest k-subgraph; ties go to the lexicographically first subset.
DensestResult densest_subgraph_bruteforce(const WeightedGraph& g, int k, int threads = 1);

/// Edge-list text: "# nodes N", "# labels ...", then "i j w" per edge
/// (0-based, %.17g). Round-trips exactly.
std::string to_edge_list(const WeightedGraph& g);
WeightedGraph from_edge_list(const std::string& text);

}  // namespace gbs
