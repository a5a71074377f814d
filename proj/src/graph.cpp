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
#include "gbs/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "gbs/combinatorics.hpp"
#include "gbs/errors.hpp"
#include "gbs/parallel.hpp"
#include "gbs/rng.hpp"

namespace gbs {

WeightedGraph::WeightedGraph(RMatrix adjacency, std::vector<std::string> labels,
                             std::vector<double> self_loops)
    : adj_(std::move(adjacency)), labels_(std::move(labels)), self_loops_(std::move(self_loops)) {
  const Eigen::Index n = adj_.rows();
  if (adj_.cols() != n) throw std::invalid_argument("adjacency must be square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adj_(i, i) != 0.0) throw std::invalid_argument("adjacency diagonal must be zero");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!std::isfinite(adj_(i, j)) || std::abs(adj_(i, j) - adj_(j, i)) > 1e-12)
        throw std::invalid_argument("adjacency is not symmetric");
      adj_(j, i) = adj_(i, j);
    }
  }
  if (labels_.empty())
    for (Eigen::Index i = 0; i < n; ++i) labels_.push_back(std::to_string(i + 1));
  if (static_cast<Eigen::Index>(labels_.size()) != n)
    throw std::invalid_argument("label count does not match node count");
  if (!self_loops_.empty() && static_cast<Eigen::Index>(self_loops_.size()) != n)
    throw std::invalid_argument("self-loop count does not match node count");
}

std::uint64_t WeightedGraph::hash() const {
  std::string bytes;
  const auto n = static_cast<std::uint64_t>(node_count());
  bytes.append(reinterpret_cast<const char*>(&n), sizeof n);
  for (Eigen::Index i = 0; i < adj_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < adj_.cols(); ++j) {
      const auto bits = std::bit_cast<std::uint64_t>(adj_(i, j));
      bytes.append(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  for (const auto& l : labels_) {
    bytes += l;
    bytes.push_back('\0');
  }
  return fnv1a64(bytes);
}

NodeSubset make_subset(std::vector<int> nodes, int n) {
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
    throw std::invalid_argument("node subset has duplicates");
  if (!nodes.empty() && (nodes.front() < 0 || nodes.back() >= n))
    throw std::invalid_argument("node subset index outside graph");
  return nodes;
}

double density(const WeightedGraph& g, const NodeSubset& s) {
  const auto k = static_cast<int>(s.size());
  if (k < 2) throw std::invalid_argument("density needs a subset of at least two nodes");
  double sum = 0.0;
  for (int a = 0; a < k; ++a) {
    if (s[a] < 0 || s[a] >= g.node_count() || (a > 0 && s[a] <= s[a - 1]))
      throw std::invalid_argument("density: subset must be sorted, distinct and in range");
    for (int b = a + 1; b < k; ++b) sum += g.weight(s[a], s[b]);
  }
  return 2.0 * sum / (static_cast<double>(k) * (k - 1));
}

WeightedGraph graph_from_kernel(const KernelMatrix& k) {
  const CMatrix& b = k.b_block;
  const double imag = b.size() ? b.imag().cwiseAbs().maxCoeff() : 0.0;
  if (imag > 1e-9)
    throw std::invalid_argument("graph_from_kernel: B block is complex (max |Im| " +
                                std::to_string(imag) + "); the device phase is not locked");
  RMatrix adj = b.real();
  std::vector<double> loops(static_cast<std::size_t>(adj.rows()));
  for (Eigen::Index i = 0; i < adj.rows(); ++i) {
    loops[i] = adj(i, i);
    adj(i, i) = 0.0;
  }
  return WeightedGraph(std::move(adj), {}, std::move(loops));
}

bool is_nonnegative(const WeightedGraph& g, const NodeSubset& s) {
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      if (g.weight(s[a], s[b]) < 0.0) return false;
  return true;
}

WeightedGraph induced_subgraph(const WeightedGraph& g, const NodeSubset& s) {
  const auto k = static_cast<Eigen::Index>(s.size());
  RMatrix adj(k, k);
  std::vector<std::string> labels;
  std::vector<double> loops;
  for (Eigen::Index a = 0; a < k; ++a) {
    if (s[a] < 0 || s[a] >= g.node_count())
      throw std::invalid_argument("induced_subgraph: index outside graph");
    labels.push_back(g.labels()[s[a]]);
    if (!g.self_loops().empty()) loops.push_back(g.self_loops()[s[a]]);
    for (Eigen::Index b = 0; b < k; ++b) adj(a, b) = g.weight(s[a], s[b]);
  }
  return WeightedGraph(std::move(adj), std::move(labels), std::move(loops));
}

void PlantedGraphParams::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (n_small < 1 || n_large < 1) throw std::invalid_argument("planted graph sizes must be >= 1");
  if (!prob(p_small) || !prob(p_large))
    throw std::invalid_argument("edge probabilities must lie in [0, 1]");
  if (k_attach < 0) throw std::invalid_argument("k_attach must be >= 0");
  const long long cap = attach == AttachMode::global
                            ? static_cast<long long>(n_small) * n_large
                            : static_cast<long long>(n_large);
  if (k_attach > cap) throw std::invalid_argument("k_attach exceeds the available cross pairs");
}

WeightedGraph planted_graph(std::uint64_t seed, const PlantedGraphParams& params) {
  params.validate();
  const int ns = params.n_small;
  const int n = ns + params.n_large;
  RMatrix adj = RMatrix::Zero(n, n);
  Rng rng(seed);
  auto link = [&](int i, int j) { adj(i, j) = adj(j, i) = 1.0; };
  for (int i = 0; i < ns; ++i)
    for (int j = i + 1; j < ns; ++j)
      if (rng.bernoulli(params.p_small)) link(i, j);
  for (int i = ns; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(params.p_large)) link(i, j);

  // Partial Fisher-Yates over a pool of candidate cross pairs.
  auto pick = [&](std::vector<int>& pool, int count) {
    for (int c = 0; c < count; ++c) {
      const auto r = c + static_cast<int>(rng.below(pool.size() - c));
      std::swap(pool[c], pool[r]);
    }
  };
  if (params.attach == AttachMode::global) {
    std::vector<int> pool(static_cast<std::size_t>(ns * params.n_large));
    for (std::size_t p = 0; p < pool.size(); ++p) pool[p] = static_cast<int>(p);
    pick(pool, params.k_attach);
    for (int c = 0; c < params.k_attach; ++c)
      link(pool[c] / params.n_large, ns + pool[c] % params.n_large);
  } else {
    for (int i = 0; i < ns; ++i) {
      std::vector<int> pool(static_cast<std::size_t>(params.n_large));
      for (int p = 0; p < params.n_large; ++p) pool[p] = p;
      pick(pool, params.k_attach);
      for (int c = 0; c < params.k_attach; ++c) link(i, ns + pool[c]);
    }
  }
  return WeightedGraph(std::move(adj));
}

DensestResult densest_subgraph_bruteforce(const WeightedGraph& g, int k, int threads) {
  const int n = g.node_count();
  if (k < 2 || k > n) throw std::invalid_argument("densest_subgraph: need 2 <= k <= node count");
  if (binomial(n, k) > kBruteForceGuard)
    throw GuardError("densest_subgraph: C(n, k) exceeds the brute-force guard");
  // One task per smallest element keeps the lexicographic tie order on reduction.
  const int firsts = n - k + 1;
  std::vector<DensestResult> best(static_cast<std::size_t>(firsts));
  parallel_for(static_cast<std::size_t>(firsts), threads, [&](std::size_t f) {
    std::vector<int> rest(static_cast<std::size_t>(k - 1));
    const int base = static_cast<int>(f) + 1;
    const int span = n - base;
    for (int j = 0; j < k - 1; ++j) rest[j] = j;
    NodeSubset s(static_cast<std::size_t>(k));
    DensestResult local{{}, -std::numeric_limits<double>::infinity()};
    do {
      s[0] = static_cast<int>(f);
      for (int j = 0; j < k - 1; ++j) s[j + 1] = base + rest[j];
      const double d = density(g, s);
      if (d > local.density) local = {s, d};
    } while (next_combination(rest, span));
    best[f] = std::move(local);
  });
  DensestResult out = best[0];
  for (int f = 1; f < firsts; ++f)
    if (best[f].density > out.density) out = best[f];
  return out;
}

std::string to_edge_list(const WeightedGraph& g) {
  std::string out = "# nodes " + std::to_string(g.node_count()) + "\n# labels";
  for (const auto& l : g.labels()) {
    if (l.empty() || l.find_first_of(" \t\n\r") != std::string::npos)
      throw std::invalid_argument("edge list labels must be non-empty and whitespace-free");
    out += " " + l;
  }
  out += "\n";
  char buf[96];
  for (int i = 0; i < g.node_count(); ++i)
    for (int j = i + 1; j < g.node_count(); ++j)
      if (g.weight(i, j) != 0.0) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, j, g.weight(i, j));
        out += buf;
      }
  return out;
}

WeightedGraph from_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  std::vector<std::string> labels;
  std::vector<std::tuple<int, int, double>> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "nodes") {
        ls >> n;
      } else if (key == "labels") {
        std::string l;
        while (ls >> l) labels.push_back(l);
      }
      continue;
    }
    int i = 0, j = 0;
    std::string w;
    if (!(ls >> i >> j >> w)) throw std::invalid_argument("edge list: malformed line '" + line + "'");
    edges.emplace_back(i, j, std::stod(w));
  }
  if (n < 0) throw std::invalid_argument("edge list: missing '# nodes N' header");
  RMatrix adj = RMatrix::Zero(n, n);
  for (const auto& [i, j, w] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw std::invalid_argument("edge list: edge index out of range");
    adj(i, j) = adj(j, i) = w;
  }
  return WeightedGraph(std::move(adj), std::move(labels));
}

}  // namespace gbs
