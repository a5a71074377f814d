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
#include "gbs/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "gbs/combinatorics.hpp"
#include "gbs/parallel.hpp"

namespace gbs {

std::string to_string(SeedKind kind) {
  switch (kind) {
    case SeedKind::uniform: return "uniform";
    case SeedKind::distribution: return "distribution";
    case SeedKind::file: return "file";
  }
  return "unknown";
}

SeedStream::SeedStream(SeedKind kind, std::string label, int k, std::vector<NodeSubset> candidates,
                       const std::vector<double>& weights)
    : kind_(kind), label_(std::move(label)), k_(k), candidates_(std::move(candidates)),
      sampler_(weights) {}

SeedStream SeedStream::uniform(int node_count, int k) {
  if (k < 2 || k > node_count) throw std::invalid_argument("uniform seeds need 2 <= k <= n");
  auto subsets = enumerate_patterns(node_count, k, true);
  std::vector<double> w(subsets.size(), 1.0);
  return SeedStream(SeedKind::uniform, "uniform", k, std::move(subsets), w);
}

SeedStream SeedStream::from_distribution(const PatternDistribution& dist,
                                         const std::vector<int>& node_of_mode) {
  if (!dist.collision_free) throw std::invalid_argument("seed distribution must be collision-free");
  std::vector<NodeSubset> subsets;
  subsets.reserve(dist.size());
  for (const auto& p : dist.patterns) {
    NodeSubset s;
    for (int mode : p) {
      if (node_of_mode.empty()) {
        s.push_back(mode);
      } else {
        const int node = node_of_mode.at(static_cast<std::size_t>(mode));
        if (node < 0) throw std::invalid_argument("seed pattern hits an unmapped mode");
        s.push_back(node);
      }
    }
    std::sort(s.begin(), s.end());
    subsets.push_back(std::move(s));
  }
  return SeedStream(SeedKind::distribution, "distribution", dist.n_photons, std::move(subsets),
                    dist.probs);
}

SeedStream SeedStream::from_pool(std::vector<NodeSubset> pool, std::string origin) {
  if (pool.empty()) throw std::invalid_argument("seed pool is empty");
  const int k = static_cast<int>(pool.front().size());
  for (auto& s : pool) {
    if (static_cast<int>(s.size()) != k) throw std::invalid_argument("seed pool mixes subset sizes");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("seed pool contains a degenerate pattern");
  }
  std::vector<double> w(pool.size(), 1.0);
  return SeedStream(SeedKind::file, std::move(origin), k, std::move(pool), w);
}

std::vector<NodeSubset> parse_seed_file(const std::string& text, int node_count) {
  std::vector<NodeSubset> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    auto modes = parse_pattern(line.substr(first, last - first + 1));
    out.push_back(make_subset(std::move(modes), node_count));
  }
  return out;
}

void SearchConfig::validate() const {
  if (k < 2) throw std::invalid_argument("search: k must be >= 2");
  if (repeats < 1) throw std::invalid_argument("search: repeats must be >= 1");
  if (budgets.empty()) throw std::invalid_argument("search: empty budget grid");
  for (std::size_t i = 0; i < budgets.size(); ++i)
    if (budgets[i] < 1 || (i > 0 && budgets[i] <= budgets[i - 1]))
      throw std::invalid_argument("search: budgets must be ascending and >= 1");
}

SearchCurve random_search(const WeightedGraph& g, const SeedStream& seeds, const SearchConfig& cfg,
                          int threads) {
  cfg.validate();
  if (seeds.subset_size() != cfg.k)
    throw std::invalid_argument("search: seed subsets do not have size k");
  std::vector<double> dens(seeds.candidates().size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = density(g, seeds.candidates()[i]);

  SearchCurve curve;
  curve.budgets = cfg.budgets;
  curve.graph_hash = g.hash();
  curve.source = seeds.label();
  curve.k = cfg.k;
  curve.repeats = cfg.repeats;
  curve.rng_seed = cfg.rng_seed;
  const std::size_t nb = cfg.budgets.size();
  curve.per_repeat.assign(static_cast<std::size_t>(cfg.repeats), std::vector<double>(nb));
  const std::uint64_t tag = stream_tag("search");
  parallel_for(static_cast<std::size_t>(cfg.repeats), threads, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.rng_seed, tag, r));
    double best = -std::numeric_limits<double>::infinity();
    int drawn = 0;
    auto& row = curve.per_repeat[r];
    for (std::size_t b = 0; b < nb; ++b) {
      for (; drawn < cfg.budgets[b]; ++drawn) best = std::max(best, dens[seeds.sampler().draw(rng)]);
      row[b] = best;
    }
  });
  curve.mean.assign(nb, 0.0);
  curve.stderr_.assign(nb, 0.0);
  const double reps = cfg.repeats;
  for (std::size_t b = 0; b < nb; ++b) {
    double s = 0.0;
    for (const auto& row : curve.per_repeat) s += row[b];
    const double mu = s / reps;
    double ss = 0.0;
    for (const auto& row : curve.per_repeat) ss += (row[b] - mu) * (row[b] - mu);
    curve.mean[b] = mu;
    curve.stderr_[b] = cfg.repeats > 1 ? std::sqrt(ss / (reps - 1.0)) / std::sqrt(reps) : 0.0;
  }
  return curve;
}

std::vector<int> geometric_budget_grid(int max_budget, int points) {
  if (max_budget < 1 || points < 2) throw std::invalid_argument("budget grid: bad parameters");
  std::vector<int> grid{1};
  const double ratio = std::log(static_cast<double>(max_budget)) / (points - 1);
  for (int i = 1; i < points; ++i) {
    const int v = static_cast<int>(std::lround(std::exp(ratio * i)));
    if (v > grid.back()) grid.push_back(v);
  }
  if (grid.back() != max_budget) grid.push_back(max_budget);
  return grid;
}

std::vector<int> dense_budget_grid(int max_budget) {
  if (max_budget < 1) throw std::invalid_argument("budget grid: max must be >= 1");
  std::vector<int> grid(static_cast<std::size_t>(max_budget));
  for (int i = 0; i < max_budget; ++i) grid[i] = i + 1;
  return grid;
}

namespace {

bool reaches(double value, double target) { return value >= target - 1e-12 * std::abs(target); }

std::optional<std::size_t> first_crossing(const std::vector<double>& mean, double target) {
  for (std::size_t b = 0; b < mean.size(); ++b)
    if (reaches(mean[b], target)) return b;
  return std::nullopt;
}

}  // namespace

FractionResult samples_at_density_fraction(const SearchCurve& curve, double fraction, double d_max,
                                           int resamples, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("fraction must lie in [0, 1]");
  if (curve.budgets.empty()) throw std::invalid_argument("empty search curve");
  FractionResult res;
  res.max_budget = curve.budgets.back();
  res.bootstrap_resamples = resamples;
  const double target = fraction * d_max;
  if (fraction == 0.0) {
    res.samples = curve.budgets.front();
    return res;
  }
  const auto hit = first_crossing(curve.mean, target);
  if (hit) res.samples = curve.budgets[*hit];

  const auto reps = curve.per_repeat.size();
  if (resamples <= 0 || reps < 2) return res;
  Rng rng(derive_seed(seed, stream_tag("bootstrap"), curve.graph_hash));
  std::vector<std::size_t> pick(reps);
  std::vector<double> found;
  found.reserve(static_cast<std::size_t>(resamples));
  for (int s = 0; s < resamples; ++s) {
    for (auto& p : pick) p = static_cast<std::size_t>(rng.below(reps));
    // Budgets scanned in order; stop at the first that crosses.
    std::optional<int> at;
    for (std::size_t b = 0; b < curve.budgets.size() && !at; ++b) {
      double sum = 0.0;
      for (auto p : pick) sum += curve.per_repeat[p][b];
      if (reaches(sum / static_cast<double>(reps), target)) at = curve.budgets[b];
    }
    if (at) {
      found.push_back(*at);
    } else {
      ++res.bootstrap_unreached;
    }
  }
  if (found.size() >= 2) {
    double mu = 0.0;
    for (double v : found) mu += v;
    mu /= static_cast<double>(found.size());
    double ss = 0.0;
    for (double v : found) ss += (v - mu) * (v - mu);
    res.uncertainty = std::sqrt(ss / static_cast<double>(found.size() - 1));
  }
  return res;
}

ValueWithError density_at_budget(const SearchCurve& curve, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("density_at_budget: budget must be positive");
  const auto& b = curve.budgets;
  if (b.empty() || n < b.front() || n > b.back())
    throw std::invalid_argument("density_at_budget: budget outside the grid");
  const auto hi = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), n) - b.begin());
  if (static_cast<double>(b[hi]) == n) return {curve.mean[hi], curve.stderr_[hi]};
  const std::size_t lo = hi - 1;
  const double w = (n - b[lo]) / static_cast<double>(b[hi] - b[lo]);
  return {(1 - w) * curve.mean[lo] + w * curve.mean[hi],
          (1 - w) * curve.stderr_[lo] + w * curve.stderr_[hi]};
}

CrossingResult crossing_budget(const SearchCurve& curve, double threshold_fraction, double d_max,
                               double runs_per_sample) {
  const double target = threshold_fraction * d_max;
  const auto hit = first_crossing(curve.mean, target);
  if (!hit)
    throw std::domain_error("search curve never reaches the density threshold within " +
                            std::to_string(curve.budgets.empty() ? 0 : curve.budgets.back()) +
                            " samples");
  double samples = curve.budgets[*hit];
  if (*hit > 0) {
    const std::size_t lo = *hit - 1;
    const double m0 = curve.mean[lo];
    const double m1 = curve.mean[*hit];
    if (m1 > m0) {
      const double w = std::clamp((target - m0) / (m1 - m0), 0.0, 1.0);
      samples = curve.budgets[lo] + w * (curve.budgets[*hit] - curve.budgets[lo]);
    }
  }
  return {samples, samples * runs_per_sample};
}

std::string search_curve_csv(const SearchCurve& curve) {
  std::string out = "budget,mean,stderr\n";
  char buf[96];
  for (std::size_t b = 0; b < curve.budgets.size(); ++b) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", curve.budgets[b], curve.mean[b],
                  curve.stderr_[b]);
    out += buf;
  }
  return out;
}

}  // namespace gbs
