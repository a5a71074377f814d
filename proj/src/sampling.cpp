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
#include "gbs/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <limits>
#include <stdexcept>

#include "gbs/combinatorics.hpp"
#include "gbs/errors.hpp"
#include "gbs/hafnian.hpp"
#include "gbs/parallel.hpp"

namespace gbs {
namespace {

std::vector<double> evaluate(const OutcomeModel& model, const std::vector<ModeList>& patterns,
                             int threads) {
  std::vector<double> raw(patterns.size());
  const int m = model.mode_count();
  parallel_for(patterns.size(), threads, [&](std::size_t i) {
    thread_local DetectionPattern counts;
    counts.assign(static_cast<std::size_t>(m), 0);
    for (int mode : patterns[i]) ++counts[mode];
    raw[i] = model.probability(counts);
  });
  return raw;
}

// Fixed-order summation so the result does not depend on the thread count.
double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

DetectionPattern to_counts(const ModeList& modes, int mode_count) {
  DetectionPattern counts(static_cast<std::size_t>(mode_count), 0);
  for (int mode : modes) {
    if (mode < 0 || mode >= mode_count) throw std::invalid_argument("mode index out of range");
    ++counts[mode];
  }
  return counts;
}

ModeList to_mode_list(const DetectionPattern& counts) {
  ModeList modes;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw std::invalid_argument("negative photon count");
    modes.insert(modes.end(), static_cast<std::size_t>(counts[i]), static_cast<int>(i));
  }
  return modes;
}

std::vector<ModeList> enumerate_patterns(int mode_count, int n_photons, bool collision_free,
                                         const std::optional<NodeSubset>& subset) {
  if (n_photons < 0) throw std::invalid_argument("photon number must be >= 0");
  std::vector<int> modes;
  if (subset) {
    modes = make_subset(*subset, mode_count);
  } else {
    for (int i = 0; i < mode_count; ++i) modes.push_back(i);
  }
  const int n = static_cast<int>(modes.size());
  const std::uint64_t count = collision_free ? binomial(n, n_photons)
                                             : binomial(n + n_photons - 1, n_photons);
  if (count > kEnumerationGuard)
    throw GuardError("enumeration of " + std::to_string(count) +
                                " patterns exceeds the guard");
  std::vector<ModeList> out;
  if (collision_free && n_photons > n) return out;
  if (n_photons == 0) {
    out.emplace_back();
    return out;
  }
  if (n == 0) return out;
  out.reserve(count);
  std::vector<int> c(static_cast<std::size_t>(n_photons));
  for (int i = 0; i < n_photons; ++i) c[i] = collision_free ? i : 0;
  do {
    ModeList ml(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) ml[i] = modes[c[i]];
    out.push_back(std::move(ml));
  } while (collision_free ? next_combination(c, n) : next_multiset(c, n));
  return out;
}

double nfold_mass(const OutcomeModel& model, int n_photons, bool collision_free,
                  const std::optional<NodeSubset>& subset, int threads) {
  const auto patterns = enumerate_patterns(model.mode_count(), n_photons, collision_free, subset);
  return ordered_sum(evaluate(model, patterns, threads));
}

PatternDistribution enumerate_distribution(const OutcomeModel& model, int n_photons,
                                           bool collision_free,
                                           const std::optional<NodeSubset>& subset, int threads) {
  PatternDistribution d;
  d.mode_count = model.mode_count();
  d.n_photons = n_photons;
  d.collision_free = collision_free;
  d.patterns = enumerate_patterns(d.mode_count, n_photons, collision_free, subset);
  d.probs = evaluate(model, d.patterns, threads);
  d.norm = ordered_sum(d.probs);
  if (!(d.norm > 0.0) || !std::isfinite(d.norm))
    throw NumericalError("enumerate_distribution: " + std::to_string(n_photons) +
                         "-photon mass is zero");
  for (double& p : d.probs) p /= d.norm;
  d.device_hash = kernel_hash(model.kernel());
  return d;
}

PatternDistribution enumerate_distribution(const GaussianState& state, int n_photons,
                                           bool collision_free,
                                           const std::optional<NodeSubset>& subset, int threads) {
  return enumerate_distribution(OutcomeModel(state), n_photons, collision_free, subset, threads);
}

PatternDistribution ideal_graph_distribution(const RMatrix& b, int n_photons, int threads) {
  const int m = static_cast<int>(b.rows());
  if (b.cols() != m) throw std::invalid_argument("ideal distribution: matrix must be square");
  if (n_photons < 2) throw std::invalid_argument("ideal distribution: need N >= 2");
  bool pos = false, neg = false;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (std::abs(b(i, j) - b(j, i)) > 1e-12)
        throw std::invalid_argument("ideal distribution: matrix is not symmetric");
      pos |= b(i, j) > 0.0;
      neg |= b(i, j) < 0.0;
    }
  if (pos && neg) throw std::invalid_argument("ideal distribution: matrix has mixed signs");

  const int even_n = n_photons % 2 == 0 ? n_photons : n_photons + 1;
  if (even_n > m) throw std::invalid_argument("ideal distribution: N exceeds the node count");
  const CMatrix bc = b.cast<Complex>();
  const auto base = enumerate_patterns(m, even_n, true);
  std::vector<double> raw(base.size());
  parallel_for(base.size(), threads, [&](std::size_t i) {
    thread_local std::vector<int> ones;
    ones.assign(base[i].size(), 1);
    raw[i] = std::norm(detail::hafnian_multiset(bc, base[i], ones));
  });
  const double mass = ordered_sum(raw);
  if (!(mass > 0.0)) throw NumericalError("ideal distribution: all hafnians vanish");

  PatternDistribution d;
  d.mode_count = m;
  d.n_photons = even_n;
  d.collision_free = true;
  d.device_hash = fnv1a64(std::string_view(reinterpret_cast<const char*>(b.data()),
                                           sizeof(double) * static_cast<std::size_t>(b.size())));
  d.patterns = base;
  d.probs = raw;
  d.norm = mass;
  for (double& p : d.probs) p /= mass;
  return even_n == n_photons ? d : drop_one_detection(d);
}

PatternDistribution drop_one_detection(const PatternDistribution& dist) {
  const int n = dist.n_photons;
  if (n < 1) throw std::invalid_argument("drop_one_detection: distribution has no photons");
  PatternDistribution out;
  out.mode_count = dist.mode_count;
  out.n_photons = n - 1;
  out.collision_free = dist.collision_free;
  out.norm = dist.norm;
  out.device_hash = dist.device_hash;
  std::vector<ModeList> subs;
  subs.reserve(dist.size() * static_cast<std::size_t>(n));
  for (const auto& p : dist.patterns)
    for (int drop = 0; drop < n; ++drop) {
      ModeList sub;
      for (int j = 0; j < n; ++j)
        if (j != drop) sub.push_back(p[j]);
      subs.push_back(std::move(sub));
    }
  std::vector<ModeList> sorted = subs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  out.patterns = std::move(sorted);
  out.probs.assign(out.patterns.size(), 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i)
    for (int drop = 0; drop < n; ++drop) {
      const auto& sub = subs[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(drop)];
      const auto it = std::lower_bound(out.patterns.begin(), out.patterns.end(), sub);
      out.probs[static_cast<std::size_t>(it - out.patterns.begin())] += dist.probs[i] / n;
    }
  return out;
}

CategoricalSampler::CategoricalSampler(const std::vector<double>& probs)
    : accept_(probs.size()), alias_(probs.size()) {
  const std::size_t n = probs.size();
  if (n == 0) throw std::invalid_argument("sampler needs a non-empty distribution");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw GuardError("sampler too large");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("sampler: invalid probability");
    total += p;
  }
  if (!(total > 0.0)) throw std::invalid_argument("sampler: zero total probability");
  // Vose's construction; stacks are processed in index order for determinism.
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probs[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto l : large) {
    accept_[l] = 1.0;
    alias_[l] = l;
  }
  // Leftovers from rounding: keep them only if they carry weight.
  for (auto s : small) {
    accept_[s] = probs[s] > 0.0 ? 1.0 : 0.0;
    alias_[s] = s;
  }
  // A zero-weight column must always redirect to a column with weight.
  for (std::size_t i = 0; i < n; ++i)
    if (probs[i] == 0.0) accept_[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (accept_[i] < 1.0 && probs[alias_[i]] == 0.0) {
      // Only reachable through rounding leftovers; fall back to the largest weight.
      const auto best = static_cast<std::uint32_t>(
          std::max_element(probs.begin(), probs.end()) - probs.begin());
      alias_[i] = best;
    }
}

std::size_t CategoricalSampler::draw(Rng& rng) const {
  const double u = rng.uniform() * static_cast<double>(accept_.size());
  const auto i = std::min(static_cast<std::size_t>(u), accept_.size() - 1);
  return (u - static_cast<double>(i)) < accept_[i] ? i : alias_[i];
}

std::vector<ModeList> draw_samples(const PatternDistribution& dist, std::size_t count,
                                   std::uint64_t seed) {
  const CategoricalSampler sampler(dist.probs);
  Rng rng(seed);
  std::vector<ModeList> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(dist.patterns[sampler.draw(rng)]);
  return out;
}

double tvd(const PatternDistribution& p, const PatternDistribution& q) {
  if (p.n_photons != q.n_photons || p.collision_free != q.collision_free)
    throw std::invalid_argument("tvd: distributions differ in N or collision flag");
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < p.size() || j < q.size()) {
    if (j == q.size() || (i < p.size() && p.patterns[i] < q.patterns[j])) {
      sum += p.probs[i++];
    } else if (i == p.size() || q.patterns[j] < p.patterns[i]) {
      sum += q.probs[j++];
    } else {
      sum += std::abs(p.probs[i++] - q.probs[j++]);
    }
  }
  return std::min(1.0, 0.5 * sum);
}

double runs_per_sample(const OutcomeModel& model, int n_photons,
                       const std::optional<NodeSubset>& subset, int threads) {
  const double mass = nfold_mass(model, n_photons, true, subset, threads);
  if (!(mass > 0.0)) throw NumericalError("runs_per_sample: N-fold probability is zero");
  return 1.0 / mass;
}

double runs_per_sample(const GaussianState& state, int n_photons,
                       const std::optional<NodeSubset>& subset, int threads) {
  return runs_per_sample(OutcomeModel(state), n_photons, subset, threads);
}

double mean_photons_per_mode(const GaussianState& state) {
  const auto n = mean_photon_numbers(state);
  double s = 0.0;
  for (double x : n) s += x;
  return s / static_cast<double>(n.size());
}

std::uint64_t kernel_hash(const KernelMatrix& k) {
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(k.a.data()),
                                  sizeof(Complex) * static_cast<std::size_t>(k.a.size())));
}

std::string format_pattern(const ModeList& modes) {
  std::string s;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(modes[i] + 1);
  }
  return s;
}

ModeList parse_pattern(const std::string& text) {
  ModeList modes;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, '-')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed pattern '" + text + "'");
    }
    if (used != tok.size() || v < 1) throw std::invalid_argument("malformed pattern '" + text + "'");
    modes.push_back(v - 1);
  }
  if (modes.empty()) throw std::invalid_argument("empty pattern");
  std::sort(modes.begin(), modes.end());
  return modes;
}

Table distribution_table(const PatternDistribution& dist) {
  Table t({"pattern", "probability"});
  t.comment("N", std::to_string(dist.n_photons));
  t.comment("collision_free", dist.collision_free ? "true" : "false");
  t.comment("norm", format_real(dist.norm));
  t.comment("device_hash", hex64(dist.device_hash));
  for (std::size_t i = 0; i < dist.size(); ++i)
    t.add_row({format_pattern(dist.patterns[i]), dist.probs[i]});
  return t;
}

std::string distribution_csv(const PatternDistribution& dist) { return distribution_table(dist).to_csv(); }

}  // namespace gbs
