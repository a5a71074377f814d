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

#include "gbs/gaussian.hpp"
#include "gbs/graph.hpp"
#include "gbs/rng.hpp"
#include "gbs/table.hpp"
#include "gbs/types.hpp"

namespace gbs {

/// Non-decreasing list of the modes that registered photons; a mode with
/// n_i photons appears n_i times. Collision-free patterns are node subsets.
using ModeList = std::vector<int>;

DetectionPattern to_counts(const ModeList& modes, int mode_count);
ModeList to_mode_list(const DetectionPattern& counts);

/// Conditional N-photon distribution. Patterns are stored as mode lists in
/// ascending lexicographic order; `norm` is the unconditioned mass p(N).
struct PatternDistribution {
  int mode_count = 0;
  int n_photons = 0;
  bool collision_free = true;
  std::vector<ModeList> patterns;
  std::vector<double> probs;
  double norm = 0.0;
  std::uint64_t device_hash = 0;

  DetectionPattern pattern(std::size_t i) const { return to_counts(patterns[i], mode_count); }
  std::size_t size() const { return patterns.size(); }
};

inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

/// All admissible N-photon mode lists in lexicographic order, restricted to
/// `subset` of the modes when given.
std::vector<ModeList> enumerate_patterns(int mode_count, int n_photons, bool collision_free,
                                         const std::optional<NodeSubset>& subset = std::nullopt);

/// Unconditioned N-photon mass without the zero-norm check.
double nfold_mass(const OutcomeModel& model, int n_photons, bool collision_free,
                  const std::optional<NodeSubset>& subset = std::nullopt, int threads = 1);

/// Exhaustive evaluation of every admissible pattern, then conditioning.
/// Throws NumericalError when the mass is zero.
PatternDistribution enumerate_distribution(const OutcomeModel& model, int n_photons,
                                           bool collision_free,
                                           const std::optional<NodeSubset>& subset = std::nullopt,
                                           int threads = 1);
PatternDistribution enumerate_distribution(const GaussianState& state, int n_photons,
                                           bool collision_free,
                                           const std::optional<NodeSubset>& subset = std::nullopt,
                                           int threads = 1);

/// Lossless graph-sampling ideal over collision-free patterns of B:
/// p(n) proportional to |Haf(B_n)|^2 for even N; odd N marginalises one
/// uniformly removed detection of the (N+1)-fold distribution.
/// Rejects B with off-diagonal entries of both signs.
PatternDistribution ideal_graph_distribution(const RMatrix& b, int n_photons, int threads = 1);

/// (N-1)-photon distribution obtained by deleting one of the N detections
/// of every pattern uniformly at random. \`norm\` is carried over.
PatternDistribution drop_one_detection(const PatternDistribution& dist);

/// Walker alias sampler over a distribution's pattern indices: one
/// 53-bit uniform per draw, O(1) per draw. Zero-weight entries are never
/// returned.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const std::vector<double>& probs);
  std::size_t draw(Rng& rng) const;
  std::size_t size() const { return accept_.size(); }

 private:
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

std::vector<ModeList> draw_samples(const PatternDistribution& dist, std::size_t count,
                                   std::uint64_t seed);

/// Half the L1 distance over the union support.
double tvd(const PatternDistribution& p, const PatternDistribution& q);

/// 1 / p(N) for collision-free N-fold detections.
double runs_per_sample(const OutcomeModel& model, int n_photons,
                       const std::optional<NodeSubset>& subset = std::nullopt, int threads = 1);
double runs_per_sample(const GaussianState& state, int n_photons,
                       const std::optional<NodeSubset>& subset = std::nullopt, int threads = 1);

double mean_photons_per_mode(const GaussianState& state);

/// Hash of the kernel matrix entries, identifying the device + source.
std::uint64_t kernel_hash(const KernelMatrix& k);

/// 1-based dash-joined modes, e.g. "3-7-7".
std::string format_pattern(const ModeList& modes);
ModeList parse_pattern(const std::string& text);

/// Columns pattern, probability; header N, collision_free, norm, device_hash.
Table distribution_table(const PatternDistribution& dist);
/// "# key=value" header lines, then "pattern,probability" rows.
std::string distribution_csv(const PatternDistribution& dist);

}  // namespace gbs
