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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbs/config.hpp"
#include "gbs/sampling.hpp"
#include "gbs/search.hpp"
#include "gbs/table.hpp"

namespace gbs {

std::string version();

struct RunOptions {
  int threads = 1;
  OutputFormat format = OutputFormat::csv;
  /// Bundle directory; nothing is written when empty.
  std::filesystem::path out;
  /// Progress messages (stage names); never part of the outputs.
  std::function<void(const std::string&)> log;
};

/// Named sub-seeds derived from the master seed, recorded in meta.json.
class SeedBook {
 public:
  explicit SeedBook(std::uint64_t master) : master_(master) {}
  std::uint64_t get(const std::string& name);
  std::uint64_t master() const { return master_; }
  Json to_json() const;

 private:
  std::uint64_t master_;
  std::map<std::string, std::uint64_t> seeds_;
};

/// Transfer matrix of the configured single-loop device, losses included.
TransferMatrix device_transfer(const DeviceReproConfig& cfg);
/// Output state for source squeezing tanh r = lambda on the occupied bins.
GaussianState device_state(const DeviceReproConfig& cfg, double lambda);

/// Collision-free k-fold seed distribution on `nodes` of a device state.
/// When the state gives zero k-fold mass (odd k on a lossless device) the
/// (k+1)-fold distribution with one detection removed is used instead;
/// `fallback` reports it.
PatternDistribution device_seed_distribution(const OutcomeModel& model, int k,
                                             const NodeSubset& nodes, int threads,
                                             bool* fallback = nullptr);

struct TableRow {
  int k = 0;
  std::string source;
  FractionResult at_fraction;
  ValueWithError density;
};

struct DeviceReproResult {
  WeightedGraph graph;     // all bins
  WeightedGraph subgraph;  // restricted to graph_nodes
  bool subgraph_nonnegative = false;
  std::map<int, DensestResult> densest;  // per k, in subgraph indices
  std::vector<PatternDistribution> distributions;  // per photon number
  std::map<int, std::vector<SearchCurve>> curves;  // per k, in source order
  std::vector<TableRow> table;
  Json meta;
};

DeviceReproResult run_device_reproduction(const DeviceReproConfig& cfg, const RunOptions& opts);

struct SweepPoint {
  int graph = 0;
  double mean_photons = 0.0;  // per mode, lossless device
  double eta = 1.0;
  double tvd = 0.0;
  double runs_per_sample = 0.0;
  double mean_photons_out = 0.0;  // per mode after loss
  std::optional<CrossingResult> crossing;
};

struct LossSweepResult {
  std::vector<std::uint64_t> graph_hashes;
  std::vector<double> d_max;
  std::vector<SweepPoint> points;
  std::vector<std::optional<CrossingResult>> uniform_crossing;  // per graph
  int max_budget = 0;
  Json meta;
};

LossSweepResult run_loss_sweep(const LossSweepConfig& cfg, const RunOptions& opts);

struct FitResult {
  double lambda = 0.0;
  double tvd = 0.0;
  int evaluations = 0;
};

/// Golden-section minimisation of tvd(observed, model(lambda)) on [lo, hi].
FitResult fit_squeezing(const PatternDistribution& observed,
                        const std::function<PatternDistribution(double)>& model, double lo,
                        double hi, double tol = 1e-4);

/// Empirical distribution of recorded N-photon patterns (mode lists).
PatternDistribution empirical_distribution(const std::vector<ModeList>& samples, int mode_count);

}  // namespace gbs
