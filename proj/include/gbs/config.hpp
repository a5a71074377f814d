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
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "gbs/circuits.hpp"
#include "gbs/gaussian.hpp"
#include "gbs/graph.hpp"
#include "gbs/json_io.hpp"

namespace gbs {

/// Single-loop device reproduction: distributions, graph, searches, table.
struct DeviceReproConfig {
  std::uint64_t seed = 7;
  std::string output = "results/device-repro";

  SingleLoopSpec device{};       // 20 bins, T = 0.5, phi = 0, first 10 occupied
  double source_phase = std::numbers::pi;  // squeezer phase on every occupied bin
  LossPlacement placement = LossPlacement::in_loop;
  LossBudget loss = LossBudget::reference();

  double lambda = 0.31;                             // source defining graph and distributions
  std::vector<double> model_lambdas{0.22, 0.31, 0.43};  // lossy-model seed sources

  std::vector<int> photon_numbers{2, 3};  // full-support distributions
  std::vector<int> k_values{3, 4};
  NodeSubset graph_nodes;                 // 0-based; default 0..9
  int repeats = 400;
  int max_budget = 300;
  double fraction = 0.95;
  int density_budget = 50;
  int bootstrap = 1000;

  DeviceReproConfig();
  void validate() const;
};

/// Planted-graph loss and squeezing sweep.
struct LossSweepConfig {
  std::uint64_t seed = 11;
  std::string output = "results/loss-sweep";

  PlantedGraphParams graph{};
  int graph_count = 10;

  std::vector<double> mean_photons{0.05, 0.1, 0.15, 0.2};  // per mode, lossless device
  std::vector<double> etas{1.0, 0.75, 0.5};
  int k = 6;
  double threshold = 0.75;

  int repeats = 1000;
  int max_budget = 20000;
  int grid_points = 60;

  void validate() const;
};

using ExperimentConfig = std::variant<DeviceReproConfig, LossSweepConfig>;

/// Throws ConfigError on syntax errors, unknown keys, wrong types or
/// out-of-range values.
ExperimentConfig parse_config(const std::string& toml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical echo of the parsed configuration (independent of formatting
/// and key order in the source file). The output directory is not part of
/// it, so bundles written to different places stay byte-identical.
Json config_to_json(const DeviceReproConfig& c);
Json config_to_json(const LossSweepConfig& c);

/// FNV-1a of the canonical echo.
std::uint64_t config_hash(const DeviceReproConfig& c);
std::uint64_t config_hash(const LossSweepConfig& c);

std::string to_string(LossPlacement p);
std::string to_string(AttachMode a);

}  // namespace gbs
