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
#include "gbs/config.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "gbs/errors.hpp"
#include "gbs/table.hpp"
#include "toml.hpp"

namespace gbs {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const toml::table& t, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, node] : t) {
    static_cast<void>(node);
    if (!allowed.count(std::string(key.str())))
      fail("unknown key '" + std::string(key.str()) + "' in " + where);
  }
}

const toml::table* sub_table(const toml::table& t, const std::string& name) {
  const auto* node = t.get(name);
  if (!node) return nullptr;
  if (!node->is_table()) fail("'" + name + "' must be a table");
  return node->as_table();
}

double get_real(const toml::table& t, const std::string& key, double fallback, const std::string& where) {
  const auto* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value_exact<double>()) return *v;
  if (auto v = n->value_exact<int64_t>()) return static_cast<double>(*v);
  fail(where + "." + key + " must be a number");
}

long long get_int(const toml::table& t, const std::string& key, long long fallback, const std::string& where) {
  const auto* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value_exact<int64_t>()) return *v;
  fail(where + "." + key + " must be an integer");
}

std::string get_string(const toml::table& t, const std::string& key, const std::string& fallback,
                       const std::string& where) {
  const auto* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value_exact<std::string>()) return *v;
  fail(where + "." + key + " must be a string");
}

std::uint64_t get_seed(const toml::table& t, std::uint64_t fallback) {
  const long long v = get_int(t, "seed", static_cast<long long>(fallback), "top level");
  if (v < 0) fail("seed must be non-negative");
  return static_cast<std::uint64_t>(v);
}

std::vector<double> get_reals(const toml::table& t, const std::string& key, std::vector<double> fallback,
                              const std::string& where) {
  const auto* n = t.get(key);
  if (!n) return fallback;
  const auto* arr = n->as_array();
  if (!arr) fail(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : *arr) {
    if (auto v = e.value_exact<double>()) {
      out.push_back(*v);
    } else if (auto w = e.value_exact<int64_t>()) {
      out.push_back(static_cast<double>(*w));
    } else {
      fail(where + "." + key + " must be an array of numbers");
    }
  }
  return out;
}

std::vector<int> get_ints(const toml::table& t, const std::string& key, std::vector<int> fallback,
                          const std::string& where) {
  const auto* n = t.get(key);
  if (!n) return fallback;
  const auto* arr = n->as_array();
  if (!arr) fail(where + "." + key + " must be an array of integers");
  std::vector<int> out;
  for (const auto& e : *arr) {
    auto v = e.value_exact<int64_t>();
    if (!v) fail(where + "." + key + " must be an array of integers");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

// 1-based node list in the file, 0-based in memory.
std::vector<int> to_zero_based(const std::vector<int>& v, const std::string& what) {
  std::vector<int> out;
  for (int x : v) {
    if (x < 1) fail(what + " entries are 1-based and must be >= 1");
    out.push_back(x - 1);
  }
  return out;
}

double parse_phase(const toml::table& t, const std::string& key, double fallback, const std::string& where) {
  const auto* n = t.get(key);
  if (!n) return fallback;
  if (auto s = n->value_exact<std::string>()) {
    if (*s == "pi") return std::numbers::pi;
    if (*s == "0") return 0.0;
    fail(where + "." + key + " must be a number of radians or \"pi\"");
  }
  return get_real(t, key, fallback, where);
}

// Rethrows validation failures as configuration errors.
template <class F>
void validated(F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

DeviceReproConfig parse_device(const toml::table& root) {
  DeviceReproConfig c;
  check_keys(root, "top level", {"kind", "seed", "output", "device", "loss", "source", "analysis"});
  c.seed = get_seed(root, c.seed);
  c.output = get_string(root, "output", c.output, "top level");
  if (const auto* d = sub_table(root, "device")) {
    check_keys(*d, "[device]", {"bins", "T", "phi", "eta_loop", "occupied", "source_phase", "loss_placement"});
    c.device.bins = static_cast<int>(get_int(*d, "bins", c.device.bins, "device"));
    c.device.T = get_real(*d, "T", c.device.T, "device");
    c.device.phi = get_real(*d, "phi", c.device.phi, "device");
    c.device.eta_loop = get_real(*d, "eta_loop", c.device.eta_loop, "device");
    c.source_phase = parse_phase(*d, "source_phase", c.source_phase, "device");
    if (d->get("occupied")) {
      const auto occ = to_zero_based(get_ints(*d, "occupied", {}, "device"), "device.occupied");
      c.device.occupied.assign(static_cast<std::size_t>(c.device.bins), false);
      for (int b : occ) {
        if (b >= c.device.bins) fail("device.occupied lists a bin beyond 'bins'");
        c.device.occupied[b] = true;
      }
    } else if (static_cast<int>(c.device.occupied.size()) != c.device.bins) {
      c.device.occupied.assign(static_cast<std::size_t>(c.device.bins), true);
    }
    const auto placement = get_string(*d, "loss_placement", to_string(c.placement), "device");
    if (placement == "uniform") {
      c.placement = LossPlacement::uniform;
    } else if (placement == "in_loop") {
      c.placement = LossPlacement::in_loop;
    } else {
      fail("device.loss_placement must be \"uniform\" or \"in_loop\"");
    }
  }
  if (const auto* l = sub_table(root, "loss")) {
    check_keys(*l, "[loss]", {"eta_c", "eta_f", "eta_o", "eta_d", "uniform"});
    c.loss.eta_c = get_real(*l, "eta_c", c.loss.eta_c, "loss");
    c.loss.eta_f = get_real(*l, "eta_f", c.loss.eta_f, "loss");
    c.loss.eta_o = get_real(*l, "eta_o", c.loss.eta_o, "loss");
    c.loss.eta_d = get_real(*l, "eta_d", c.loss.eta_d, "loss");
    if (l->get("uniform")) c.loss.uniform = get_real(*l, "uniform", 1.0, "loss");
  }
  if (const auto* s = sub_table(root, "source")) {
    check_keys(*s, "[source]", {"lambda", "model_lambdas"});
    c.lambda = get_real(*s, "lambda", c.lambda, "source");
    c.model_lambdas = get_reals(*s, "model_lambdas", c.model_lambdas, "source");
  }
  if (const auto* a = sub_table(root, "analysis")) {
    check_keys(*a, "[analysis]", {"photon_numbers", "k_values", "graph_nodes", "repeats", "max_budget",
                                  "fraction", "density_budget", "bootstrap"});
    c.photon_numbers = get_ints(*a, "photon_numbers", c.photon_numbers, "analysis");
    c.k_values = get_ints(*a, "k_values", c.k_values, "analysis");
    if (a->get("graph_nodes"))
      c.graph_nodes = to_zero_based(get_ints(*a, "graph_nodes", {}, "analysis"), "analysis.graph_nodes");
    c.repeats = static_cast<int>(get_int(*a, "repeats", c.repeats, "analysis"));
    c.max_budget = static_cast<int>(get_int(*a, "max_budget", c.max_budget, "analysis"));
    c.fraction = get_real(*a, "fraction", c.fraction, "analysis");
    c.density_budget = static_cast<int>(get_int(*a, "density_budget", c.density_budget, "analysis"));
    c.bootstrap = static_cast<int>(get_int(*a, "bootstrap", c.bootstrap, "analysis"));
  }
  validated([&] { c.validate(); });
  return c;
}

LossSweepConfig parse_sweep(const toml::table& root) {
  LossSweepConfig c;
  check_keys(root, "top level", {"kind", "seed", "output", "graph", "sweep", "search"});
  c.seed = get_seed(root, c.seed);
  c.output = get_string(root, "output", c.output, "top level");
  if (const auto* g = sub_table(root, "graph")) {
    check_keys(*g, "[graph]", {"n_small", "p_small", "n_large", "p_large", "k_attach", "attach", "count"});
    c.graph.n_small = static_cast<int>(get_int(*g, "n_small", c.graph.n_small, "graph"));
    c.graph.p_small = get_real(*g, "p_small", c.graph.p_small, "graph");
    c.graph.n_large = static_cast<int>(get_int(*g, "n_large", c.graph.n_large, "graph"));
    c.graph.p_large = get_real(*g, "p_large", c.graph.p_large, "graph");
    c.graph.k_attach = static_cast<int>(get_int(*g, "k_attach", c.graph.k_attach, "graph"));
    const auto attach = get_string(*g, "attach", to_string(c.graph.attach), "graph");
    if (attach == "global") {
      c.graph.attach = AttachMode::global;
    } else if (attach == "per_node") {
      c.graph.attach = AttachMode::per_node;
    } else {
      fail("graph.attach must be \"global\" or \"per_node\"");
    }
    c.graph_count = static_cast<int>(get_int(*g, "count", c.graph_count, "graph"));
  }
  if (const auto* s = sub_table(root, "sweep")) {
    check_keys(*s, "[sweep]", {"mean_photons", "eta", "k", "threshold"});
    c.mean_photons = get_reals(*s, "mean_photons", c.mean_photons, "sweep");
    c.etas = get_reals(*s, "eta", c.etas, "sweep");
    c.k = static_cast<int>(get_int(*s, "k", c.k, "sweep"));
    c.threshold = get_real(*s, "threshold", c.threshold, "sweep");
  }
  if (const auto* s = sub_table(root, "search")) {
    check_keys(*s, "[search]", {"repeats", "max_budget", "grid_points"});
    c.repeats = static_cast<int>(get_int(*s, "repeats", c.repeats, "search"));
    c.max_budget = static_cast<int>(get_int(*s, "max_budget", c.max_budget, "search"));
    c.grid_points = static_cast<int>(get_int(*s, "grid_points", c.grid_points, "search"));
  }
  validated([&] { c.validate(); });
  return c;
}

Json budget_json(const LossBudget& b) {
  Json j{{"eta_c", b.eta_c}, {"eta_f", b.eta_f}, {"eta_o", b.eta_o}, {"eta_d", b.eta_d}};
  j["uniform"] = b.uniform ? Json(*b.uniform) : Json(nullptr);
  return j;
}

std::vector<int> one_based(const std::vector<int>& v) {
  std::vector<int> out;
  for (int x : v) out.push_back(x + 1);
  return out;
}

}  // namespace

std::string to_string(LossPlacement p) { return p == LossPlacement::uniform ? "uniform" : "in_loop"; }
std::string to_string(AttachMode a) { return a == AttachMode::global ? "global" : "per_node"; }

DeviceReproConfig::DeviceReproConfig() {
  device.occupied.assign(static_cast<std::size_t>(device.bins), false);
  for (int i = 0; i < 10; ++i) {
    device.occupied[i] = true;
    graph_nodes.push_back(i);
  }
}

void DeviceReproConfig::validate() const {
  device.validate();
  loss.validate();
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("source.lambda must lie in (0, 1)");
  for (double l : model_lambdas)
    if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("source.model_lambdas must lie in (0, 1)");
  for (int n : photon_numbers)
    if (n < 1 || n > 2 * device.bins) throw std::invalid_argument("analysis.photon_numbers out of range");
  make_subset(graph_nodes, device.bins);
  if (graph_nodes.size() < 2) throw std::invalid_argument("analysis.graph_nodes needs >= 2 nodes");
  for (int k : k_values)
    if (k < 2 || k > static_cast<int>(graph_nodes.size()))
      throw std::invalid_argument("analysis.k_values must lie in [2, |graph_nodes|]");
  if (repeats < 1 || max_budget < 1 || bootstrap < 0)
    throw std::invalid_argument("analysis: repeats and max_budget must be >= 1, bootstrap >= 0");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("analysis.fraction must lie in (0, 1]");
  if (density_budget < 1 || density_budget > max_budget)
    throw std::invalid_argument("analysis.density_budget must lie in [1, max_budget]");
}

void LossSweepConfig::validate() const {
  graph.validate();
  const int nodes = graph.n_small + graph.n_large;
  if (graph_count < 1) throw std::invalid_argument("graph.count must be >= 1");
  if (mean_photons.empty() || etas.empty()) throw std::invalid_argument("sweep grids must be non-empty");
  for (double n : mean_photons)
    if (!(n > 0.0)) throw std::invalid_argument("sweep.mean_photons must be > 0");
  for (double e : etas)
    if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("sweep.eta must lie in (0, 1]");
  if (k < 2 || k > nodes) throw std::invalid_argument("sweep.k must lie in [2, node count]");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("sweep.threshold must lie in (0, 1]");
  if (repeats < 1 || max_budget < 1 || grid_points < 2)
    throw std::invalid_argument("search: repeats, max_budget >= 1 and grid_points >= 2");
}

ExperimentConfig parse_config(const std::string& toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    const auto& src = e.source();
    fail("config syntax error at line " + std::to_string(src.begin.line) + ": " +
         std::string(e.description()));
  }
  const auto kind = get_string(root, "kind", "", "top level");
  if (kind == "device-repro") return parse_device(root);
  if (kind == "loss-sweep") return parse_sweep(root);
  fail("top-level 'kind' must be \"device-repro\" or \"loss-sweep\"");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return parse_config(text);
}

Json config_to_json(const DeviceReproConfig& c) {
  Json j;
  j["kind"] = "device-repro";
  j["seed"] = c.seed;
  std::vector<int> occ;
  for (int b = 0; b < c.device.bins; ++b)
    if (c.device.is_occupied(b)) occ.push_back(b + 1);
  j["device"] = {{"bins", c.device.bins},       {"T", c.device.T},
                 {"phi", c.device.phi},         {"eta_loop", c.device.eta_loop},
                 {"occupied", occ},             {"source_phase", c.source_phase},
                 {"loss_placement", to_string(c.placement)}};
  j["loss"] = budget_json(c.loss);
  j["source"] = {{"lambda", c.lambda}, {"model_lambdas", c.model_lambdas}};
  j["analysis"] = {{"photon_numbers", c.photon_numbers}, {"k_values", c.k_values},
                   {"graph_nodes", one_based(c.graph_nodes)}, {"repeats", c.repeats},
                   {"max_budget", c.max_budget},       {"fraction", c.fraction},
                   {"density_budget", c.density_budget}, {"bootstrap", c.bootstrap}};
  return j;
}

Json config_to_json(const LossSweepConfig& c) {
  Json j;
  j["kind"] = "loss-sweep";
  j["seed"] = c.seed;
  j["graph"] = {{"n_small", c.graph.n_small}, {"p_small", c.graph.p_small},
                {"n_large", c.graph.n_large}, {"p_large", c.graph.p_large},
                {"k_attach", c.graph.k_attach}, {"attach", to_string(c.graph.attach)},
                {"count", c.graph_count}};
  j["sweep"] = {{"mean_photons", c.mean_photons}, {"eta", c.etas}, {"k", c.k}, {"threshold", c.threshold}};
  j["search"] = {{"repeats", c.repeats}, {"max_budget", c.max_budget}, {"grid_points", c.grid_points}};
  return j;
}

std::uint64_t config_hash(const DeviceReproConfig& c) { return fnv1a64(config_to_json(c).dump()); }
std::uint64_t config_hash(const LossSweepConfig& c) { return fnv1a64(config_to_json(c).dump()); }

}  // namespace gbs
