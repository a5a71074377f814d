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
#include "gbs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gbs/encoding.hpp"
#include "gbs/errors.hpp"
#include "gbs/json_io.hpp"

#ifndef GBS_VERSION
#define GBS_VERSION "0.0.0"
#endif

namespace gbs {
namespace {

constexpr int kSchemaVersion = 1;

// Runs one pipeline stage and prefixes any failure with its name, keeping
// the error category (numerical, precondition, other).
template <class F>
auto stage(const RunOptions& opts, const std::string& name, F&& f) -> decltype(f()) {
  if (opts.log) opts.log(name);
  try {
    return f();
  } catch (const NumericalError& e) {
    throw NumericalError("[" + name + "] " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError("[" + name + "] " + e.what());
  } catch (const GuardError& e) {
    throw GuardError("[" + name + "] " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("[" + name + "] " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error("[" + name + "] " + e.what());
  }
}

std::string figure_stem(const std::string& base, std::size_t index) {
  return base + static_cast<char>('a' + index);
}

std::string lambda_label(double l) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "model-%g", l);
  return buf;
}

std::uint64_t matrix_hash(const CMatrix& m) {
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(m.data()),
                                  sizeof(Complex) * static_cast<std::size_t>(m.size())));
}

Json one_based_json(const NodeSubset& s) {
  Json j = Json::array();
  for (int v : s) j.push_back(v + 1);
  return j;
}

// Provenance lines shared by every table of a bundle.
void stamp(Table& t, const std::string& config_hash, const SeedBook& seeds) {
  t.comment("code_version", version());
  t.comment("config_hash", config_hash);
  t.comment("master_seed", std::to_string(seeds.master()));
  const Json all = seeds.to_json();
  std::string list;
  for (const auto& [name, v] : all.items())
    list += (list.empty() ? "" : ";") + name + ":" + std::to_string(v.get<std::uint64_t>());
  t.comment("seeds", list);
}

Json provenance_json(const std::string& config_hash, const SeedBook& seeds) {
  return {{"code_version", version()},
          {"config_hash", config_hash},
          {"master_seed", seeds.master()},
          {"seeds", seeds.to_json()}};
}

using PendingTables = std::vector<std::pair<std::string, Table>>;

// Tables are held back until the run ends so each one can list every
// sub-seed the run derived.
std::vector<std::string> write_pending(const RunOptions& opts, PendingTables& pending,
                                       const std::string& config_hash, const SeedBook& seeds) {
  std::vector<std::string> files;
  for (auto& [stem, table] : pending) {
    stamp(table, config_hash, seeds);
    files.push_back(write_table(opts.out, stem, table, opts.format));
  }
  return files;
}

Json fraction_json(const FractionResult& f) {
  Json j;
  j["samples"] = f.samples ? Json(*f.samples) : Json(nullptr);
  j["uncertainty"] = f.uncertainty;
  j["max_budget"] = f.max_budget;
  j["bootstrap_unreached"] = f.bootstrap_unreached;
  return j;
}

}  // namespace

std::string version() { return GBS_VERSION; }

std::uint64_t SeedBook::get(const std::string& name) {
  const auto it = seeds_.find(name);
  if (it != seeds_.end()) return it->second;
  const std::uint64_t s = derive_seed(master_, stream_tag(name));
  seeds_.emplace(name, s);
  return s;
}

Json SeedBook::to_json() const {
  Json j = Json::object();
  for (const auto& [k, v] : seeds_) j[k] = v;
  return j;
}

TransferMatrix device_transfer(const DeviceReproConfig& cfg) {
  return single_loop_device(cfg.device, cfg.loss, cfg.placement);
}

GaussianState device_state(const DeviceReproConfig& cfg, double lambda) {
  std::vector<SqueezerSpec> specs(static_cast<std::size_t>(cfg.device.bins));
  for (int b = 0; b < cfg.device.bins; ++b)
    if (cfg.device.is_occupied(b)) specs[b] = SqueezerSpec::from_tanh(lambda, cfg.source_phase);
  return apply_channel(smsv_state(specs), device_transfer(cfg));
}

PatternDistribution device_seed_distribution(const OutcomeModel& model, int k,
                                             const NodeSubset& nodes, int threads,
                                             bool* fallback) {
  if (fallback) *fallback = false;
  const double mass = nfold_mass(model, k, true, nodes, threads);
  if (mass > 0.0) return enumerate_distribution(model, k, true, nodes, threads);
  if (fallback) *fallback = true;
  return drop_one_detection(enumerate_distribution(model, k + 1, true, nodes, threads));
}

DeviceReproResult run_device_reproduction(const DeviceReproConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  DeviceReproResult res;
  SeedBook seeds(cfg.seed);
  const int threads = opts.threads;
  PendingTables pending;
  const bool write = !opts.out.empty();
  Json graph_doc;

  const TransferMatrix lambda = stage(opts, "device", [&] { return device_transfer(cfg); });
  const OutcomeModel source_model = stage(opts, "source state", [&] {
    return OutcomeModel(device_state(cfg, cfg.lambda));
  });

  for (std::size_t i = 0; i < cfg.photon_numbers.size(); ++i) {
    const int n = cfg.photon_numbers[i];
    res.distributions.push_back(stage(opts, "distribution N=" + std::to_string(n), [&] {
      return enumerate_distribution(source_model, n, false, std::nullopt, threads);
    }));
    pending.emplace_back(figure_stem("fig4", i), distribution_table(res.distributions.back()));
  }

  stage(opts, "graph", [&] {
    res.graph = graph_from_kernel(source_model.kernel());
    res.subgraph = induced_subgraph(res.graph, cfg.graph_nodes);
    std::vector<int> all(static_cast<std::size_t>(res.subgraph.node_count()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    res.subgraph_nonnegative = is_nonnegative(res.subgraph, all);
    if (!res.subgraph_nonnegative)
      throw std::invalid_argument(
          "the selected subgraph has negative edges; density and hafnian are no longer correlated "
          "(check device.source_phase)");
    graph_doc = graph_to_json(res.graph);
    return 0;
  });

  // Graph node i of the subgraph is device mode graph_nodes[i].
  std::vector<int> node_of_mode(static_cast<std::size_t>(cfg.device.bins), -1);
  for (std::size_t i = 0; i < cfg.graph_nodes.size(); ++i)
    node_of_mode[cfg.graph_nodes[i]] = static_cast<int>(i);

  std::vector<OutcomeModel> models;
  for (double l : cfg.model_lambdas)
    models.push_back(stage(opts, "model state " + lambda_label(l),
                           [&] { return OutcomeModel(device_state(cfg, l)); }));

  Json fallbacks = Json::array();
  Table table({"k", "source", "samples_at_fraction", "samples_err", "reached", "max_budget",
               "density_at_budget", "density_err"});
  table.comment("fraction", format_real(cfg.fraction));
  table.comment("density_budget", std::to_string(cfg.density_budget));
  table.comment("repeats", std::to_string(cfg.repeats));
  table.comment("uncertainty", "bootstrap over repeats, " + std::to_string(cfg.bootstrap) + " resamples");

  const auto budgets = dense_budget_grid(cfg.max_budget);
  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    const int k = cfg.k_values[ki];
    const std::string kt = "k" + std::to_string(k);
    const auto densest = stage(opts, "densest " + kt, [&] {
      return densest_subgraph_bruteforce(res.subgraph, k, threads);
    });
    res.densest[k] = densest;

    std::vector<std::pair<std::string, SeedStream>> sources;
    stage(opts, "seed sources " + kt, [&] {
      sources.emplace_back("ideal", SeedStream::from_distribution(
                                        ideal_graph_distribution(res.subgraph.adjacency(), k, threads)));
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        bool fell_back = false;
        const auto dist = device_seed_distribution(models[mi], k, cfg.graph_nodes, threads, &fell_back);
        if (fell_back) fallbacks.push_back({{"k", k}, {"source", lambda_label(cfg.model_lambdas[mi])}});
        sources.emplace_back(lambda_label(cfg.model_lambdas[mi]),
                             SeedStream::from_distribution(dist, node_of_mode));
      }
      sources.emplace_back("uniform", SeedStream::uniform(res.subgraph.node_count(), k));
      return 0;
    });

    Table fig({"source", "budget", "mean", "stderr"});
    fig.comment("k", std::to_string(k));
    fig.comment("d_max", format_real(densest.density));
    fig.comment("repeats", std::to_string(cfg.repeats));
    fig.comment("graph_hash", hex64(res.subgraph.hash()));
    for (const auto& [name, stream] : sources) {
      SearchConfig sc;
      sc.k = k;
      sc.budgets = budgets;
      sc.repeats = cfg.repeats;
      sc.rng_seed = seeds.get("search/" + kt + "/" + name);
      auto curve = stage(opts, "search " + kt + " " + name,
                         [&] { return random_search(res.subgraph, stream, sc, threads); });
      curve.source = name;
      const auto frac = samples_at_density_fraction(curve, cfg.fraction, densest.density, cfg.bootstrap,
                                                    seeds.get("bootstrap/" + kt + "/" + name));
      const auto dens = density_at_budget(curve, cfg.density_budget);
      res.table.push_back({k, name, frac, dens});
      table.add_row({static_cast<long long>(k), name,
                     frac.samples ? Cell(static_cast<long long>(*frac.samples)) : Cell(),
                     frac.uncertainty, frac.samples.has_value(), static_cast<long long>(frac.max_budget),
                     dens.value, dens.error});
      for (std::size_t b = 0; b < curve.budgets.size(); ++b)
        fig.add_row({name, static_cast<long long>(curve.budgets[b]), curve.mean[b], curve.stderr_[b]});
      res.curves[k].push_back(std::move(curve));
    }
    pending.emplace_back(figure_stem("fig5", ki), std::move(fig));
  }
  pending.emplace_back("table1", std::move(table));

  const std::string chash = hex64(config_hash(cfg));
  std::vector<std::string> files;
  if (write) {
    files = write_pending(opts, pending, chash, seeds);
    graph_doc["provenance"] = provenance_json(chash, seeds);
    write_text_file(opts.out / "graph.json", dump_json(graph_doc));
    files.push_back("graph.json");
  }

  Json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["code_version"] = version();
  meta["kind"] = "device-repro";
  meta["config"] = config_to_json(cfg);
  meta["config_hash"] = chash;
  meta["master_seed"] = cfg.seed;
  meta["seeds"] = seeds.to_json();
  meta["device"] = {{"transfer_hash", hex64(matrix_hash(lambda.matrix()))},
                    {"power_transmission_uniform", cfg.loss.transmission()},
                    {"loss_placement", to_string(cfg.placement)},
                    {"source_kernel_hash", hex64(kernel_hash(source_model.kernel()))}};
  Json dens = Json::object();
  for (const auto& [k, d] : res.densest)
    dens[std::to_string(k)] = {{"density", d.density}, {"nodes", one_based_json(d.nodes)}};
  meta["graph"] = {{"hash", hex64(res.graph.hash())},
                   {"subgraph_hash", hex64(res.subgraph.hash())},
                   {"nodes", one_based_json(cfg.graph_nodes)},
                   {"nonnegative", res.subgraph_nonnegative},
                   {"densest", dens}};
  Json tab = Json::array();
  for (const auto& row : res.table)
    tab.push_back({{"k", row.k}, {"source", row.source}, {"at_fraction", fraction_json(row.at_fraction)},
                   {"density", row.density.value}, {"density_err", row.density.error}});
  meta["table"] = tab;
  meta["odd_k_fallbacks"] = fallbacks;
  meta["uncertainty_method"] = "standard error over repeats; bootstrap resampling of repeats for budgets";
  meta["seed_pool_resampling"] = "with replacement";
  meta["files"] = files;
  res.meta = meta;
  if (write) write_text_file(opts.out / "meta.json", dump_json(meta));
  return res;
}

LossSweepResult run_loss_sweep(const LossSweepConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  LossSweepResult res;
  SeedBook seeds(cfg.seed);
  const int threads = opts.threads;
  const bool write = !opts.out.empty();
  res.max_budget = cfg.max_budget;
  const auto budgets = geometric_budget_grid(cfg.max_budget, cfg.grid_points);

  Table fig_a({"graph", "mean_photons", "eta", "tvd", "runs_per_sample", "mean_photons_out"});
  Table fig_b({"graph", "source", "mean_photons", "eta", "budget", "mean", "stderr"});
  Table fig_c({"graph", "source", "mean_photons", "eta", "reached", "samples", "runs"});
  for (Table* t : {&fig_a, &fig_b, &fig_c}) {
    t->comment("k", std::to_string(cfg.k));
    t->comment("threshold", format_real(cfg.threshold));
    t->comment("repeats", std::to_string(cfg.repeats));
    t->comment("max_budget", std::to_string(cfg.max_budget));
  }
  auto add_curve = [&](int gi, const std::string& src, const Cell& n, const Cell& eta, const SearchCurve& c) {
    for (std::size_t b = 0; b < c.budgets.size(); ++b)
      fig_b.add_row({static_cast<long long>(gi), src, n, eta, static_cast<long long>(c.budgets[b]), c.mean[b],
                     c.stderr_[b]});
  };
  auto add_crossing = [&](int gi, const std::string& src, const Cell& n, const Cell& eta,
                          const std::optional<CrossingResult>& x) {
    fig_c.add_row({static_cast<long long>(gi), src, n, eta, x.has_value(), x ? Cell(x->samples) : Cell(),
                   x ? Cell(x->runs) : Cell()});
  };
  auto try_cross = [&](const SearchCurve& c, double dmax, double rps) -> std::optional<CrossingResult> {
    try {
      return crossing_budget(c, cfg.threshold, dmax, rps);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
  };

  Json graphs = Json::array();
  for (int gi = 0; gi < cfg.graph_count; ++gi) {
    const std::string gt = "g" + std::to_string(gi);
    const auto g = stage(opts, "planted graph " + gt,
                         [&] { return planted_graph(seeds.get("planted/" + gt), cfg.graph); });
    const int m = g.node_count();
    const auto densest = stage(opts, "densest " + gt, [&] { return densest_subgraph_bruteforce(g, cfg.k, threads); });
    res.graph_hashes.push_back(g.hash());
    res.d_max.push_back(densest.density);
    const CMatrix b = g.adjacency().cast<Complex>();
    const auto factor = stage(opts, "takagi " + gt, [&] { return takagi(b); });

    Json encs = Json::array();
    for (double n : cfg.mean_photons) {
      const auto dev = stage(opts, "encode " + gt, [&] {
        return encode_graph(b, rescale_for_mean_photons(factor.values, n * m));
      });
      encs.push_back({{"mean_photons", n}, {"c", dev.params.c}});
      const GaussianState lossless = encoded_state(dev);
      const PatternDistribution ref = stage(opts, "lossless distribution " + gt, [&] {
        return enumerate_distribution(lossless, cfg.k, true, std::nullopt, threads);
      });
      for (double eta : cfg.etas) {
        char tag[64];
        std::snprintf(tag, sizeof tag, "%s/n%g/eta%g", gt.c_str(), n, eta);
        SweepPoint pt;
        pt.graph = gi;
        pt.mean_photons = n;
        pt.eta = eta;
        const GaussianState state = eta == 1.0 ? lossless : uniform_loss(lossless, eta);
        const PatternDistribution dist =
            eta == 1.0 ? ref : stage(opts, std::string("lossy distribution ") + tag, [&] {
              return enumerate_distribution(state, cfg.k, true, std::nullopt, threads);
            });
        pt.tvd = tvd(dist, ref);
        pt.runs_per_sample = 1.0 / dist.norm;
        pt.mean_photons_out = mean_photons_per_mode(state);
        SearchConfig sc;
        sc.k = cfg.k;
        sc.budgets = budgets;
        sc.repeats = cfg.repeats;
        sc.rng_seed = seeds.get(std::string("search/") + tag);
        const auto curve = stage(opts, std::string("search ") + tag, [&] {
          return random_search(g, SeedStream::from_distribution(dist), sc, threads);
        });
        pt.crossing = try_cross(curve, densest.density, pt.runs_per_sample);
        fig_a.add_row({static_cast<long long>(gi), n, eta, pt.tvd, pt.runs_per_sample, pt.mean_photons_out});
        add_curve(gi, "gbs", n, eta, curve);
        add_crossing(gi, "gbs", n, eta, pt.crossing);
        res.points.push_back(pt);
      }
    }

    SearchConfig sc;
    sc.k = cfg.k;
    sc.budgets = budgets;
    sc.repeats = cfg.repeats;
    sc.rng_seed = seeds.get("search/" + gt + "/uniform");
    const auto ucurve = stage(opts, "search " + gt + " uniform",
                              [&] { return random_search(g, SeedStream::uniform(m, cfg.k), sc, threads); });
    res.uniform_crossing.push_back(try_cross(ucurve, densest.density, 1.0));
    add_curve(gi, "uniform", Cell(), Cell(), ucurve);
    add_crossing(gi, "uniform", Cell(), Cell(), res.uniform_crossing.back());

    graphs.push_back({{"index", gi},
                      {"hash", hex64(g.hash())},
                      {"d_max", densest.density},
                      {"densest_nodes", one_based_json(densest.nodes)},
                      {"takagi_values", factor.values},
                      {"encodings", encs},
                      {"graph", graph_to_json(g)}});
  }

  const std::string chash = hex64(config_hash(cfg));
  std::vector<std::string> files;
  if (write) {
    PendingTables pending;
    pending.emplace_back("fig7a", std::move(fig_a));
    pending.emplace_back("fig7b", std::move(fig_b));
    pending.emplace_back("fig7c", std::move(fig_c));
    files = write_pending(opts, pending, chash, seeds);
  }
  Json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["code_version"] = version();
  meta["kind"] = "loss-sweep";
  meta["config"] = config_to_json(cfg);
  meta["config_hash"] = chash;
  meta["master_seed"] = cfg.seed;
  meta["seeds"] = seeds.to_json();
  meta["k_attach"] = cfg.graph.k_attach;
  meta["attach_mode"] = to_string(cfg.graph.attach);
  meta["mean_photons_semantics"] = "per-mode mean of the lossless encoded device";
  meta["budget_grid"] = budgets;
  meta["graphs"] = graphs;
  meta["files"] = files;
  res.meta = meta;
  if (write) write_text_file(opts.out / "meta.json", dump_json(meta));
  return res;
}

FitResult fit_squeezing(const PatternDistribution& observed,
                        const std::function<PatternDistribution(double)>& model, double lo, double hi,
                        double tol) {
  if (!(lo < hi) || !(tol > 0.0)) throw std::invalid_argument("fit_squeezing: need lo < hi, tol > 0");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  FitResult r;
  auto eval = [&](double l) {
    ++r.evaluations;
    return tvd(observed, model(l));
  };
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = eval(x2);
    }
  }
  r.lambda = f1 <= f2 ? x1 : x2;
  r.tvd = std::min(f1, f2);
  return r;
}

PatternDistribution empirical_distribution(const std::vector<ModeList>& samples, int mode_count) {
  if (samples.empty()) throw std::invalid_argument("empirical distribution needs samples");
  PatternDistribution d;
  d.mode_count = mode_count;
  d.n_photons = static_cast<int>(samples.front().size());
  d.collision_free = true;
  std::vector<ModeList> sorted;
  for (auto s : samples) {
    if (static_cast<int>(s.size()) != d.n_photons)
      throw std::invalid_argument("empirical distribution: samples differ in photon number");
    std::sort(s.begin(), s.end());
    for (int v : s)
      if (v < 0 || v >= mode_count) throw std::invalid_argument("empirical distribution: mode out of range");
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) d.collision_free = false;
    sorted.push_back(std::move(s));
  }
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    d.patterns.push_back(sorted[i]);
    d.probs.push_back(static_cast<double>(j - i) / static_cast<double>(sorted.size()));
    i = j;
  }
  d.norm = 1.0;
  return d;
}

}  // namespace gbs
