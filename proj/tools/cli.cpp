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
#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gbs/circuits.hpp"
#include "gbs/encoding.hpp"
#include "gbs/errors.hpp"
#include "gbs/experiments.hpp"
#include "gbs/hafnian.hpp"
#include "gbs/json_io.hpp"
#include "gbs/search.hpp"
#include "gbs/table.hpp"

namespace gbs::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 1;
  std::string format = "csv";
  bool verbose = false;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c, bool needs_config) {
  auto* opt = app->add_option("--config", c.config, "experiment config (TOML)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "master seed (overrides the config)");
  app->add_option("--out", c.out, "output directory (overrides the config)");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--format", c.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("-v,--verbose", c.verbose, "print stage progress to stderr");
  app->add_flag("-q,--quiet", c.quiet, "no summary on stdout");
}

RunOptions options(const Common& c, const std::string& out) {
  RunOptions o;
  o.threads = c.threads;
  o.format = parse_format(c.format);
  o.out = out;
  if (c.verbose) o.log = [](const std::string& s) { std::cerr << "[gbs] " << s << "\n"; };
  return o;
}

template <class T>
T expect_kind(const ExperimentConfig& cfg, const char* kind) {
  if (!std::holds_alternative<T>(cfg))
    throw ConfigError(std::string("config kind does not match subcommand '") + kind + "'");
  return std::get<T>(cfg);
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

WeightedGraph read_graph(const std::string& path) {
  const fs::path p(path);
  if (p.extension() == ".json") return graph_from_json(read_json(path));
  try {
    return from_edge_list(read_text_file(path));
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

std::string complex_text(Complex z) {
  const double scale = std::max(1.0, std::abs(z));
  if (std::abs(z.imag()) <= 1e-12 * scale) return format_real(z.real());
  return format_real(z.real()) + (z.imag() < 0 ? "-" : "+") + format_real(std::abs(z.imag())) + "i";
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Gaussian boson sampling simulator and dense-subgraph search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  Common repro, sweep;
  auto* c_repro = app.add_subcommand("device-repro", "single-loop device reproduction bundle");
  add_common(c_repro, repro, true);
  auto* c_sweep = app.add_subcommand("loss-sweep", "planted-graph loss and squeezing sweep bundle");
  add_common(c_sweep, sweep, true);

  std::string haf_matrix, haf_algo = "fast";
  auto* c_haf = app.add_subcommand("hafnian", "evaluate the hafnian of a symmetric matrix");
  c_haf->add_option("--matrix", haf_matrix, "JSON matrix: [[..]], {re, im}, kernel or graph")
      ->required()
      ->check(CLI::ExistingFile);
  c_haf->add_option("--algorithm", haf_algo, "fast, pmp or repeated")
      ->check(CLI::IsMember({"fast", "pmp", "repeated"}));

  std::string enc_graph, enc_out;
  double enc_n = 0.0;
  bool enc_per_mode = false;
  auto* c_enc = app.add_subcommand("encode", "graph -> squeezers, interferometer and loop schedule");
  c_enc->add_option("--graph", enc_graph, "graph file (.json or edge list)")->required()->check(CLI::ExistingFile);
  c_enc->add_option("--mean-photons", enc_n, "target mean photon number")->required()->check(CLI::PositiveNumber);
  c_enc->add_flag("--per-mode", enc_per_mode, "interpret --mean-photons per mode instead of total");
  c_enc->add_option("--out", enc_out, "output JSON file (stdout when omitted)");

  std::string s_graph, s_seeds, s_out, s_format = "csv", s_grid = "geometric";
  int s_repeats = 400, s_max = 1000, s_points = 60;
  std::uint64_t s_seed = 0;
  int s_threads = 1;
  auto* c_search = app.add_subcommand("search", "random search from a seed file");
  c_search->add_option("--graph", s_graph, "graph file (.json or edge list)")->required()->check(CLI::ExistingFile);
  c_search->add_option("--seeds", s_seeds, "newline-delimited 1-based patterns i-j-k")
      ->required()
      ->check(CLI::ExistingFile);
  c_search->add_option("--repeats", s_repeats, "search repetitions")->check(CLI::PositiveNumber);
  c_search->add_option("--max-budget", s_max, "largest sample budget")->check(CLI::PositiveNumber);
  c_search->add_option("--grid", s_grid, "budget grid")->check(CLI::IsMember({"geometric", "dense"}));
  c_search->add_option("--grid-points", s_points, "points of the geometric grid")->check(CLI::Range(2, 100000));
  c_search->add_option("--seed", s_seed, "search seed");
  c_search->add_option("--threads", s_threads, "worker threads")->check(CLI::PositiveNumber);
  c_search->add_option("--format", s_format, "output format")->check(CLI::IsMember({"csv", "json"}));
  c_search->add_option("--out", s_out, "output file (stdout when omitted)");

  Common fit;
  std::string f_samples;
  double f_lo = 0.05, f_hi = 0.6;
  auto* c_fit = app.add_subcommand("fit-squeezing", "fit the source lambda to recorded N-fold detections");
  add_common(c_fit, fit, true);
  c_fit->add_option("--samples", f_samples, "newline-delimited 1-based patterns")->required()->check(CLI::ExistingFile);
  c_fit->add_option("--lo", f_lo, "lower lambda bound");
  c_fit->add_option("--hi", f_hi, "upper lambda bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_repro) {
      auto cfg = expect_kind<DeviceReproConfig>(load_config(repro.config), "device-repro");
      if (repro.seed) cfg.seed = *repro.seed;
      const std::string out = repro.out.empty() ? cfg.output : repro.out;
      const auto res = run_device_reproduction(cfg, options(repro, out));
      if (!repro.quiet) {
        for (const auto& row : res.table)
          std::printf("k=%d %-12s samples@%.0f%%=%s density@%d=%.4f\n", row.k, row.source.c_str(),
                      100 * cfg.fraction,
                      row.at_fraction.samples ? std::to_string(*row.at_fraction.samples).c_str()
                                              : (">" + std::to_string(row.at_fraction.max_budget)).c_str(),
                      cfg.density_budget, row.density.value);
        std::printf("bundle: %s\n", out.c_str());
      }
    } else if (*c_sweep) {
      auto cfg = expect_kind<LossSweepConfig>(load_config(sweep.config), "loss-sweep");
      if (sweep.seed) cfg.seed = *sweep.seed;
      const std::string out = sweep.out.empty() ? cfg.output : sweep.out;
      const auto res = run_loss_sweep(cfg, options(sweep, out));
      if (!sweep.quiet)
        std::printf("%zu grid points over %d graphs\nbundle: %s\n", res.points.size(), cfg.graph_count, out.c_str());
    } else if (*c_haf) {
      const CMatrix m = matrix_from_json(read_json(haf_matrix));
      Complex h;
      if (haf_algo == "pmp") {
        h = hafnian_pmp(m);
      } else if (haf_algo == "repeated") {
        std::vector<int> ones(static_cast<std::size_t>(m.rows()), 1);
        h = hafnian_repeated(m, ones);
      } else {
        h = hafnian_fast(m);
      }
      std::printf("%s\n", complex_text(h).c_str());
    } else if (*c_enc) {
      const auto g = read_graph(enc_graph);
      const CMatrix b = g.adjacency().cast<Complex>();
      const double total = enc_per_mode ? enc_n * g.node_count() : enc_n;
      const auto dev = encode_graph(b, total);
      Json j = encoding_to_json(dev);
      j["schedule"] = schedule_to_json(compile_reck(dev.takagi.u));
      emit(enc_out, dump_json(j));
    } else if (*c_search) {
      const auto g = read_graph(s_graph);
      std::vector<NodeSubset> pool;
      try {
        pool = parse_seed_file(read_text_file(s_seeds), g.node_count());
      } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
      }
      const auto stream = SeedStream::from_pool(std::move(pool), "file");
      SearchConfig sc;
      sc.k = stream.subset_size();
      sc.repeats = s_repeats;
      sc.rng_seed = s_seed;
      sc.budgets = s_grid == "dense" ? dense_budget_grid(s_max) : geometric_budget_grid(s_max, s_points);
      const auto curve = random_search(g, stream, sc, s_threads);
      const auto d = densest_subgraph_bruteforce(g, sc.k, s_threads);
      if (s_format == "json") {
        Json j = curve_to_json(curve);
        j["d_max"] = d.density;
        j["seed_pool_resampling"] = "with replacement";
        emit(s_out, dump_json(j));
      } else {
        emit(s_out, "# d_max=" + format_real(d.density) + "\n" + search_curve_csv(curve));
      }
    } else if (*c_fit) {
      auto cfg = expect_kind<DeviceReproConfig>(load_config(fit.config), "fit-squeezing");
      std::vector<ModeList> samples;
      std::string text;
      try {
        text = read_text_file(f_samples);
      } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
      }
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        samples.push_back(parse_pattern(line));
      }
      auto observed = empirical_distribution(samples, cfg.device.bins);
      observed.collision_free = false;
      const int n = observed.n_photons;
      const auto res = fit_squeezing(observed, [&](double l) {
        return enumerate_distribution(device_state(cfg, l), n, false, std::nullopt, fit.threads);
      }, f_lo, f_hi);
      std::printf("lambda=%.6f tvd=%.6f evaluations=%d\n", res.lambda, res.tvd, res.evaluations);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gbs::cli
