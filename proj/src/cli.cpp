#include "spacings/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spacings/experiments.hpp"
#include "spacings/spacings.hpp"
#include "spacings/version.hpp"

namespace spacings {
namespace {

using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> reps;
  std::string out_dir;  // falls back to config output_path, then "."
  int threads = 0;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--seed", opts.seed, "RNG seed");
  cmd->add_option("--reps", opts.reps, "replications");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = auto)");
  cmd->add_option("--format", opts.format, "records format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("config: parse failure in '" + path + "': " + e.what());
  }
  return j;
}

KSchedule parse_k_schedule(const json& j) {
  if (!j.is_object()) throw config_error("k_schedule: must be an object");
  KSchedule ks;
  const std::string type = j.value("type", std::string("fixed"));
  if (type == "fixed") {
    ks.kind = KSchedule::Kind::fixed;
    if (!j.contains("k")) throw config_error("k_schedule.k: required for type fixed");
    if (!j.at("k").is_number_integer()) throw config_error("k_schedule.k: must be an integer");
    ks.k = j.at("k").get<std::int64_t>();
  } else if (type == "power") {
    ks.kind = KSchedule::Kind::power;
    if (!j.contains("delta")) throw config_error("k_schedule.delta: required for type power");
    if (!j.at("delta").is_number()) throw config_error("k_schedule.delta: must be a number");
    ks.delta = j.at("delta").get<double>();
  } else {
    throw config_error("k_schedule.type: must be 'fixed' or 'power'");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "type" && key != "k" && key != "delta") {
      throw config_error("k_schedule." + key + ": unknown field");
    }
  }
  return ks;
}

ExperimentConfig parse_config(const json& j, Experiment fallback) {
  ExperimentConfig cfg;
  cfg.experiment = fallback;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      if (!value.is_string()) throw config_error("experiment: must be a string");
      cfg.experiment = experiment_from_name(value.get<std::string>());
    } else if (key == "k_schedule") {
      cfg.k_schedule = parse_k_schedule(value);
    } else if (key == "N_list") {
      if (!value.is_array()) throw config_error("N_list: must be an array");
      for (const auto& n : value) {
        if (!n.is_number_integer()) throw config_error("N_list: entries must be integers");
        cfg.N_list.push_back(n.get<std::int64_t>());
      }
    } else if (key == "reps") {
      if (!value.is_number_integer()) throw config_error("reps: must be an integer");
      cfg.reps = value.get<std::int64_t>();
    } else if (key == "seed") {
      if (!value.is_number()) throw config_error("seed: must be a number");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "output_path") {
      if (!value.is_string()) throw config_error("output_path: must be a string");
      cfg.output_path = value.get<std::string>();
    } else if (key == "thresholds") {
      if (!value.is_object()) throw config_error("thresholds: must be an object");
      for (const auto& [tk, tv] : value.items()) {
        if (!tv.is_number()) throw config_error("thresholds." + tk + ": must be a number");
        cfg.thresholds[tk] = tv.get<double>();
      }
    } else {
      throw config_error(key + ": unknown config field");
    }
  }
  return cfg;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.seed = 1;
  switch (e) {
    case Experiment::gc_curve:
      cfg.k_schedule = {KSchedule::Kind::fixed, 2, 0.2};
      cfg.N_list = {1000, 10000};
      cfg.reps = 20;
      break;
    case Experiment::cov_check:
      cfg.k_schedule = {KSchedule::Kind::fixed, 1, 0.2};
      cfg.N_list = {500};
      cfg.reps = 20000;
      break;
    case Experiment::rate_slopes:
      cfg.k_schedule = {KSchedule::Kind::fixed, 1, 0.2};
      cfg.N_list = {1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14};
      cfg.reps = 50;
      break;
    case Experiment::oscillation_ratio:
      cfg.k_schedule = {KSchedule::Kind::fixed, 1, 0.2};
      cfg.N_list = {10000, 100000};
      cfg.reps = 50;
      break;
    case Experiment::lil_check:
      cfg.k_schedule = {KSchedule::Kind::fixed, 1, 0.2};
      cfg.N_list = {100000};
      cfg.reps = 200;
      break;
    case Experiment::constants_audit:
      cfg.k_schedule = {KSchedule::Kind::fixed, 1, 0.2};
      cfg.N_list = {};
      cfg.reps = 1;
      break;
  }
  return cfg;
}

int run_subcommand(const std::string& name, Experiment e, const CommonOpts& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = parse_config(load_json_file(opts.config_path), e);
    if (cfg.experiment != e) {
      throw config_error("experiment: config file names a different experiment");
    }
    if (cfg.N_list.empty() && e != Experiment::constants_audit) {
      cfg.N_list = default_config(e).N_list;
    }
  } else {
    cfg = default_config(e);
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.reps) cfg.reps = *opts.reps;
  const std::string out_dir = !opts.out_dir.empty() ? opts.out_dir
                              : !cfg.output_path.empty() ? cfg.output_path
                                                         : std::string(".");
  const ExperimentResult result = run_experiment(cfg, opts.threads);
  write_result(result, cfg, out_dir, opts.format, name);
  std::cerr << name << ": " << result.records.rows.size() << " records in "
            << result.wall_seconds << " s -> " << out_dir << "\n";
  return 0;
}

struct SimulateOpts {
  std::int64_t n_spacings = 8;
  std::int64_t k = 1;
  std::uint64_t seed = 1;
  std::uint64_t rep = 0;
  std::string representation = "exp";
  std::string out_dir = ".";
  std::string format = "csv";
};

int run_simulate(const SimulateOpts& o) {
  const GammaOrder order(o.k);
  RngStream rng(o.seed, o.rep);
  SpacingsSample s{order};
  if (o.representation == "exp") {
    s = sample_exponential_spacings(rng, o.n_spacings, order);
  } else if (o.representation == "uniform") {
    s = sample_uniform_spacings(rng, o.n_spacings * o.k - 1, order);
  } else {
    throw config_error("representation: must be 'exp' or 'uniform'");
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  const fs::path rec_path = fs::path(o.out_dir) / ("sample." + o.format);
  std::ofstream rec(rec_path, std::ios::binary);
  if (!rec) throw std::runtime_error("cannot write " + rec_path.string());
  ResultTable table;
  if (s.has_blocks()) {
    // rows are in block order; y/mu is the unsorted counterpart of `scaled`
    table = {{"i", "y", "scaled"}, {true, false, false}, {}};
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      table.rows.push_back({double(i), s.y[i], s.y[i] / *s.mu});
    }
  } else {
    table = {{"i", "scaled"}, {true, false}, {}};
    for (std::size_t i = 0; i < s.scaled.size(); ++i) {
      table.rows.push_back({double(i), s.scaled[i]});
    }
  }
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& row : table.rows) {
      json obj;
      for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
      rows.push_back(obj);
    }
    rec << rows.dump(2) << "\n";
  } else {
    rec << to_csv_string(table);
  }

  json meta;
  meta["schema"] = "v1";
  meta["version"] = kVersion;
  meta["k"] = o.k;
  meta["N"] = s.count;
  meta["n"] = s.order;
  meta["seed"] = o.seed;
  meta["stream"] = o.rep;
  meta["representation"] = o.representation;
  if (s.s_total) meta["s_total"] = *s.s_total;
  if (s.mu) meta["mu"] = *s.mu;
  const fs::path meta_path = fs::path(o.out_dir) / "sample_summary.json";
  std::ofstream sum(meta_path, std::ios::binary);
  if (!sum) throw std::runtime_error("cannot write " + meta_path.string());
  sum << summary_to_string(meta);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"k-spacings process simulation and verification toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    Experiment experiment;
  };
  static constexpr Sub kSubs[] = {
      {"gc", "uniform-convergence curve of sup|F_N - H_k|", Experiment::gc_curve},
      {"covcheck", "Monte Carlo covariance against the analytic kernel", Experiment::cov_check},
      {"rates", "remainder and coupling rate slopes", Experiment::rate_slopes},
      {"oscillation", "oscillation-modulus ratios kappa/q_N", Experiment::oscillation_ratio},
      {"lil", "normalized |mu - 1| statistics", Experiment::lil_check},
      {"constants", "K(k) audit against its limit", Experiment::constants_audit},
  };

  struct Run {
    std::string name;
    Experiment experiment;
    CommonOpts opts;
  };
  std::vector<Run> runs;
  runs.reserve(std::size(kSubs));
  std::vector<CLI::App*> cmds;
  for (const auto& sub : kSubs) {
    runs.push_back({sub.name, sub.experiment, CommonOpts{}});
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    add_common(cmd, runs.back().opts);
    cmds.push_back(cmd);
  }

  SimulateOpts sim;
  CLI::App* simulate = app.add_subcommand("simulate", "dump one spacings sample");
  simulate->add_option("--N", sim.n_spacings, "number of spacings");
  simulate->add_option("--k", sim.k, "spacings step");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--rep", sim.rep, "stream id");
  simulate->add_option("--representation", sim.representation, "exp or uniform")
      ->check(CLI::IsMember({"exp", "uniform"}));
  simulate->add_option("--out", sim.out_dir, "output directory");
  simulate->add_option("--format", sim.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (cmds[i]->parsed()) {
        return run_subcommand(runs[i].name, runs[i].experiment, runs[i].opts);
      }
    }
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace spacings
