#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "doctest.h"
#include "spacings/cli.hpp"
#include "spacings/experiments.hpp"
#include "spacings/rng.hpp"

using namespace spacings;

TEST_CASE("slope_fit: exact line, degenerate input, noisy recovery") {
  {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 6; ++i) pts.emplace_back(double(i), -0.25 * double(i) + 1.0);
    const SlopeFit f = slope_fit(pts);
    CHECK(f.slope == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.residual <= 1e-13);
  }
  {
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(slope_fit(pts), fit_error);
    std::vector<std::pair<double, double>> flat{{1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(slope_fit(flat), fit_error);
  }
  {
    RngStream rng(33, 0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 40; ++i) {
      pts.emplace_back(double(i) * 0.25, 0.7 * double(i) * 0.25 - 2.0 + 0.01 * rng.normal());
    }
    const SlopeFit f = slope_fit(pts);
    CHECK(std::fabs(f.slope - 0.7) <= 0.02);
    CHECK(f.ci_low < 0.7);
    CHECK(f.ci_high > 0.7);
  }
}

TEST_CASE("config validation names the offending field") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::gc_curve;
  cfg.k_schedule = {KSchedule::Kind::fixed, 2, 0.2};
  cfg.N_list = {100, 50};
  cfg.reps = 4;
  CHECK_THROWS_WITH_AS(cfg.validate(), "N_list: must be strictly increasing", config_error);
  cfg.N_list = {};
  CHECK_THROWS_WITH_AS(cfg.validate(), "N_list: must be non-empty", config_error);
  cfg.N_list = {100};
  cfg.reps = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), "reps: must be >= 1", config_error);
  cfg.reps = 2;
  cfg.k_schedule = {KSchedule::Kind::power, 1, 0.3};
  CHECK_THROWS_WITH_AS(cfg.validate(), "k_schedule.delta: must satisfy 0 < delta < 0.25",
                       config_error);
  cfg.k_schedule = {KSchedule::Kind::power, 1, 0.2};
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.k_schedule.k_for(1000) == 4);
  CHECK(cfg.k_schedule.k_for(100000) == 10);
}

TEST_CASE("gc experiment: record shape and thread-count determinism") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::gc_curve;
  cfg.k_schedule = {KSchedule::Kind::fixed, 2, 0.2};
  cfg.N_list = {64, 128};
  cfg.reps = 8;
  cfg.seed = 99;
  const ExperimentResult a = run_experiment(cfg, 1);
  const ExperimentResult b = run_experiment(cfg, 4);
  CHECK(a.records.rows.size() == 16);
  CHECK(to_csv_string(a.records) == to_csv_string(b.records));
  CHECK(summary_to_string(a.summary) == summary_to_string(b.summary));
  const ExperimentResult c = run_experiment(cfg, 1);
  CHECK(to_csv_string(a.records) == to_csv_string(c.records));

  const std::string csv = to_csv_string(a.records);
  CHECK(csv.rfind("# schema=v1\nN,k,rep,gc\n", 0) == 0);
  CHECK(a.summary.contains("config"));
  CHECK(a.summary.contains("thresholds"));
  CHECK(a.summary["config"]["seed"] == 99);
  CHECK(a.summary.contains("version"));
  CHECK_FALSE(a.summary["config"].contains("output_path"));
}

TEST_CASE("constants audit reproduces the constant identities") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::constants_audit;
  cfg.reps = 1;
  cfg.thresholds["k_max"] = 1000;
  const ExperimentResult r = run_experiment(cfg, 2);
  CHECK(r.records.rows.size() == 1000);
  CHECK(double(r.summary["max_eq14_gap"]) <= 1e-9);
  CHECK(r.summary["strictly_increasing_to_limit"] == true);
  CHECK(double(r.summary["k1000_gap"]) < 3e-5);
  // header contract
  const std::string csv = to_csv_string(r.records);
  CHECK(csv.rfind("# schema=v1\nk,K_k,K0,abs_gap\n", 0) == 0);
}

TEST_CASE("lil experiment aggregates") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::lil_check;
  cfg.k_schedule = {KSchedule::Kind::fixed, 1, 0.2};
  cfg.N_list = {2000};
  cfg.reps = 50;
  cfg.seed = 5;
  const ExperimentResult r = run_experiment(cfg, 4);
  CHECK(r.records.rows.size() == 50);
  CHECK(double(r.summary["per_N"][0]["p99_lil"]) < 3.0);
}

TEST_CASE("run_experiment writes files when output_path is set") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::gc_curve;
  cfg.k_schedule = {KSchedule::Kind::fixed, 1, 0.2};
  cfg.N_list = {64};
  cfg.reps = 2;
  cfg.seed = 3;
  cfg.output_path = "exp_out_test";
  const ExperimentResult r = run_experiment(cfg, 1);
  std::ifstream csv("exp_out_test/gc_curve.csv", std::ios::binary);
  REQUIRE(bool(csv));
  std::stringstream buf;
  buf << csv.rdbuf();
  CHECK(buf.str() == to_csv_string(r.records));
  std::ifstream sum("exp_out_test/gc_curve_summary.json");
  CHECK(bool(sum));
  std::filesystem::remove_all("exp_out_test");
}

TEST_CASE("thread resolution prefers the flag, then the environment") {
  CHECK(resolve_threads(3) == 3);
  setenv("SPACINGS_LAB_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  CHECK(resolve_threads(2) == 2);
  unsetenv("SPACINGS_LAB_THREADS");
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("cli: exit codes for missing config and unknown fields") {
  {
    const char* argv[] = {"spacings_lab", "gc", "--config", "does_not_exist.json"};
    CHECK(cli_main(4, argv) == 1);
  }
  {
    const char* argv[] = {"spacings_lab", "definitely-not-a-command"};
    CHECK(cli_main(2, argv) == 1);
  }
}
