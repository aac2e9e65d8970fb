#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spacings/errors.hpp"

namespace spacings {

enum class Experiment {
  gc_curve,
  cov_check,
  rate_slopes,
  oscillation_ratio,
  lil_check,
  constants_audit,
};

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

// k held fixed, or k = ceil(N^delta) with 0 < delta < 1/4.
struct KSchedule {
  enum class Kind { fixed, power };
  Kind kind = Kind::fixed;
  std::int64_t k = 1;
  double delta = 0.2;

  std::int64_t k_for(std::int64_t n) const;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::gc_curve;
  KSchedule k_schedule;
  std::vector<std::int64_t> N_list;
  std::int64_t reps = 1;
  std::uint64_t seed = 0;
  std::string output_path;
  std::map<std::string, double> thresholds;

  void validate() const;  // throws config_error naming the field
};

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;      // l2 norm of the residuals
  double stderr_slope = 0;
  double ci_low = 0;        // 95% interval from the t distribution
  double ci_high = 0;
};

/// Ordinary least squares on (x, y) pairs; needs >= 3 points with distinct x.
SlopeFit slope_fit(std::span<const std::pair<double, double>> points);

// Flat numeric table; integer columns are formatted without a decimal point.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<bool> integer_column;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  ResultTable records;
  nlohmann::json summary;  // aggregates, config echo, thresholds, version
  double wall_seconds = 0; // not serialized; files stay byte-stable
};

// Replications run on a bounded pool with stream id = replication index;
// reduction order is fixed by index, so results are byte-identical across
// thread counts. threads <= 0 means SPACINGS_LAB_THREADS or the hardware
// count.
ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 0);

std::string to_csv_string(const ResultTable& table);
std::string summary_to_string(const nlohmann::json& summary);

// Writes <name>.csv (or .json when format == "json") plus
// <name>_summary.json under out_dir; name defaults to the experiment name.
void write_result(const ExperimentResult& result, const ExperimentConfig& config,
                  const std::string& out_dir, const std::string& format,
                  const std::string& name = "");

int resolve_threads(int requested);

// Policy constants merged under the config overrides; echoed in summaries.
std::map<std::string, double> default_thresholds(Experiment e);

}  // namespace spacings
