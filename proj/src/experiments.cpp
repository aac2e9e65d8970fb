#include "spacings/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "spacings/coupling.hpp"
#include "spacings/gaussian.hpp"
#include "spacings/oscillation.hpp"
#include "spacings/spacings.hpp"
#include "spacings/version.hpp"

namespace spacings {
namespace {

using nlohmann::json;

std::uint64_t stream_id(std::uint64_t phase, std::uint64_t rep) {
  return (phase << 32) | rep;
}

void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = int(std::min<std::int64_t>(threads, count));
  pool.reserve(std::size_t(n));
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Nearest-rank quantile on a copy.
double quantile_of(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const std::size_t idx =
      std::size_t(std::min<double>(double(v.size()) - 1.0,
                                   std::max(0.0, std::ceil(q * double(v.size())) - 1.0)));
  return v[idx];
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / double(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size() - 1) / double(v.size()));
}

std::string format_value(double v, bool integer) {
  char buf[64];
  if (integer) {
    const long long i = std::llround(v);
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), i);
    return std::string(buf, p);
  }
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

json config_echo(const ExperimentConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["seed"] = c.seed;
  j["reps"] = c.reps;
  j["N_list"] = c.N_list;
  if (c.k_schedule.kind == KSchedule::Kind::fixed) {
    j["k_schedule"] = {{"type", "fixed"}, {"k", c.k_schedule.k}};
  } else {
    j["k_schedule"] = {{"type", "power"}, {"delta", c.k_schedule.delta}};
  }
  // output_path deliberately omitted so summaries stay byte-stable across runs
  return j;
}

std::map<std::string, double> merged_thresholds(const ExperimentConfig& c) {
  auto t = default_thresholds(c.experiment);
  for (const auto& [k, v] : c.thresholds) t[k] = v;
  return t;
}

json base_summary(const ExperimentConfig& c, const std::map<std::string, double>& thr) {
  json j;
  j["schema"] = "v1";
  j["version"] = kVersion;
  j["config"] = config_echo(c);
  j["thresholds"] = thr;
  return j;
}

int ceil_log2(std::int64_t n) {
  int l = 0;
  while ((std::int64_t(1) << l) < n) ++l;
  return l;
}

// Sample covariance with mean subtraction, fixed summation order.
double sample_cov(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a), mb = mean_of(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / double(a.size() - 1);
}

template <class F>
double golden_max(F&& f, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 300 && (b - a) > 1e-12 * (1.0 + std::fabs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

// ---------------------------------------------------------------- gc_curve

ExperimentResult run_gc(const ExperimentConfig& cfg, int threads) {
  ExperimentResult out;
  out.records = {{"N", "k", "rep", "gc"}, {true, true, true, false}, {}};
  const auto thr = merged_thresholds(cfg);
  json per_n = json::array();
  double prev_median = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (std::int64_t n : cfg.N_list) {
    const std::int64_t k = cfg.k_schedule.k_for(n);
    std::vector<double> stats(static_cast<std::size_t>(cfg.reps));
    parallel_for(cfg.reps, threads, [&](std::int64_t r) {
      RngStream rng(cfg.seed, stream_id(0, std::uint64_t(r)));
      const auto s = sample_uniform_spacings(rng, n * k - 1, GammaOrder(k));
      stats[std::size_t(r)] = gc_statistic(s);
    });
    for (std::int64_t r = 0; r < cfg.reps; ++r) {
      out.records.rows.push_back({double(n), double(k), double(r), stats[std::size_t(r)]});
    }
    const double med = median_of(stats);
    decreasing = decreasing && med < prev_median;
    prev_median = med;
    per_n.push_back({{"N", n},
                     {"k", k},
                     {"median", med},
                     {"mean", mean_of(stats)},
                     {"q10", quantile_of(stats, 0.10)},
                     {"q90", quantile_of(stats, 0.90)},
                     {"stderr", stderr_of(stats)}});
  }
  out.summary = base_summary(cfg, thr);
  out.summary["per_N"] = per_n;
  out.summary["decreasing_median"] = decreasing;
  return out;
}

// ---------------------------------------------------------------- cov_check

ExperimentResult run_cov(const ExperimentConfig& cfg, int threads) {
  ExperimentResult out;
  out.records = {{"phase", "k", "x", "y", "mc_cov", "analytic", "stderr", "draws"},
                 {true, true, false, false, false, false, false, true}, {}};
  const auto thr = merged_thresholds(cfg);
  const std::int64_t beta_n = cfg.N_list.front();
  const std::int64_t k = cfg.k_schedule.k_for(beta_n);
  const GammaOrder order(k);
  const std::array<double, 3> probes{0.5 * double(k), double(k), 2.0 * double(k)};

  auto emit_phase = [&](int phase, const std::vector<std::array<double, 3>>& draws,
                        double& max_gap, bool& within, double tol_floor) {
    std::array<std::vector<double>, 3> cols;
    for (int i = 0; i < 3; ++i) {
      cols[std::size_t(i)].resize(draws.size());
      for (std::size_t d = 0; d < draws.size(); ++d) {
        cols[std::size_t(i)][d] = draws[d][std::size_t(i)];
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const double mc = sample_cov(cols[std::size_t(i)], cols[std::size_t(j)]);
        const double cxx = shorack_covariance(order, probes[std::size_t(i)], probes[std::size_t(i)]);
        const double cyy = shorack_covariance(order, probes[std::size_t(j)], probes[std::size_t(j)]);
        const double an = shorack_covariance(order, probes[std::size_t(i)], probes[std::size_t(j)]);
        const double se = std::sqrt((cxx * cyy + an * an) / double(draws.size()));
        const double gap = std::fabs(mc - an);
        max_gap = std::max(max_gap, gap);
        within = within && gap <= std::max(tol_floor, 3.0 * se);
        out.records.rows.push_back({double(phase), double(k), probes[std::size_t(i)],
                                    probes[std::size_t(j)], mc, an, se, double(draws.size())});
      }
    }
  };

  // Phase 0: constructed Gaussian paths.
  const auto grid = ShorackGrid::balanced(order, std::size_t(thr.at("grid_points")));
  const std::int64_t path_draws = cfg.reps;
  std::vector<std::array<double, 3>> wvals(static_cast<std::size_t>(path_draws));
  parallel_for(path_draws, threads, [&](std::int64_t d) {
    RngStream rng(cfg.seed, stream_id(0, std::uint64_t(d)));
    const auto bridge = sample_brownian_bridge(rng, grid.s);
    const auto path = shorack_from_bridge(bridge, grid, probes);
    for (int i = 0; i < 3; ++i) wvals[std::size_t(d)][std::size_t(i)] = path.values[std::size_t(i)];
  });
  double path_gap = 0.0;
  bool path_within = true;
  emit_phase(0, wvals, path_gap, path_within, thr.at("tol_floor_paths"));

  // Phase 1: the spacings process itself.
  const std::int64_t beta_reps = std::int64_t(thr.at("beta_reps"));
  std::vector<std::array<double, 3>> bvals(static_cast<std::size_t>(beta_reps));
  parallel_for(beta_reps, threads, [&](std::int64_t r) {
    RngStream rng(cfg.seed, stream_id(1, std::uint64_t(r)));
    const auto s = sample_uniform_spacings(rng, beta_n * k - 1, order);
    const auto beta = beta_process(s);
    for (int i = 0; i < 3; ++i) {
      bvals[std::size_t(r)][std::size_t(i)] = beta.value(probes[std::size_t(i)]);
    }
  });
  double beta_gap = 0.0;
  bool beta_within = true;
  emit_phase(1, bvals, beta_gap, beta_within, thr.at("tol_floor_beta"));

  out.summary = base_summary(cfg, thr);
  out.summary["paths"] = {{"max_abs_gap", path_gap}, {"within", path_within},
                          {"draws", path_draws}};
  out.summary["beta"] = {{"max_abs_gap", beta_gap}, {"within", beta_within},
                         {"N", beta_n}, {"reps", beta_reps}};
  return out;
}

// -------------------------------------------------------------- rate_slopes

ExperimentResult run_rates(const ExperimentConfig& cfg, int threads) {
  ExperimentResult out;
  out.records = {{"N", "k", "rep", "sup_r2", "coupling_distance"},
                 {true, true, true, false, false}, {}};
  const auto thr = merged_thresholds(cfg);
  json per_n = json::array();
  std::vector<std::pair<double, double>> r2_pts, cd_pts;
  double top_ratio = 0.0;
  std::int64_t top_k = 1;
  for (std::int64_t n : cfg.N_list) {
    const std::int64_t k = cfg.k_schedule.k_for(n);
    const GammaOrder order(k);
    const int depth = ceil_log2(n);
    std::vector<double> r2(static_cast<std::size_t>(cfg.reps)), cd(static_cast<std::size_t>(cfg.reps));
    parallel_for(cfg.reps, threads, [&](std::int64_t r) {
      RngStream srng(cfg.seed, stream_id(0, std::uint64_t(r)));
      const auto s = sample_exponential_spacings(srng, n, order);
      r2[std::size_t(r)] = remainder_decomposition(s).sup_r2;
      RngStream crng(cfg.seed, stream_id(1, std::uint64_t(r)));
      cd[std::size_t(r)] = coupling_distance(dyadic_coupling(crng, n, depth));
    });
    for (std::int64_t r = 0; r < cfg.reps; ++r) {
      out.records.rows.push_back(
          {double(n), double(k), double(r), r2[std::size_t(r)], cd[std::size_t(r)]});
    }
    const double med_r2 = median_of(r2);
    const double med_cd = median_of(cd);
    const double a_n = rate_values(n, 0.5).a;
    per_n.push_back({{"N", n},
                     {"k", k},
                     {"a_N", a_n},
                     {"median_sup_r2", med_r2},
                     {"median_coupling", med_cd},
                     {"median_r2_over_aN", med_r2 / a_n}});
    r2_pts.emplace_back(std::log(double(n)), std::log(med_r2));
    cd_pts.emplace_back(std::log(double(n)), std::log(med_cd));
    top_ratio = med_r2 / a_n;
    top_k = k;
  }
  out.summary = base_summary(cfg, thr);
  out.summary["per_N"] = per_n;
  auto fit_json = [](const SlopeFit& f) {
    return json{{"slope", f.slope},     {"intercept", f.intercept},
                {"residual", f.residual}, {"stderr", f.stderr_slope},
                {"ci_low", f.ci_low},   {"ci_high", f.ci_high}};
  };
  if (cfg.N_list.size() >= 3) {
    const SlopeFit fr2 = slope_fit(r2_pts);
    const SlopeFit fcd = slope_fit(cd_pts);
    out.summary["fit_sup_r2"] = fit_json(fr2);
    out.summary["fit_coupling"] = fit_json(fcd);
    out.summary["ci_disjoint"] =
        fr2.ci_low > fcd.ci_high || fcd.ci_low > fr2.ci_high;
  }
  out.summary["top_median_r2_over_aN"] = top_ratio;
  out.summary["K_k"] = shorack_constant(GammaOrder(top_k));
  return out;
}

// -------------------------------------------------------- oscillation_ratio

ExperimentResult run_osc(const ExperimentConfig& cfg, int threads) {
  ExperimentResult out;
  out.records = {{"N", "k", "rep", "d_stute", "kappa_stute", "ratio_stute", "d_mws",
                  "kappa_mws", "ratio_mws"},
                 {true, true, true, false, false, false, false, false, false}, {}};
  const auto thr = merged_thresholds(cfg);
  json per_n = json::array();
  for (std::int64_t n : cfg.N_list) {
    const std::int64_t k = cfg.k_schedule.k_for(n);
    const GammaOrder order(k);
    const double d1 = std::pow(double(n), -thr.at("d_exponent"));
    const double q1 = rate_values(n, d1).q;
    const MwsWindow mws = mws_window(n, thr.at("mws_alpha"), thr.at("mws_c"));
    const double q2 = rate_values(n, mws.d).q;
    std::vector<double> ratio1(static_cast<std::size_t>(cfg.reps)), ratio2(static_cast<std::size_t>(cfg.reps));
    parallel_for(cfg.reps, threads, [&](std::int64_t r) {
      RngStream rng(cfg.seed, stream_id(0, std::uint64_t(r)));
      const auto s = sample_uniform_spacings(rng, n * k - 1, order);
      const auto reduced = reduced_process(s);
      ratio1[std::size_t(r)] = kappa(reduced, d1).value / q1;
      ratio2[std::size_t(r)] = kappa(reduced, mws.d).value / q2;
    });
    for (std::int64_t r = 0; r < cfg.reps; ++r) {
      out.records.rows.push_back({double(n), double(k), double(r), d1,
                                  ratio1[std::size_t(r)] * q1, ratio1[std::size_t(r)],
                                  mws.d, ratio2[std::size_t(r)] * q2,
                                  ratio2[std::size_t(r)]});
    }
    const StuteFlags flags = stute_conditions_check(n, d1, order);
    per_n.push_back({{"N", n},
                     {"k", k},
                     {"d_stute", d1},
                     {"q_stute", q1},
                     {"median_ratio_stute", median_of(ratio1)},
                     {"d_mws", mws.d},
                     {"q_mws", q2},
                     {"p90_ratio_mws", quantile_of(ratio2, 0.90)},
                     {"mws_bound", mws.bound},
                     {"conditions",
                      {{"s1", flags.s1},
                       {"s2", flags.s2},
                       {"s3", flags.s3},
                       {"s4", flags.s4},
                       {"s5", flags.s5},
                       {"nd", flags.nd},
                       {"ratio_s2", flags.ratio_s2},
                       {"ratio_s3", flags.ratio_s3},
                       {"ratio_s4", flags.ratio_s4},
                       {"s5_bound", flags.s5_bound}}}});
  }
  out.summary = base_summary(cfg, thr);
  out.summary["per_N"] = per_n;
  return out;
}

// ----------------------------------------------------------------- lil_check

ExperimentResult run_lil(const ExperimentConfig& cfg, int threads) {
  ExperimentResult out;
  out.records = {{"N", "k", "rep", "mu", "lil"}, {true, true, true, false, false}, {}};
  const auto thr = merged_thresholds(cfg);
  const double mu_dev = thr.at("mu_dev");
  json per_n = json::array();
  for (std::int64_t n : cfg.N_list) {
    const std::int64_t k = cfg.k_schedule.k_for(n);
    const GammaOrder order(k);
    std::vector<double> lil(static_cast<std::size_t>(cfg.reps)), mus(static_cast<std::size_t>(cfg.reps));
    parallel_for(cfg.reps, threads, [&](std::int64_t r) {
      RngStream rng(cfg.seed, stream_id(0, std::uint64_t(r)));
      const auto s = sample_exponential_spacings(rng, n, order);
      lil[std::size_t(r)] = lil_statistic(s);
      mus[std::size_t(r)] = *s.mu;
    });
    std::int64_t exceed = 0;
    double max_dev = 0.0;
    for (std::int64_t r = 0; r < cfg.reps; ++r) {
      const double dev = std::fabs(mus[std::size_t(r)] - 1.0);
      max_dev = std::max(max_dev, dev);
      if (dev > mu_dev) ++exceed;
      out.records.rows.push_back(
          {double(n), double(k), double(r), mus[std::size_t(r)], lil[std::size_t(r)]});
    }
    per_n.push_back({{"N", n},
                     {"k", k},
                     {"p99_lil", quantile_of(lil, 0.99)},
                     {"max_abs_mu_dev", max_dev},
                     {"n_exceed_mu_dev", exceed}});
  }
  out.summary = base_summary(cfg, thr);
  out.summary["per_N"] = per_n;
  return out;
}

// ------------------------------------------------------------ constants_audit

ExperimentResult run_constants(const ExperimentConfig& cfg, int threads) {
  (void)threads;
  ExperimentResult out;
  out.records = {{"k", "K_k", "K0", "abs_gap"}, {true, false, false, false}, {}};
  const auto thr = merged_thresholds(cfg);
  const std::int64_t k_max = std::int64_t(thr.at("k_max"));
  const double k0 = shorack_limit();
  bool increasing = true;
  double prev = 0.0;
  double max_eq14_gap = 0.0;
  double k1000_gap = -1.0;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const GammaOrder order(k);
    const double kk = shorack_constant(order);
    out.records.rows.push_back({double(k), kk, k0, std::fabs(kk - k0)});
    increasing = increasing && kk > prev && kk < k0;
    prev = kk;
    if (k <= 200) {
      const double kd = double(k);
      auto f = [&](double x) { return psi(order, x) / std::sqrt(kd); };
      const double lo = std::max(1e-9, kd - 4.0 * std::sqrt(kd) - 4.0);
      const double hi = kd + 4.0 * std::sqrt(kd) + 4.0;
      const double sup = golden_max(f, lo, hi);
      max_eq14_gap = std::max(max_eq14_gap, std::fabs(kk * kk - sup));
    }
    if (k == 1000) k1000_gap = std::fabs(kk - k0);
  }
  out.summary = base_summary(cfg, thr);
  out.summary["max_eq14_gap"] = max_eq14_gap;
  out.summary["strictly_increasing_to_limit"] = increasing;
  if (k1000_gap >= 0.0) out.summary["k1000_gap"] = k1000_gap;
  return out;
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::gc_curve: return "gc_curve";
    case Experiment::cov_check: return "cov_check";
    case Experiment::rate_slopes: return "rate_slopes";
    case Experiment::oscillation_ratio: return "oscillation_ratio";
    case Experiment::lil_check: return "lil_check";
    case Experiment::constants_audit: return "constants_audit";
  }
  throw config_error("experiment: unknown enum value");
}

Experiment experiment_from_name(const std::string& name) {
  if (name == "gc_curve") return Experiment::gc_curve;
  if (name == "cov_check") return Experiment::cov_check;
  if (name == "rate_slopes") return Experiment::rate_slopes;
  if (name == "oscillation_ratio") return Experiment::oscillation_ratio;
  if (name == "lil_check") return Experiment::lil_check;
  if (name == "constants_audit") return Experiment::constants_audit;
  throw config_error("experiment: unknown name '" + name + "'");
}

std::int64_t KSchedule::k_for(std::int64_t n) const {
  if (kind == Kind::fixed) return k;
  // small slack so integer powers are not pushed up by rounding noise
  const double raw = std::ceil(std::pow(double(n), delta) - 1e-9);
  return std::max<std::int64_t>(1, std::min<std::int64_t>(std::int64_t(raw), 1'000'000));
}

void ExperimentConfig::validate() const {
  if (experiment != Experiment::constants_audit) {
    if (N_list.empty()) throw config_error("N_list: must be non-empty");
    for (std::size_t i = 0; i < N_list.size(); ++i) {
      if (N_list[i] < 1) throw config_error("N_list: entries must be positive");
      if (i > 0 && N_list[i] <= N_list[i - 1]) {
        throw config_error("N_list: must be strictly increasing");
      }
    }
  }
  if (reps < 1) throw config_error("reps: must be >= 1");
  if (k_schedule.kind == KSchedule::Kind::fixed) {
    if (k_schedule.k < 1 || k_schedule.k > 1'000'000) {
      throw config_error("k_schedule.k: must be in [1, 1e6]");
    }
  } else {
    if (!(k_schedule.delta > 0.0 && k_schedule.delta < 0.25)) {
      throw config_error("k_schedule.delta: must satisfy 0 < delta < 0.25");
    }
  }
  for (const auto& [key, value] : thresholds) {
    if (!std::isfinite(value)) throw config_error("thresholds." + key + ": must be finite");
  }
}

SlopeFit slope_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw fit_error("slope_fit needs at least 3 points");
  const double n = double(points.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0) throw fit_error("slope_fit needs distinct abscissae");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (const auto& [x, y] : points) {
    const double r = y - (f.intercept + f.slope * x);
    ss += r * r;
  }
  f.residual = std::sqrt(ss);
  const int df = int(points.size()) - 2;
  f.stderr_slope = df > 0 ? std::sqrt(ss / double(df) / sxx) : 0.0;
  static constexpr double kT975[30] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                       2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                       2.131,  2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
                                       2.074,  2.069, 2.064, 2.060, 2.056, 2.052, 2.048,
                                       2.045,  2.042};
  const double t = df >= 1 && df <= 30 ? kT975[df - 1] : 1.96;
  f.ci_low = f.slope - t * f.stderr_slope;
  f.ci_high = f.slope + t * f.stderr_slope;
  return f;
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  const int t = resolve_threads(threads);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult out;
  switch (config.experiment) {
    case Experiment::gc_curve: out = run_gc(config, t); break;
    case Experiment::cov_check: out = run_cov(config, t); break;
    case Experiment::rate_slopes: out = run_rates(config, t); break;
    case Experiment::oscillation_ratio: out = run_osc(config, t); break;
    case Experiment::lil_check: out = run_lil(config, t); break;
    case Experiment::constants_audit: out = run_constants(config, t); break;
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.output_path.empty()) {
    write_result(out, config, config.output_path, "csv");
  }
  return out;
}

std::string to_csv_string(const ResultTable& table) {
  std::string s = "# schema=v1\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) s += ',';
    s += table.columns[c];
  }
  s += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      s += format_value(row[c], table.integer_column[c]);
    }
    s += '\n';
  }
  return s;
}

std::string summary_to_string(const nlohmann::json& summary) {
  return summary.dump(2) + "\n";
}

void write_result(const ExperimentResult& result, const ExperimentConfig& config,
                  const std::string& out_dir, const std::string& format,
                  const std::string& name_arg) {
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string name = name_arg.empty() ? experiment_name(config.experiment) : name_arg;

  const fs::path records_path = dir / (name + (format == "json" ? ".json" : ".csv"));
  std::ofstream rec(records_path, std::ios::binary);
  if (!rec) throw std::runtime_error("cannot write " + records_path.string());
  if (format == "json") {
    json rows = json::array();
    for (const auto& row : result.records.rows) {
      json obj;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (result.records.integer_column[c]) {
          obj[result.records.columns[c]] = std::llround(row[c]);
        } else {
          obj[result.records.columns[c]] = row[c];
        }
      }
      rows.push_back(obj);
    }
    rec << rows.dump(2) << "\n";
  } else {
    rec << to_csv_string(result.records);
  }
  rec.close();
  if (!rec) throw std::runtime_error("failed writing " + records_path.string());

  const fs::path summary_path = dir / (name + "_summary.json");
  std::ofstream sum(summary_path, std::ios::binary);
  if (!sum) throw std::runtime_error("cannot write " + summary_path.string());
  sum << summary_to_string(result.summary);
  sum.close();
  if (!sum) throw std::runtime_error("failed writing " + summary_path.string());
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPACINGS_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

std::map<std::string, double> default_thresholds(Experiment e) {
  std::map<std::string, double> t;
  switch (e) {
    case Experiment::cov_check:
      t["grid_points"] = 4096;
      t["beta_reps"] = 5000;
      t["tol_floor_paths"] = 0.02;
      t["tol_floor_beta"] = 0.03;
      break;
    case Experiment::oscillation_ratio:
      t["d_exponent"] = 0.5;
      t["mws_alpha"] = 1.0;
      t["mws_c"] = 1.0;
      break;
    case Experiment::lil_check:
      t["mu_dev"] = 0.01;
      break;
    case Experiment::constants_audit:
      t["k_max"] = 1000;
      break;
    default:
      break;
  }
  return t;
}

}  // namespace spacings
