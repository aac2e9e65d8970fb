#include "spacings/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "spacings/gamma.hpp"

namespace spacings {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct DyadicBuilder {
  RngStream& rng;
  int depth;
  double cell_width;
  std::vector<double>& bridge_values;
  std::vector<double>& uniforms;

  void node(std::int64_t lo, std::int64_t hi, std::int64_t count) {
    if (hi - lo == 1) {
      const double a = double(lo) * cell_width;
      for (std::int64_t c = 0; c < count; ++c) {
        uniforms.push_back(a + cell_width * rng.uniform());
      }
      return;
    }
    const std::int64_t mid = (lo + hi) / 2;
    const double z = rng.normal();
    const double span = double(hi - lo) * cell_width;
    bridge_values[std::size_t(mid)] =
        0.5 * (bridge_values[std::size_t(lo)] + bridge_values[std::size_t(hi)]) +
        0.5 * std::sqrt(span) * z;
    const std::int64_t left = binomial_quantile(count, 0.5, normal_cdf(z));
    node(lo, mid, left);
    node(mid, hi, count - left);
  }
};

}  // namespace

std::int64_t binomial_quantile(std::int64_t n, double p, double u) {
  if (n < 0) throw domain_error("binomial_quantile requires n >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw domain_error("binomial_quantile requires p in [0,1]");
  if (std::isnan(u)) throw domain_error("binomial_quantile requires a numeric u");
  if (u <= 0.0 || n == 0 || p == 0.0) return 0;
  if (u >= 1.0 || p == 1.0) return n;

  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  std::int64_t m = 0;
  double log_pmf = double(n) * lq;

  // For the symmetric case, skip the left tail whose total mass is far below
  // the smallest positive double (Hoeffding: P(X <= mean - 46 sd) < 1e-400).
  if (p == 0.5 && n > 256) {
    const double mean = 0.5 * double(n);
    const double sd = std::sqrt(0.25 * double(n));
    const std::int64_t start = std::int64_t(mean - 46.0 * sd) - 2;
    if (start > 0) {
      m = start;
      log_pmf = log_gamma(double(n) + 1.0) - log_gamma(double(m) + 1.0) -
                log_gamma(double(n - m) + 1.0) + double(m) * lp + double(n - m) * lq;
    }
  }

  double cdf = 0.0;
  for (; m <= n; ++m) {
    if (log_pmf > -745.0) cdf += std::exp(log_pmf);
    if (cdf >= u) return m;
    if (m < n) log_pmf += std::log(double(n - m) / double(m + 1)) + lp - lq;
  }
  return n;  // u within roundoff of 1
}

CoupledPair dyadic_coupling(RngStream& rng, std::int64_t n_points, int depth) {
  if (depth < 4) throw domain_error("dyadic_coupling requires 2^depth >= 16");
  if (depth > 26) throw capacity_error("dyadic depth exceeds the grid budget");
  if (n_points < 1) throw domain_error("dyadic_coupling requires N >= 1");
  const std::int64_t cells = std::int64_t(1) << depth;
  if (n_points > (std::int64_t(1) << 40) / cells) {
    throw capacity_error("N * 2^depth exceeds the memory budget");
  }

  CoupledPair pair;
  pair.depth = depth;
  pair.bridge.values.assign(std::size_t(cells) + 1, 0.0);
  pair.uniforms.reserve(std::size_t(n_points));

  DyadicBuilder builder{rng, depth, 1.0 / double(cells), pair.bridge.values, pair.uniforms};
  builder.node(0, cells, n_points);

  std::sort(pair.uniforms.begin(), pair.uniforms.end());
  pair.bridge.grid.resize(std::size_t(cells) + 1);
  for (std::int64_t i = 0; i <= cells; ++i) {
    pair.bridge.grid[std::size_t(i)] = double(i) / double(cells);
  }
  return pair;
}

double coupling_distance(const CoupledPair& pair) {
  const auto& u = pair.uniforms;
  const auto& grid = pair.bridge.grid;
  const auto& bv = pair.bridge.values;
  if (u.empty()) {
    double m = 0.0;
    for (double b : bv) m = std::max(m, std::fabs(b));
    return m;
  }
  const double n = double(u.size());
  const double rootn = std::sqrt(n);

  // gamma_N - B is linear between consecutive candidates, so the sup is
  // attained at jump points (both sides) or at grid nodes.
  double best = 0.0;
  std::size_t gi = 0;  // current segment: grid[gi] <= s < grid[gi+1]
  auto bridge_at = [&](double s) {
    while (gi + 2 < grid.size() && grid[gi + 1] <= s) ++gi;
    const double s0 = grid[gi], s1 = grid[gi + 1];
    return bv[gi] + (s - s0) / (s1 - s0) * (bv[gi + 1] - bv[gi]);
  };
  auto consider = [&](double s, std::int64_t cnt_before, std::int64_t cnt_after) {
    const double b = bridge_at(s);
    best = std::max(best, std::fabs(rootn * (double(cnt_before) / n - s) - b));
    best = std::max(best, std::fabs(rootn * (double(cnt_after) / n - s) - b));
  };

  std::size_t ui = 0;
  std::size_t gj = 0;
  std::int64_t cnt = 0;
  while (ui < u.size() || gj < grid.size()) {
    double s;
    if (ui < u.size() && (gj >= grid.size() || u[ui] <= grid[gj])) {
      s = u[ui];
      std::int64_t before = cnt;
      while (ui < u.size() && u[ui] == s) {
        ++cnt;
        ++ui;
      }
      consider(s, before, cnt);
      continue;
    }
    s = grid[gj++];
    consider(s, cnt, cnt);
  }
  return best;
}

}  // namespace spacings
