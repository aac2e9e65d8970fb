#include "spacings/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace spacings {
namespace {

void check_bridge_grid(std::span<const double> grid) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
    throw domain_error("bridge grid must contain 0 and 1");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw domain_error("bridge grid must be strictly increasing");
  }
}

double max_increment(std::span<const double> grid) {
  double m = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) m = std::max(m, grid[i] - grid[i - 1]);
  return m;
}

}  // namespace

double BridgePath::value_at(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw domain_error("bridge evaluation requires s in [0,1]");
  const auto it = std::upper_bound(grid.begin(), grid.end(), s);
  if (it == grid.begin()) return values.front();
  if (it == grid.end()) return values.back();
  const std::size_t j = std::size_t(it - grid.begin());
  const double s0 = grid[j - 1], s1 = grid[j];
  const double w = (s - s0) / (s1 - s0);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

BridgePath sample_brownian_bridge(RngStream& rng, std::span<const double> grid) {
  check_bridge_grid(grid);
  BridgePath path;
  path.grid.assign(grid.begin(), grid.end());
  std::vector<double> w(grid.size());
  w[0] = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    w[i] = w[i - 1] + rng.normal() * std::sqrt(grid[i] - grid[i - 1]);
  }
  const double w1 = w.back();
  path.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) path.values[i] = w[i] - grid[i] * w1;
  path.values.front() = 0.0;
  path.values.back() = 0.0;
  return path;
}

ShorackGrid ShorackGrid::balanced(GammaOrder k, std::size_t target_points) {
  if (target_points < 64) throw domain_error("balanced grid needs at least 64 points");
  const double kk = double(k.k);
  const double hi = kk + 40.0 * std::sqrt(kk) + 40.0;
  const double lo = std::max(gamma_quantile(k, 1e-10), 1e-300);

  std::vector<std::pair<double, double>> nodes;  // (x, s)
  nodes.reserve(target_points * 2);
  nodes.emplace_back(0.0, 0.0);
  const std::size_t geo = target_points - 2;
  for (std::size_t i = 0; i <= geo; ++i) {
    const double x = lo * std::pow(hi / lo, double(i) / double(geo));
    nodes.emplace_back(x, gamma_cdf(k, x));
  }
  // Split intervals until every probability increment is small.
  constexpr double kMaxStep = 1.0 / 512.0;
  for (std::size_t pass = 0; pass < 40; ++pass) {
    bool split = false;
    std::vector<std::pair<double, double>> next;
    next.reserve(nodes.size() * 2);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i > 0 && nodes[i].second - nodes[i - 1].second > kMaxStep) {
        const double xa = std::max(nodes[i - 1].first, lo * 1e-6);
        const double xm = std::sqrt(xa * nodes[i].first);
        next.emplace_back(xm, gamma_cdf(k, xm));
        split = true;
      }
      next.push_back(nodes[i]);
    }
    nodes = std::move(next);
    if (!split) break;
    if (nodes.size() > 1u << 22) throw resolution_error("balanced grid exploded");
  }

  ShorackGrid g{k, {}, {}};
  for (const auto& [x, s] : nodes) {
    if (!g.s.empty() && !(s > g.s.back())) continue;  // drop flat steps
    g.x.push_back(x);
    g.s.push_back(s);
  }
  if (g.s.back() < 1.0) {
    g.x.push_back(hi);
    g.s.push_back(1.0);
  }
  return g;
}

namespace {

ShorackPath shorack_on_link(const BridgePath& bridge, const ShorackGrid& link,
                            std::span<const double> x_grid) {
  const GammaOrder k = link.k;
  const double kk = double(k.k);

  // Trapezoid quadrature of B(H_k(t)) dt over the x image.
  double integral = 0.0;
  for (std::size_t i = 1; i < link.x.size(); ++i) {
    integral += 0.5 * (bridge.values[i] + bridge.values[i - 1]) * (link.x[i] - link.x[i - 1]);
  }

  ShorackPath path(k);
  path.integral_term = integral;
  path.x_grid.assign(x_grid.begin(), x_grid.end());
  path.values.resize(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    if (!(x >= 0.0)) throw domain_error("shorack evaluation requires x >= 0");
    const double s = gamma_cdf(k, x);
    path.values[i] = bridge.value_at(s) - psi(k, x) / kk * integral;
  }

  const double trunc = link.x.back();
  const double mean_excess = kk * gamma_upper_tail(GammaOrder(k.k + 1), trunc) -
                             trunc * gamma_upper_tail(k, trunc);
  path.truncation_mass = std::max(0.0, mean_excess);
  return path;
}

}  // namespace

ShorackPath shorack_from_bridge(const BridgePath& bridge, const ShorackGrid& link,
                                std::span<const double> x_grid) {
  if (bridge.grid.size() != link.s.size()) {
    throw resolution_error("bridge grid does not match the link grid");
  }
  if (max_increment(bridge.grid) > 1.0 / 256.0) {
    throw resolution_error("bridge grid too coarse: probability increments exceed 1/256");
  }
  return shorack_on_link(bridge, link, x_grid);
}

ShorackPath shorack_from_bridge(const BridgePath& bridge, GammaOrder k,
                                std::span<const double> x_grid) {
  check_bridge_grid(bridge.grid);
  if (max_increment(bridge.grid) > 1.0 / 256.0) {
    throw resolution_error("bridge grid too coarse: probability increments exceed 1/256");
  }
  const double kk = double(k.k);
  const double cap = kk + 40.0 * std::sqrt(kk) + 40.0;
  ShorackGrid link{k, {}, {}};
  link.x.resize(bridge.grid.size());
  link.s.assign(bridge.grid.begin(), bridge.grid.end());
  for (std::size_t i = 0; i < link.s.size(); ++i) {
    link.x[i] = link.s[i] >= 1.0 ? cap : gamma_quantile(k, link.s[i]);
  }
  return shorack_on_link(bridge, link, x_grid);
}

double shorack_covariance(GammaOrder k, double x, double y) {
  if (!(x >= 0.0 && y >= 0.0)) throw domain_error("shorack_covariance requires x, y >= 0");
  const double hx = gamma_cdf(k, x);
  const double hy = gamma_cdf(k, y);
  return std::min(hx, hy) - hx * hy - psi(k, x) * psi(k, y) / double(k.k);
}

}  // namespace spacings
