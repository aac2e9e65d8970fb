#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spacings/gamma.hpp"
#include "spacings/rng.hpp"

namespace spacings {

// Brownian bridge sampled exactly on a finite grid in [0,1]; endpoints
// pinned to zero.
struct BridgePath {
  std::vector<double> grid;    // strictly increasing, contains 0 and 1
  std::vector<double> values;  // same length

  double value_at(double s) const;  // linear interpolation between nodes
};

// Link between an x-grid on [0, T] and its H_k image; the bridge lives on
// the s side, the quadrature on the x side.
struct ShorackGrid {
  GammaOrder k;
  std::vector<double> x;  // non-decreasing quadrature nodes, x[0] = 0
  std::vector<double> s;  // strictly increasing, s[0] = 0, s.back() = 1

  // Bridge grid from a geometric x sweep refined until consecutive
  // probability increments are at most 1/512, truncated at
  // T = k + 40 sqrt(k) + 40.
  static ShorackGrid balanced(GammaOrder k, std::size_t target_points = 4096);
};

// W(x) = B(H_k(x)) - (psi(x)/k) * I with I = integral_0^inf B(H_k(t)) dt,
// evaluated by trapezoid quadrature on the x image of the bridge grid.
struct ShorackPath {
  GammaOrder k;
  std::vector<double> x_grid;
  std::vector<double> values;
  double integral_term = 0;     // I
  double truncation_mass = 0;   // integral_T^inf (1 - H_k), bound on the cut tail

  explicit ShorackPath(GammaOrder step) : k(step) {}
};

BridgePath sample_brownian_bridge(RngStream& rng, std::span<const double> grid);

// General form; derives the x image of the bridge grid through the quantile
// function. Requires consecutive bridge-grid increments <= 1/256.
ShorackPath shorack_from_bridge(const BridgePath& bridge, GammaOrder k,
                                std::span<const double> x_grid);

// Fast form reusing a precomputed grid link (bridge sampled on link.s).
ShorackPath shorack_from_bridge(const BridgePath& bridge, const ShorackGrid& link,
                                std::span<const double> x_grid);

/// min(H_k(x), H_k(y)) - H_k(x) H_k(y) - psi(x) psi(y) / k.
double shorack_covariance(GammaOrder k, double x, double y);

}  // namespace spacings
