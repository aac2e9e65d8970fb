#pragma once

#include <cstdint>
#include <vector>

#include "spacings/gaussian.hpp"
#include "spacings/rng.hpp"

namespace spacings {

// Uniform sample and Brownian bridge built from shared randomness: one
// normal per dyadic node drives both the bridge midpoint displacement and
// the binomial split of the sample counts.
struct CoupledPair {
  std::vector<double> uniforms;  // sorted
  BridgePath bridge;             // dyadic grid of depth `depth`
  int depth = 0;
};

/// Smallest m with BinomialCdf(n, p, m) >= u, by summing log-space pmf terms.
std::int64_t binomial_quantile(std::int64_t n, double p, double u);

/// Top-down dyadic construction; requires 2^depth >= 16.
CoupledPair dyadic_coupling(RngStream& rng, std::int64_t n_points, int depth);

/// Exact sup over [0,1] of |gamma_N(s) - B(s)| where
/// gamma_N = sqrt(N) (edf - id) and B is piecewise linear on its grid.
double coupling_distance(const CoupledPair& pair);

}  // namespace spacings
