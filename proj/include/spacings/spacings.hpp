#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spacings/gamma.hpp"
#include "spacings/rng.hpp"
#include "spacings/step_process.hpp"

namespace spacings {

// One simulated set of N scaled k-spacings. `scaled` holds the sorted values
// N*k*D_i. For the block-sum (exponential) representation, `y` keeps the
// unsorted block sums Y_i, `s_total` their total S_{n+1} and
// `mu` = S_{n+1} / (N k); both are unset for the sorted-uniform
// representation.
struct SpacingsSample {
  GammaOrder k;
  std::int64_t count = 0;  // N, number of spacings
  std::int64_t order = 0;  // n, number of underlying uniforms
  std::vector<double> scaled;
  std::vector<double> y;
  std::optional<double> s_total;
  std::optional<double> mu;

  explicit SpacingsSample(GammaOrder step) : k(step) {}
  bool has_blocks() const { return !y.empty(); }
};

// Sup norms of the pieces of the pointwise identity
//   beta*(x) = Lambda(x) + R1(x) + R2(x),
// where beta*(x) = sqrt(N)(xi(mu x) - H_k(x)), Lambda is the centered
// empirical process of the block sums, R1(x) = sqrt(N)(H_k(mu x) - H_k(x)),
// R2(x) = Lambda(mu x) - Lambda(x), A1(x) = R1(x) - sqrt(N)(mu - 1) psi(x)
// and R4 = R1 / sqrt(N). identity_residual is the numerical defect of the
// identity over the jump-event candidates.
struct RemainderDecomposition {
  double sup_lambda = 0;
  double sup_r1 = 0;
  double sup_r2 = 0;
  double sup_a1 = 0;
  double sup_r4 = 0;
  double identity_residual = 0;
};

// Closed-form value of integral_0^inf Lambda(x) dx (lhs) against
// -k sqrt(N) (mu - 1) (rhs); algebraically equal.
struct IntegralIdentity {
  double lhs = 0;
  double rhs = 0;
};

// sup_x |H_k(mu x) - H_k(x)| against the mean value bound
// |mu - 1| * max(1, 1/mu) * sup_x psi(x), with sup psi = K(k)^2 sqrt(k).
struct ShiftBound {
  double sup = 0;
  double bound = 0;
  bool holds = false;
};

SpacingsSample sample_uniform_spacings(RngStream& rng, std::int64_t n, GammaOrder k);
SpacingsSample sample_exponential_spacings(RngStream& rng, std::int64_t n_spacings, GammaOrder k);

// Deterministic entry points taking injected variates; the samplers above
// draw from the stream and delegate here.
SpacingsSample uniform_spacings_from(std::vector<double> uniforms, GammaOrder k);
SpacingsSample exponential_spacings_from(std::span<const double> exponentials,
                                         std::int64_t n_spacings, GammaOrder k);

/// beta process: jumps at the scaled spacings, gamma drift, scale sqrt(N).
StepProcess beta_process(const SpacingsSample& sample);

/// Lambda process: jumps at the block sums Y_i, gamma drift, scale sqrt(N).
StepProcess lambda_process(const SpacingsSample& sample);

/// Reduced process on [0,1): jumps at H_k(scaled_i), identity drift.
StepProcess reduced_process(const SpacingsSample& sample);

/// Exact sup_x |F_N(x) - H_k(x)|.
double gc_statistic(const SpacingsSample& sample);

/// Requires the block-sum representation with n + 1 == k N.
RemainderDecomposition remainder_decomposition(const SpacingsSample& sample);

IntegralIdentity integral_identity(const SpacingsSample& sample);

ShiftBound r4_shift_bound(const SpacingsSample& sample);

/// |mu - 1| * sqrt(N k / (2 log log N k)); requires N k >= 16.
double lil_statistic(const SpacingsSample& sample);

}  // namespace spacings
