#pragma once

#include <cstdint>

#include "spacings/errors.hpp"

namespace spacings {

/// Spacings step. Shape parameter of the unit-scale gamma law H_k.
struct GammaOrder {
  std::int64_t k;
  explicit GammaOrder(std::int64_t order);
};

struct GammaEval {
  double x = 0;
  double cdf = 0;
  double pdf = 0;
  double second_derivative = 0;
};

struct TailBound {
  double tail = 0;
  double bound = 0;
  bool holds = false;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// H_k(x) = integral_0^x t^{k-1} e^{-t} / (k-1)! dt. Lower regularized series
/// for x < k, upper continued fraction for x >= k, all in log space.
double gamma_cdf(GammaOrder k, double x);

/// 1 - H_k(x) without cancellation near 1.
double gamma_upper_tail(GammaOrder k, double x);

/// h_k(x) = x^{k-1} e^{-x} / (k-1)!.
double gamma_pdf(GammaOrder k, double x);

/// psi(x) = x h_k(x); unique maximum over x at x = k.
double psi(GammaOrder k, double x);

/// h_k'(x) = e^{-x} x^{k-2} ((k-1) - x) / (k-1)!. Requires x > 0 when k = 1.
double gamma_cdf_second_derivative(GammaOrder k, double x);

/// Smallest x with H_k(x) >= p, by bracketed bisection to width 1e-13.
double gamma_quantile(GammaOrder k, double p);

/// K(k) = (k^{k+1/2} e^{-k} / k!)^{1/2}; satisfies K(k)^2 = sup_x psi(x)/sqrt(k).
double shorack_constant(GammaOrder k);

/// (2 pi)^{-1/4}, the increasing limit of K(k).
double shorack_limit();

/// For x >= 2k the identity 1 - H_k(x) <= 2 x^{k-1} e^{-x} / (k-1)! holds;
/// returns both sides and the comparison.
TailBound gamma_tail_bound_check(GammaOrder k, double x);

GammaEval gamma_eval(GammaOrder k, double x);

}  // namespace spacings
