#include "spacings/gamma.hpp"

#include <cmath>
#include <string>

namespace spacings {
namespace {

constexpr int kMaxIter = 20'000'000;
constexpr double kTiny = 1e-300;

// Regularized lower incomplete gamma P(a,x) by power series; for x < a.
double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw resolution_error("incomplete gamma series did not converge");
}

// Regularized upper tail Q(a,x) by continued fraction (modified Lentz); x >= a.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) {
      return h * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw resolution_error("incomplete gamma fraction did not converge");
}

}  // namespace

GammaOrder::GammaOrder(std::int64_t order) : k(order) {
  if (order < 1 || order > 1'000'000) {
    throw domain_error("gamma order must be in [1, 1e6], got " + std::to_string(order));
  }
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma requires x > 0");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double gamma_cdf(GammaOrder k, double x) {
  if (!(x >= 0.0)) throw domain_error("gamma_cdf requires x >= 0");
  if (x == 0.0) return 0.0;
  const double a = double(k.k);
  if (x < a) return lower_series(a, x);
  return 1.0 - upper_fraction(a, x);
}

double gamma_upper_tail(GammaOrder k, double x) {
  if (!(x >= 0.0)) throw domain_error("gamma_upper_tail requires x >= 0");
  if (x == 0.0) return 1.0;
  const double a = double(k.k);
  if (x < a) return 1.0 - lower_series(a, x);
  return upper_fraction(a, x);
}

double gamma_pdf(GammaOrder k, double x) {
  if (!(x >= 0.0)) throw domain_error("gamma_pdf requires x >= 0");
  if (x == 0.0) return k.k == 1 ? 1.0 : 0.0;
  const double a = double(k.k);
  return std::exp((a - 1.0) * std::log(x) - x - log_gamma(a));
}

double psi(GammaOrder k, double x) {
  if (!(x >= 0.0)) throw domain_error("psi requires x >= 0");
  if (x == 0.0) return 0.0;
  const double a = double(k.k);
  return std::exp(a * std::log(x) - x - log_gamma(a));
}

double gamma_cdf_second_derivative(GammaOrder k, double x) {
  if (!(x >= 0.0)) throw domain_error("second derivative requires x >= 0");
  if (k.k == 1) {
    if (x == 0.0) throw domain_error("second derivative requires x > 0 when k = 1");
    return -std::exp(-x);
  }
  if (x == 0.0) return k.k == 2 ? 1.0 : 0.0;
  const double a = double(k.k);
  const double m = std::exp((a - 2.0) * std::log(x) - x - log_gamma(a));
  return m * ((a - 1.0) - x);
}

double gamma_quantile(GammaOrder k, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw domain_error("gamma_quantile requires p in [0, 1)");
  if (p == 0.0) return 0.0;
  const double a = double(k.k);
  double lo = 0.0;
  double hi = a + 40.0 * std::sqrt(a) + 40.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gamma_cdf(k, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double shorack_constant(GammaOrder k) {
  const double a = double(k.k);
  return std::exp(0.5 * ((a + 0.5) * std::log(a) - a - log_gamma(a + 1.0)));
}

double shorack_limit() {
  return std::exp(-0.25 * std::log(2.0 * 3.14159265358979323846));
}

TailBound gamma_tail_bound_check(GammaOrder k, double x) {
  if (!(x >= 2.0 * double(k.k))) {
    throw domain_error("gamma_tail_bound_check requires x >= 2k");
  }
  TailBound out;
  out.tail = gamma_upper_tail(k, x);
  out.bound = 2.0 * gamma_pdf(k, x);
  out.holds = out.tail <= out.bound;
  return out;
}

GammaEval gamma_eval(GammaOrder k, double x) {
  GammaEval e;
  e.x = x;
  e.cdf = gamma_cdf(k, x);
  e.pdf = gamma_pdf(k, x);
  e.second_derivative = gamma_cdf_second_derivative(k, x);
  return e;
}

}  // namespace spacings
