#include "spacings/spacings.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spacings {
namespace {

constexpr std::int64_t kVariateBudget = std::int64_t(1) << 40;

double ks_sup_against_gamma(const std::vector<double>& sorted_values, GammaOrder k) {
  const double n = double(sorted_values.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted_values.size(); ++i) {
    const double h = gamma_cdf(k, sorted_values[i]);
    sup = std::max({sup, std::fabs(double(i + 1) / n - h), std::fabs(double(i) / n - h)});
  }
  return sup;
}

std::int64_t count_le(const std::vector<double>& sorted, double x) {
  return std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
}

std::int64_t count_lt(const std::vector<double>& sorted, double x) {
  return std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
}

// Golden-section refinement of a local maximum bracketed by [a, b].
template <class F>
double refine_max(F&& f, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::fabs(b)); ++it) {
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

// Geometric sweep plus a linear refinement around the gamma bulk, where the
// smooth decomposition terms peak.
std::vector<double> smooth_sup_grid(GammaOrder k) {
  const double kk = double(k.k);
  const double hi = kk + 40.0 * std::sqrt(kk) + 40.0;
  const double lo = kk * 1e-9 + 1e-12;
  std::vector<double> xs;
  xs.reserve(520);
  const int geo = 256;
  for (int i = 0; i <= geo; ++i) xs.push_back(lo * std::pow(hi / lo, double(i) / geo));
  const double pl = std::max(lo, kk - 10.0 * std::sqrt(kk));
  const double ph = std::min(hi, kk + 10.0 * std::sqrt(kk));
  const int lin = 256;
  for (int i = 0; i <= lin; ++i) xs.push_back(pl + (ph - pl) * double(i) / lin);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

template <class F>
double sup_abs_refined(F&& f, const std::vector<double>& xs) {
  auto g = [&](double x) { return std::fabs(f(x)); };
  std::vector<double> v(xs.size());
  double best = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v[i] = g(xs[i]);
    best = std::max(best, v[i]);
  }
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (v[i] >= v[i - 1] && v[i] >= v[i + 1]) {
      best = std::max(best, refine_max(g, xs[i - 1], xs[i + 1]));
    }
  }
  return best;
}

}  // namespace

SpacingsSample sample_uniform_spacings(RngStream& rng, std::int64_t n, GammaOrder k) {
  if (n < k.k) throw domain_error("sample_uniform_spacings requires n >= k");
  if (n > kVariateBudget) throw capacity_error("uniform sample size exceeds budget");
  std::vector<double> u(static_cast<std::size_t>(n));
  for (auto& ui : u) ui = rng.uniform();
  return uniform_spacings_from(std::move(u), k);
}

SpacingsSample uniform_spacings_from(std::vector<double> uniforms, GammaOrder k) {
  const std::int64_t n = std::int64_t(uniforms.size());
  if (n < k.k) throw domain_error("uniform_spacings_from requires n >= k");
  std::sort(uniforms.begin(), uniforms.end());
  if (!uniforms.empty() && (uniforms.front() < 0.0 || uniforms.back() > 1.0)) {
    throw domain_error("uniform variates must lie in [0, 1]");
  }
  const std::int64_t big_n = (n + 1) / k.k;
  // Order statistics with the boundary conventions U_0 = 0, U_{n+1} = 1.
  auto order_stat = [&](std::int64_t j) -> double {
    if (j <= 0) return 0.0;
    if (j >= n + 1) return 1.0;
    return uniforms[std::size_t(j - 1)];
  };
  SpacingsSample s{k};
  s.count = big_n;
  s.order = n;
  s.scaled.resize(std::size_t(big_n));
  const double scale = double(big_n) * double(k.k);
  for (std::int64_t i = 1; i <= big_n; ++i) {
    s.scaled[std::size_t(i - 1)] = scale * (order_stat(i * k.k) - order_stat((i - 1) * k.k));
  }
  std::sort(s.scaled.begin(), s.scaled.end());
  return s;
}

SpacingsSample sample_exponential_spacings(RngStream& rng, std::int64_t n_spacings,
                                           GammaOrder k) {
  if (n_spacings < 1) throw domain_error("sample_exponential_spacings requires N >= 1");
  if (n_spacings > kVariateBudget / k.k) {
    throw capacity_error("N*k exceeds the variate budget");
  }
  std::vector<double> e(static_cast<std::size_t>(n_spacings * k.k));
  for (auto& ei : e) ei = rng.exponential();
  return exponential_spacings_from(e, n_spacings, k);
}

SpacingsSample exponential_spacings_from(std::span<const double> exponentials,
                                         std::int64_t n_spacings, GammaOrder k) {
  if (n_spacings < 1) throw domain_error("exponential_spacings_from requires N >= 1");
  if (n_spacings > kVariateBudget / k.k) {
    throw capacity_error("N*k exceeds the variate budget");
  }
  const std::int64_t total = n_spacings * k.k;
  if (std::int64_t(exponentials.size()) != total) {
    throw domain_error("expected N*k exponential variates");
  }
  SpacingsSample s{k};
  s.count = n_spacings;
  s.order = total - 1;  // n + 1 == k N
  s.y.resize(std::size_t(n_spacings));
  for (std::int64_t i = 0; i < n_spacings; ++i) {
    double block = 0.0;
    for (std::int64_t j = 0; j < k.k; ++j) {
      const double e = exponentials[std::size_t(i * k.k + j)];
      if (!(e >= 0.0)) throw domain_error("exponential variates must be non-negative");
      block += e;
    }
    s.y[std::size_t(i)] = block;
  }
  double tot = 0.0;
  for (double yi : s.y) tot += yi;
  if (!(tot > 0.0)) throw domain_error("degenerate all-zero exponential sample");
  s.s_total = tot;
  const double mu = tot / double(total);
  s.mu = mu;
  s.scaled.resize(s.y.size());
  for (std::size_t i = 0; i < s.y.size(); ++i) s.scaled[i] = s.y[i] / mu;
  std::sort(s.scaled.begin(), s.scaled.end());
  return s;
}

StepProcess beta_process(const SpacingsSample& sample) {
  StepProcess p;
  p.jumps = sample.scaled;
  p.scale = std::sqrt(double(sample.count));
  p.drift = StepProcess::Drift::gamma_cdf;
  p.gamma_order = sample.k.k;
  return p;
}

StepProcess lambda_process(const SpacingsSample& sample) {
  if (!sample.has_blocks()) {
    throw representation_error("lambda_process requires the block-sum representation");
  }
  StepProcess p;
  p.jumps = sample.y;
  std::sort(p.jumps.begin(), p.jumps.end());
  p.scale = std::sqrt(double(sample.count));
  p.drift = StepProcess::Drift::gamma_cdf;
  p.gamma_order = sample.k.k;
  return p;
}

StepProcess reduced_process(const SpacingsSample& sample) {
  StepProcess p;
  p.jumps.resize(sample.scaled.size());
  for (std::size_t i = 0; i < sample.scaled.size(); ++i) {
    p.jumps[i] = gamma_cdf(sample.k, sample.scaled[i]);
  }
  p.scale = std::sqrt(double(sample.count));
  p.drift = StepProcess::Drift::identity;
  return p;
}

double gc_statistic(const SpacingsSample& sample) {
  return ks_sup_against_gamma(sample.scaled, sample.k);
}

RemainderDecomposition remainder_decomposition(const SpacingsSample& sample) {
  if (!sample.has_blocks() || !sample.mu) {
    throw representation_error("remainder_decomposition requires the block-sum representation");
  }
  if (sample.order + 1 != sample.count * sample.k.k) {
    throw representation_error("remainder_decomposition requires n + 1 == k N");
  }
  const GammaOrder k = sample.k;
  const double kk = double(k.k);
  const double mu = *sample.mu;
  const double n = double(sample.count);
  const double rootn = std::sqrt(n);

  std::vector<double> ys = sample.y;
  std::sort(ys.begin(), ys.end());

  RemainderDecomposition out;
  out.sup_lambda = rootn * ks_sup_against_gamma(ys, k);

  // x -> H(mu x) - H(x) is one-signed with a unique stationary point.
  const double xstar = (mu == 1.0) ? kk : kk * std::log(mu) / (mu - 1.0);
  const double shift_sup = std::fabs(gamma_cdf(k, mu * xstar) - gamma_cdf(k, xstar));
  out.sup_r4 = shift_sup;
  out.sup_r1 = rootn * shift_sup;

  auto a1 = [&](double x) {
    return gamma_cdf(k, mu * x) - gamma_cdf(k, x) - (mu - 1.0) * psi(k, x);
  };
  out.sup_a1 = rootn * sup_abs_refined(a1, smooth_sup_grid(k));

  // R2 and the identity residual share counts and cdf values per candidate.
  std::vector<double> cands;
  cands.reserve(ys.size() + sample.scaled.size() + 1);
  cands.insert(cands.end(), ys.begin(), ys.end());
  cands.insert(cands.end(), sample.scaled.begin(), sample.scaled.end());
  cands.push_back(xstar);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  double sup_r2 = 0.0;
  double resid = 0.0;
  auto eval = [&](double x, bool from_left) {
    const double a_cnt = double(from_left ? count_lt(ys, mu * x) : count_le(ys, mu * x));
    const double b_cnt = double(from_left ? count_lt(ys, x) : count_le(ys, x));
    const double hx = gamma_cdf(k, x);
    const double hmux = gamma_cdf(k, mu * x);
    const double lam = rootn * (b_cnt / n - hx);
    const double r1 = rootn * (hmux - hx);
    const double r2 = rootn * ((a_cnt - b_cnt) / n - (hmux - hx));
    const double beta_star = rootn * (a_cnt / n - hx);
    sup_r2 = std::max(sup_r2, std::fabs(r2));
    resid = std::max(resid, std::fabs(beta_star - (lam + r1 + r2)));
  };
  for (double x : cands) {
    eval(x, false);
    eval(x, true);
  }
  out.sup_r2 = sup_r2;
  out.identity_residual = resid;
  return out;
}

IntegralIdentity integral_identity(const SpacingsSample& sample) {
  if (!sample.has_blocks() || !sample.mu || !sample.s_total) {
    throw representation_error("integral_identity requires the block-sum representation");
  }
  if (sample.order + 1 != sample.count * sample.k.k) {
    throw representation_error("integral_identity requires n + 1 == k N");
  }
  const double n = double(sample.count);
  const double kk = double(sample.k.k);
  const double rootn = std::sqrt(n);
  IntegralIdentity out;
  out.lhs = rootn * (kk - *sample.s_total / n);
  out.rhs = -kk * rootn * (*sample.mu - 1.0);
  return out;
}

ShiftBound r4_shift_bound(const SpacingsSample& sample) {
  if (!sample.mu) {
    throw representation_error("r4_shift_bound requires the block-sum representation");
  }
  const double kk = double(sample.k.k);
  const double mu = *sample.mu;
  const double xstar = (mu == 1.0) ? kk : kk * std::log(mu) / (mu - 1.0);
  ShiftBound out;
  out.sup = std::fabs(gamma_cdf(sample.k, mu * xstar) - gamma_cdf(sample.k, xstar));
  const double kconst = shorack_constant(sample.k);
  const double sup_psi = kconst * kconst * std::sqrt(kk);
  out.bound = std::fabs(mu - 1.0) * std::max(1.0, 1.0 / mu) * sup_psi;
  out.holds = out.sup <= out.bound;
  return out;
}

double lil_statistic(const SpacingsSample& sample) {
  if (!sample.mu) {
    throw representation_error("lil_statistic requires the block-sum representation");
  }
  const double nk = double(sample.count) * double(sample.k.k);
  if (nk < 16.0) throw domain_error("lil_statistic requires N k >= 16");
  return std::fabs(*sample.mu - 1.0) * std::sqrt(nk / (2.0 * std::log(std::log(nk))));
}

}  // namespace spacings
