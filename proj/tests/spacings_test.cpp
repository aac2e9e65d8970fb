#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "spacings/spacings.hpp"

using namespace spacings;

TEST_CASE("RngStream replays and separates streams") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  std::vector<double> xa, xb, xc;
  for (int i = 0; i < 64; ++i) {
    xa.push_back(a.uniform());
    xb.push_back(b.uniform());
    xc.push_back(c.uniform());
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
  for (double u : xa) {
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("RngStream uniforms and normals have the right first moments") {
  RngStream rng(123, 0);
  std::vector<double> us(100000);
  for (auto& u : us) u = rng.uniform();
  const auto su = oracles::summarize(us);
  CHECK(su.mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su.var == doctest::Approx(1.0 / 12.0).epsilon(0.03));
  const double d = oracles::ks_one_sample(us, [](double x) { return x; });
  CHECK(d < oracles::ks_critical_scale(0.001) / std::sqrt(double(us.size())));

  std::vector<double> zs(100000);
  for (auto& z : zs) z = rng.normal();
  const auto sz = oracles::summarize(zs);
  CHECK(std::fabs(sz.mean) < 0.02);
  CHECK(sz.var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("uniform spacings match the hand examples") {
  {
    // n = 3, k = 2, sorted uniforms {0.2, 0.5, 0.9} with U_4 = 1
    const auto s = uniform_spacings_from({0.2, 0.5, 0.9}, GammaOrder(2));
    CHECK(s.count == 2);
    CHECK(s.order == 3);
    REQUIRE(s.scaled.size() == 2);
    CHECK(s.scaled[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.scaled[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_FALSE(s.has_blocks());
    CHECK_FALSE(s.mu.has_value());
  }
  {
    // n = 1, k = 1: two spacings 2u and 2(1-u)
    const double u = 0.3;
    const auto s = uniform_spacings_from({u}, GammaOrder(1));
    REQUIRE(s.scaled.size() == 2);
    CHECK(s.scaled[0] == doctest::Approx(2.0 * u));
    CHECK(s.scaled[1] == doctest::Approx(2.0 * (1.0 - u)));
  }
  CHECK_THROWS_AS(uniform_spacings_from({0.5}, GammaOrder(2)), domain_error);

  // telescoping: k | (n+1) makes the scaled values sum to N k
  RngStream rng(9, 0);
  for (std::int64_t k : {1, 2, 5}) {
    const std::int64_t n_spacings = 100;
    const auto s = sample_uniform_spacings(rng, n_spacings * k - 1, GammaOrder(k));
    CHECK(s.count == n_spacings);
    double sum = 0.0;
    for (double x : s.scaled) sum += x;
    CHECK(sum == doctest::Approx(double(n_spacings * k)).epsilon(1e-9));
    CHECK(std::is_sorted(s.scaled.begin(), s.scaled.end()));
  }
}

TEST_CASE("exponential spacings: degenerate hooks and bookkeeping") {
  {
    const std::vector<double> e{1.0, 1.0, 1.0, 1.0};
    const auto s = exponential_spacings_from(e, 2, GammaOrder(2));
    CHECK(s.y == std::vector<double>{2.0, 2.0});
    CHECK(*s.mu == 1.0);
    CHECK(s.scaled == std::vector<double>{2.0, 2.0});
    CHECK(*s.s_total == 4.0);
    CHECK(s.order == 3);
  }
  {
    const double e1 = std::exp(1.0);
    const auto s = exponential_spacings_from(std::vector<double>{e1}, 1, GammaOrder(1));
    CHECK(s.y == std::vector<double>{e1});
    CHECK(*s.mu == e1);
    CHECK(s.scaled[0] == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(exponential_spacings_from(std::vector<double>{1.0}, 2, GammaOrder(1)),
                  domain_error);
  RngStream rng(1, 0);
  CHECK_THROWS_AS(sample_exponential_spacings(rng, (std::int64_t(1) << 22), GammaOrder(1 << 19)),
                  capacity_error);
}

TEST_CASE("the two representations agree in distribution (two-sample KS)") {
  const GammaOrder k(2);
  const std::int64_t n_spacings = 1000;
  int pass = 0;
  const int reps = 10;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> pool_u, pool_e;
    for (int j = 0; j < 10; ++j) {
      RngStream ru(2024, std::uint64_t(rep * 32 + j));
      RngStream re(2024, (std::uint64_t(1) << 32) + std::uint64_t(rep * 32 + j));
      const auto su = sample_uniform_spacings(ru, n_spacings * k.k - 1, k);
      const auto se = sample_exponential_spacings(re, n_spacings, k);
      pool_u.insert(pool_u.end(), su.scaled.begin(), su.scaled.end());
      pool_e.insert(pool_e.end(), se.scaled.begin(), se.scaled.end());
    }
    const double d = oracles::ks_two_sample(pool_u, pool_e);
    const double crit = oracles::ks_critical_scale(0.01) *
                        std::sqrt(2.0 / double(pool_u.size()));
    if (d < crit) ++pass;
  }
  CHECK(pass >= 8);

  // single-sample version across 50 repetitions
  int pass1 = 0;
  for (int rep = 0; rep < 50; ++rep) {
    RngStream ru(77, std::uint64_t(rep));
    RngStream re(77, (std::uint64_t(1) << 32) + std::uint64_t(rep));
    const auto su = sample_uniform_spacings(ru, n_spacings * k.k - 1, k);
    const auto se = sample_exponential_spacings(re, n_spacings, k);
    const double d = oracles::ks_two_sample(su.scaled, se.scaled);
    const double crit = oracles::ks_critical_scale(0.01) *
                        std::sqrt(2.0 / double(n_spacings));
    if (d < crit) ++pass1;
  }
  CHECK(pass1 >= 40);
}

TEST_CASE("beta process evaluation and limits") {
  std::vector<double> e{1.0, 1.0, 1.0, 1.0};
  const auto s = exponential_spacings_from(e, 2, GammaOrder(2));
  const auto beta = beta_process(s);
  CHECK(beta.count_le(1.9) == 0);
  CHECK(beta.count_le(2.0) == 2);
  CHECK(beta.value(0.0) == 0.0);
  CHECK(std::fabs(beta.value(200.0)) <= 1e-12);
  const double h22 = gamma_cdf(GammaOrder(2), 2.0);
  CHECK(beta.value(2.0) == doctest::Approx(std::sqrt(2.0) * (1.0 - h22)));
}

TEST_CASE("gc_statistic: two-point example, determinism, decreasing medians") {
  std::vector<double> e{1.0, 1.0, 1.0, 1.0};
  const auto s = exponential_spacings_from(e, 2, GammaOrder(2));
  CHECK(gc_statistic(s) == doctest::Approx(gamma_cdf(GammaOrder(2), 2.0)).epsilon(1e-12));

  RngStream r1(5, 3), r2(5, 3);
  const auto a = sample_uniform_spacings(r1, 999, GammaOrder(2));
  const auto b = sample_uniform_spacings(r2, 999, GammaOrder(2));
  CHECK(gc_statistic(a) == gc_statistic(b));

  auto median_gc = [&](std::int64_t n_spacings) {
    std::vector<double> v;
    for (int rep = 0; rep < 30; ++rep) {
      RngStream rng(11, std::uint64_t(rep));
      const auto smp = sample_uniform_spacings(rng, n_spacings * 2 - 1, GammaOrder(2));
      v.push_back(gc_statistic(smp));
    }
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median_gc(10000) < median_gc(1000));
}

TEST_CASE("lambda process: degenerate jumps, zero at origin, centering") {
  std::vector<double> e{1.0, 1.0, 1.0, 1.0};
  const auto s = exponential_spacings_from(e, 2, GammaOrder(2));
  const auto lam = lambda_process(s);
  CHECK(lam.jumps == std::vector<double>{2.0, 2.0});
  CHECK(lam.value(0.0) == 0.0);

  const auto su = uniform_spacings_from({0.2, 0.5, 0.9}, GammaOrder(2));
  CHECK_THROWS_AS(lambda_process(su), representation_error);

  // E[Lambda_N(x)] = 0 at fixed x
  const double x = 2.0;
  std::vector<double> vals;
  for (int rep = 0; rep < 1000; ++rep) {
    RngStream rng(31, std::uint64_t(rep));
    const auto smp = sample_exponential_spacings(rng, 256, GammaOrder(2));
    vals.push_back(lambda_process(smp).value(x));
  }
  const auto stats = oracles::summarize(vals);
  CHECK(std::fabs(stats.mean) <= 3.0 * std::sqrt(stats.var / double(vals.size())));
}

TEST_CASE("reduced process: monotone image and equal sup norms") {
  RngStream rng(3, 1);
  const auto s = sample_exponential_spacings(rng, 500, GammaOrder(2));
  const auto red = reduced_process(s);
  CHECK(std::is_sorted(red.jumps.begin(), red.jumps.end()));
  CHECK(red.jumps.front() >= 0.0);
  CHECK(red.jumps.back() < 1.0);
  const auto beta = beta_process(s);
  CHECK(std::fabs(red.sup_norm() - beta.sup_norm()) <= 1e-12 * std::sqrt(500.0));
  CHECK(red.value(0.0) == 0.0);

  // the sup norm dominates a dense grid and both one-sided jump evaluations
  const double sup = red.sup_norm();
  double grid_sup = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    grid_sup = std::max(grid_sup, std::fabs(red.value(double(i) / 100000.0)));
  }
  for (double v : red.jumps) {
    grid_sup = std::max({grid_sup, std::fabs(red.value(v)), std::fabs(red.left_value(v))});
  }
  CHECK(grid_sup <= sup + 1e-12);
  CHECK(sup <= grid_sup + 1e-12);  // attained at a jump limit
}

TEST_CASE("remainder decomposition: degenerate stream zeroes every term") {
  std::vector<double> e(8, 1.0);
  const auto s = exponential_spacings_from(e, 4, GammaOrder(2));
  const auto dec = remainder_decomposition(s);
  CHECK(dec.sup_r1 == 0.0);
  CHECK(dec.sup_r2 == 0.0);
  CHECK(dec.sup_r4 == 0.0);
  CHECK(dec.sup_a1 <= 1e-14);
  CHECK(dec.identity_residual <= 1e-14);

  const auto su = uniform_spacings_from({0.2, 0.5, 0.9}, GammaOrder(2));
  CHECK_THROWS_AS(remainder_decomposition(su), representation_error);
}

TEST_CASE("remainder decomposition: identity residual and consistency") {
  for (std::int64_t k : {1, 2, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      RngStream rng(17, std::uint64_t(rep));
      const auto s = sample_exponential_spacings(rng, 1000, GammaOrder(k));
      const auto dec = remainder_decomposition(s);
      CHECK(dec.identity_residual <= 1e-9 * std::sqrt(1000.0));
      // R4 is R1 shrunk by sqrt(N)
      CHECK(dec.sup_r1 == doctest::Approx(dec.sup_r4 * std::sqrt(1000.0)).epsilon(1e-12));
      // direct formula for the shift sup at the stationary point
      const double mu = *s.mu;
      const double xstar = double(k) * std::log(mu) / (mu - 1.0);
      const double direct =
          std::fabs(gamma_cdf(s.k, mu * xstar) - gamma_cdf(s.k, xstar));
      CHECK(dec.sup_r4 == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("sup_r2 matches a dense-grid oracle on small samples") {
  for (int rep = 0; rep < 20; ++rep) {
    RngStream rng(19, std::uint64_t(rep));
    const GammaOrder k(2);
    const auto s = sample_exponential_spacings(rng, 24, k);
    const double mu = *s.mu;
    const double n = double(s.count);
    std::vector<double> ys = s.y;
    std::sort(ys.begin(), ys.end());
    auto xi = [&](double t) {
      return double(std::upper_bound(ys.begin(), ys.end(), t) - ys.begin()) / n;
    };
    auto r2 = [&](double x) {
      return std::sqrt(n) * ((xi(mu * x) - xi(x)) -
                             (gamma_cdf(k, mu * x) - gamma_cdf(k, x)));
    };
    double grid_sup = 0.0;
    const double hi = ys.back() * 1.5 + 4.0;
    for (int i = 0; i <= 400000; ++i) {
      grid_sup = std::max(grid_sup, std::fabs(r2(hi * double(i) / 400000.0)));
    }
    const double computed = remainder_decomposition(s).sup_r2;
    CHECK(computed >= grid_sup - 1e-12);
    CHECK(computed <= grid_sup + 5e-4);
  }
}

TEST_CASE("shift bound holds sample by sample") {
  for (std::int64_t k : {1, 2, 5, 20}) {
    for (int rep = 0; rep < 100; ++rep) {
      RngStream rng(23, std::uint64_t(rep));
      const auto s = sample_exponential_spacings(rng, 500, GammaOrder(k));
      const auto sb = r4_shift_bound(s);
      CHECK(sb.holds);
      CHECK(sb.sup <= sb.bound);
    }
  }
}

TEST_CASE("integral identity: closed forms agree; quadrature oracle concurs") {
  {
    std::vector<double> e(8, 1.0);
    const auto s = exponential_spacings_from(e, 4, GammaOrder(2));
    const auto ii = integral_identity(s);
    CHECK(ii.lhs == 0.0);
    CHECK(ii.rhs == 0.0);
  }
  for (std::int64_t k : {1, 2, 5}) {
    for (int rep = 0; rep < 25; ++rep) {
      RngStream rng(29, std::uint64_t(rep));
      const auto s = sample_exponential_spacings(rng, 1000, GammaOrder(k));
      const auto ii = integral_identity(s);
      CHECK(std::fabs(ii.lhs - ii.rhs) < 1e-10);
    }
  }
  // truncated trapezoid of Lambda_N over [0, 20k]
  {
    RngStream rng(37, 0);
    const GammaOrder k(2);
    const auto s = sample_exponential_spacings(rng, 400, k);
    const auto lam = lambda_process(s);
    const double quad = oracles::trapezoid([&](double x) { return lam.value(x); }, 0.0,
                                           20.0 * double(k.k), 200000);
    const auto ii = integral_identity(s);
    CHECK(std::fabs(quad - ii.lhs) <= 1e-3 * std::sqrt(400.0));
  }
}

TEST_CASE("lil statistic: degenerate zero, re-blocking invariance, domain") {
  {
    std::vector<double> e(32, 1.0);
    const auto s = exponential_spacings_from(e, 16, GammaOrder(2));
    CHECK(lil_statistic(s) == 0.0);
  }
  {
    // same raw stream, blocked as k=1 and k=2: depends only on S and N k
    RngStream rng(41, 0);
    std::vector<double> e(64);
    for (auto& x : e) x = rng.exponential();
    const auto s1 = exponential_spacings_from(e, 64, GammaOrder(1));
    const auto s2 = exponential_spacings_from(e, 32, GammaOrder(2));
    CHECK(lil_statistic(s1) == doctest::Approx(lil_statistic(s2)).epsilon(1e-12));
  }
  {
    std::vector<double> e(8, 0.5);
    const auto s = exponential_spacings_from(e, 8, GammaOrder(1));
    CHECK_THROWS_AS(lil_statistic(s), domain_error);
  }
  // LIL normalization keeps the statistic O(1)
  std::vector<double> stats;
  for (int rep = 0; rep < 100; ++rep) {
    RngStream rng(43, std::uint64_t(rep));
    const auto s = sample_exponential_spacings(rng, 10000, GammaOrder(1));
    stats.push_back(lil_statistic(s));
  }
  std::sort(stats.begin(), stats.end());
  CHECK(stats[98] < 3.0);
}
