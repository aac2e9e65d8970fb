#include "spacings/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace spacings {
namespace {

void require_reduced(const StepProcess& process) {
  if (process.drift != StepProcess::Drift::identity) {
    throw domain_error("oscillation moduli require a reduced-scale process (identity drift)");
  }
  if (!process.jumps.empty() &&
      (process.jumps.front() < 0.0 || process.jumps.back() >= 1.0)) {
    throw domain_error("reduced-scale jump points must lie in [0, 1)");
  }
}

}  // namespace

WindowSpec::WindowSpec(double d_, double c1_, double c2_) : d(d_), c1(c1_), c2(c2_) {
  if (!(d > 0.0 && d < 1.0)) throw domain_error("WindowSpec requires 0 < d < 1");
  if (!(c1 > 0.0 && c2 >= c1)) throw domain_error("WindowSpec requires 0 < c1 <= c2");
}

KappaResult kappa(const StepProcess& process, double d) {
  if (!(d > 0.0 && d < 1.0)) throw domain_error("kappa requires 0 < d < 1");
  require_reduced(process);
  const auto& v = process.jumps;
  const double sc = process.scale;
  const std::int64_t m = std::int64_t(v.size());
  const double n = m > 0 ? double(m) : 1.0;

  KappaResult best;
  best.value = 0.0;
  auto consider = [&](double val, double s, double h) {
    if (val > best.value) best = {val, s, h};
  };

  // Values of R/scale at jumps from the right (top) and the left (bot).
  auto top = [&](std::int64_t i) { return double(i + 1) / n - v[std::size_t(i)]; };
  auto bot = [&](std::int64_t i) { return double(i) / n - v[std::size_t(i)]; };
  const double top0 =
      double(std::upper_bound(v.begin(), v.end(), 0.0) - v.begin()) / n;  // R(0)/scale

  // Positive pairs: R(v_j) - R(v_i-) over v_j - v_i <= d, sliding min of bot.
  {
    std::deque<std::int64_t> dq;
    for (std::int64_t j = 0; j < m; ++j) {
      while (!dq.empty() && bot(dq.back()) >= bot(j)) dq.pop_back();
      dq.push_back(j);
      while (v[std::size_t(j)] - v[std::size_t(dq.front())] > d) dq.pop_front();
      const std::int64_t i = dq.front();
      consider(sc * (top(j) - bot(i)), v[std::size_t(i)],
               v[std::size_t(j)] - v[std::size_t(i)]);
    }
  }

  // Negative pairs: R(t1) - R(v_r-) with t1 a jump (or 0), gap <= d,
  // sliding max of top; index 0 denotes the sentinel t = 0.
  {
    auto pt = [&](std::int64_t idx) { return idx == 0 ? 0.0 : v[std::size_t(idx - 1)]; };
    auto tp = [&](std::int64_t idx) { return idx == 0 ? top0 : top(idx - 1); };
    std::deque<std::int64_t> dq;
    dq.push_back(0);
    for (std::int64_t r = 0; r < m; ++r) {
      const std::int64_t cand = r;  // jump r-1 becomes eligible as a left point
      if (cand >= 1) {
        while (!dq.empty() && tp(dq.back()) <= tp(cand)) dq.pop_back();
        dq.push_back(cand);
      }
      while (!dq.empty() && v[std::size_t(r)] - pt(dq.front()) > d) dq.pop_front();
      if (dq.empty()) continue;
      const std::int64_t i = dq.front();
      // R(t1) - R(v_r-) = sc * (tp(i) - (r/n - v_r))
      const double value = sc * (tp(i) - (double(r) / n - v[std::size_t(r)]));
      consider(value, pt(i), v[std::size_t(r)] - pt(i));
    }
  }

  // Width-d windows, anchored on the left at 0 or a jump, and on the right
  // at a jump approached from below; windows hitting the domain end use the
  // limit at 1.
  {
    auto count_le = [&](double x) {
      return double(std::upper_bound(v.begin(), v.end(), x) - v.begin());
    };
    auto count_lt = [&](double x) {
      return double(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };
    auto left_anchor = [&](double t1) {
      const double c1 = count_le(t1);
      const double t2 = t1 + d;
      if (t2 < 1.0) {
        consider(sc * (d - (count_le(t2) - c1) / n), t1, d);
      } else {
        // R(t1) - R(1-) with R(1-) = sc (1 - 1) = 0
        consider(sc * (c1 / n - t1), t1, 1.0 - t1);
      }
    };
    left_anchor(0.0);
    for (std::int64_t i = 0; i < m; ++i) left_anchor(v[std::size_t(i)]);
    for (std::int64_t r = 0; r < m; ++r) {
      const double t2 = v[std::size_t(r)];
      const double t1 = std::max(0.0, t2 - d);
      const double val =
          sc * ((count_le(t1) / n - t1) - (count_lt(t2) / n - t2));
      consider(val, t1, t2 - t1);
    }
  }

  return best;
}

double kappa_prime(const StepProcess& process, const WindowSpec& spec) {
  require_reduced(process);
  const auto& v = process.jumps;
  const double sc = process.scale;
  const std::int64_t m = std::int64_t(v.size());
  const double n = m > 0 ? double(m) : 1.0;
  const double g_lo = spec.c1 * spec.d;
  const double g_hi = spec.c2 * spec.d;

  auto rv = [&](double t) {
    return sc * (double(std::upper_bound(v.begin(), v.end(), t) - v.begin()) / n - t);
  };
  auto rl = [&](double t) {
    return sc * (double(std::lower_bound(v.begin(), v.end(), t) - v.begin()) / n - t);
  };

  double best = 0.0;
  auto consider_points = [&](double t1, double t2, double gap) {
    // gap is passed explicitly: band-edge candidates keep their exact gap
    // (suprema over the open band are reported at the closed boundary).
    if (t1 < 0.0 || t2 > 1.0 || !(gap > 0.0)) return;
    const double den = std::sqrt(gap);
    const double a1 = rv(t1), a2 = rl(t1), b1 = rv(t2), b2 = rl(t2);
    best = std::max({best, std::fabs(b1 - a1) / den, std::fabs(b1 - a2) / den,
                     std::fabs(b2 - a1) / den, std::fabs(b2 - a2) / den});
  };
  auto consider_pair = [&](double t1, double t2) {
    const double gap = t2 - t1;
    if (gap >= g_lo && gap <= g_hi) consider_points(t1, t2, gap);
  };

  // Jump-jump pairs within the gap band (0 acts as an extra anchor).
  std::vector<double> pts;
  pts.reserve(v.size() + 1);
  pts.push_back(0.0);
  pts.insert(pts.end(), v.begin(), v.end());
  std::size_t lo = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    while (lo < j && pts[j] - pts[lo] > g_hi) ++lo;
    for (std::size_t i = lo; i < j; ++i) consider_pair(pts[i], pts[j]);
  }

  // Window-endpoint candidates around each anchor, plus the domain end.
  for (double t : pts) {
    for (double g : {g_lo, g_hi}) {
      consider_points(t, t + g, g);
      consider_points(t - g, t, g);
    }
    consider_pair(t, 1.0);
  }
  return best;
}

RatePoint rate_values(std::int64_t n, double d) {
  if (n < 16) throw domain_error("rate_values requires N >= 16");
  if (!(d > 0.0 && d < 1.0)) throw domain_error("rate_values requires 0 < d < 1");
  const double ln = std::log(double(n));
  RatePoint r;
  r.a = std::sqrt(ln) * std::pow(2.0 * std::log(ln), 0.25) * std::pow(double(n), -0.25);
  r.a_circ = std::pow(ln, 0.75) * std::pow(double(n), -0.25);
  const double lid = std::log(1.0 / d);
  r.q = std::sqrt(2.0 * d * lid);
  r.b = lid > 1.0 ? std::sqrt(2.0 * d * std::log(lid))
                  : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double shift_scale(std::int64_t n, GammaOrder k) {
  const double nk = double(n) * double(k.k);
  if (nk < 16.0) throw domain_error("shift_scale requires N k >= 16");
  return std::sqrt(2.0 * std::log(std::log(nk)) / double(n)) * shorack_constant(k);
}

StuteFlags stute_conditions_check(std::int64_t n, double d, GammaOrder k) {
  if (n < 1) throw domain_error("stute_conditions_check requires N >= 1");
  if (!(d > 0.0 && d < 1.0)) throw domain_error("stute_conditions_check requires 0 < d < 1");
  StuteFlags f;
  f.thr_s1 = 100.0;
  f.thr_s2 = 0.1;
  f.thr_s3 = 3.0;
  f.thr_s4 = 3.0;
  f.s5_delta = 2.5;

  const double lid = std::log(1.0 / d);
  f.nd = double(n) * d;
  f.s1 = f.nd >= f.thr_s1;
  f.ratio_s2 = lid / f.nd;
  f.s2 = f.ratio_s2 <= f.thr_s2;
  f.ratio_s3 = lid / std::log(std::log(double(std::max<std::int64_t>(n, 3))));
  f.s3 = f.ratio_s3 >= f.thr_s3;
  if (n >= 16) {
    const RatePoint r = rate_values(n, d);
    f.ratio_s4 = r.q / r.a;
  } else {
    f.ratio_s4 = std::numeric_limits<double>::quiet_NaN();
  }
  f.s4 = f.ratio_s4 >= f.thr_s4;
  const double kk = double(k.k);
  const double log_bound = kk * (f.s5_delta - 2.0) * std::log(kk) -
                           0.5 * std::pow(kk, f.s5_delta);
  f.s5_bound = std::exp(log_bound);
  f.s5 = k.k <= 2 ? true : d < f.s5_bound;
  return f;
}

MwsWindow mws_window(std::int64_t n, double alpha, double c) {
  if (n < 16) throw domain_error("mws_window requires N >= 16");
  if (!(alpha > 0.0 && c > 0.0)) throw domain_error("mws_window requires alpha, c > 0");
  MwsWindow w;
  w.d = alpha * std::pow(std::log(double(n)), -c);
  if (!(w.d < 1.0)) throw domain_error("mws_window: alpha too large for this N");
  w.bound = std::sqrt(1.0 + c);
  return w;
}

}  // namespace spacings
