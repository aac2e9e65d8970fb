#pragma once

#include <cstdint>

#include "spacings/gamma.hpp"
#include "spacings/step_process.hpp"

namespace spacings {

// Gap band for the normalized modulus: gaps u - t range over (c1 d, c2 d).
struct WindowSpec {
  double d;
  double c1;
  double c2;
  WindowSpec(double d_, double c1_, double c2_);
};

struct KappaResult {
  double value = 0;
  double location = 0;  // s of the attaining window (closed-boundary report)
  double width = 0;     // h of the attaining window
};

// kappa(d, R) = sup_{0 <= h <= d} sup_{0 <= s < 1-h} |R(s+h) - R(s)| for a
// reduced-scale process (identity drift on [0,1)). Exact over the candidate
// set: jump pairs, width-d windows anchored at jumps from either end, and
// the domain boundaries. Suprema over open constraints are reported at the
// closed boundary.
KappaResult kappa(const StepProcess& process, double d);

// kappa'(d, R) = sup over c1 d < u - t < c2 d of |R(u) - R(t)| / sqrt(u - t).
double kappa_prime(const StepProcess& process, const WindowSpec& spec);

// a   = (log N)^{1/2} (2 log log N)^{1/4} N^{-1/4}
// a_o = (log N)^{3/4} N^{-1/4}
// q   = (2 d log(1/d))^{1/2}
// b   = (2 d log log(1/d))^{1/2}  (NaN when log log(1/d) < 0)
struct RatePoint {
  double a = 0;
  double a_circ = 0;
  double q = 0;
  double b = 0;
};

RatePoint rate_values(std::int64_t n, double d);

/// (2 log log(N k) / N)^{1/2} K(k); the scale of the random drift shift.
double shift_scale(std::int64_t n, GammaOrder k);

// Finite-size surrogates for the window-width conditions, with the policy
// thresholds echoed. s5 is evaluated literally with delta = 2.5 and treated
// as true for k <= 2.
struct StuteFlags {
  bool s1 = false, s2 = false, s3 = false, s4 = false, s5 = false;
  double nd = 0;          // N d                 (s1: >= thr_s1)
  double ratio_s2 = 0;    // log(1/d) / (N d)    (s2: <= thr_s2)
  double ratio_s3 = 0;    // log(1/d) / loglog N (s3: >= thr_s3)
  double ratio_s4 = 0;    // q / a               (s4: >= thr_s4)
  double s5_bound = 0;    // k^{k(delta-2)} exp(-k^delta / 2)
  double thr_s1 = 0, thr_s2 = 0, thr_s3 = 0, thr_s4 = 0, s5_delta = 0;
};

StuteFlags stute_conditions_check(std::int64_t n, double d, GammaOrder k);

struct MwsWindow {
  double d = 0;
  double bound = 0;  // (1 + c)^{1/2}
};

/// d = alpha (log N)^{-c}; domain error when that is not below 1.
MwsWindow mws_window(std::int64_t n, double alpha, double c);

}  // namespace spacings
