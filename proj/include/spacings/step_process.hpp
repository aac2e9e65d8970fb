#pragma once

#include <cstdint>
#include <vector>

#include "spacings/gamma.hpp"

namespace spacings {

// Right-continuous empirical step function minus a smooth monotone drift:
// value(x) = scale * (#{jumps <= x} / n - drift(x)), with equal mass 1/n
// per jump point.
struct StepProcess {
  enum class Drift { identity, gamma_cdf };

  std::vector<double> jumps;  // sorted non-decreasing
  double scale = 1.0;
  Drift drift = Drift::identity;
  std::int64_t gamma_order = 1;  // used when drift == gamma_cdf

  double drift_at(double x) const;
  std::int64_t count_le(double x) const;
  std::int64_t count_lt(double x) const;
  double value(double x) const;
  double left_value(double x) const;

  // Exact supremum of |value| over the domain. The drift is monotone
  // between jumps, so the sup is attained at jump points evaluated from
  // both sides.
  double sup_norm() const;
};

}  // namespace spacings
