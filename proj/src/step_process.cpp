#include "spacings/step_process.hpp"

#include <algorithm>
#include <cmath>

namespace spacings {

double StepProcess::drift_at(double x) const {
  if (drift == Drift::identity) return x;
  return gamma_cdf(GammaOrder(gamma_order), x);
}

std::int64_t StepProcess::count_le(double x) const {
  return std::upper_bound(jumps.begin(), jumps.end(), x) - jumps.begin();
}

std::int64_t StepProcess::count_lt(double x) const {
  return std::lower_bound(jumps.begin(), jumps.end(), x) - jumps.begin();
}

double StepProcess::value(double x) const {
  if (jumps.empty()) return scale * (0.0 - drift_at(x));
  return scale * (double(count_le(x)) / double(jumps.size()) - drift_at(x));
}

double StepProcess::left_value(double x) const {
  if (jumps.empty()) return scale * (0.0 - drift_at(x));
  return scale * (double(count_lt(x)) / double(jumps.size()) - drift_at(x));
}

double StepProcess::sup_norm() const {
  if (jumps.empty()) return scale;  // |0 - drift| approaches the drift's sup of 1
  const double n = double(jumps.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const double g = drift_at(jumps[i]);
    sup = std::max({sup, std::fabs(double(i + 1) / n - g), std::fabs(double(i) / n - g)});
  }
  return scale * sup;
}

}  // namespace spacings
