#pragma once

#include <stdexcept>

namespace spacings {

// Argument outside an operation's documented domain.
using std::domain_error;

// Sample lacks the representation an operation needs (e.g. block sums).
struct representation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested size exceeds the configured capacity budget.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid or iteration budget too coarse for the requested accuracy.
struct resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration; the message names the offending field.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Regression input unusable (too few points, degenerate abscissae).
struct fit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spacings
