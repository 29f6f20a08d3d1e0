#pragma once

#include <stdexcept>
#include <string>

namespace nvpump {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A transition rate is negative or non-finite.
struct invalid_rate_error : error {
  using error::error;
};

// A state vector or propagator broke a conservation/positivity bound that
// round-off alone cannot explain.
struct invariant_violation : error {
  using error::error;
};

// Caller-supplied parameter outside its documented range (usage error).
struct bad_parameter : error {
  using error::error;
};

// Iteration hit its loop budget without reaching the requested tolerance.
struct convergence_error : error {
  using error::error;
};

// The loop map has more than one fixed point, so "the" steady state is
// undefined (e.g. all pumping rates zero).
struct degenerate_fixed_point : error {
  using error::error;
};

// Least-squares cosine fit left a residual too large for the model.
struct fit_error : error {
  using error::error;
};

// Config file failed to parse or validate (usage error).
struct config_error : error {
  using error::error;
};

}  // namespace nvpump
