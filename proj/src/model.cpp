#include "nvpump/model.hpp"

#include <cmath>
#include <string>

#include "nvpump/errors.hpp"

namespace nvpump {

std::atomic<long> state_checks{0};

namespace {

void check_rate(const char* name, double v) {
  if (!(std::isfinite(v) && v >= 0.0))
    throw invalid_rate_error(std::string(name) + " must be >= 0 and finite, got " +
                             std::to_string(v));
}

}  // namespace

void RateConstants::validate() const {
  check_rate("k13", k13);
  check_rate("k24", k24);
  check_rate("k31", k31);
  check_rate("k42", k42);
  check_rate("k32", k32);
  check_rate("k41", k41);
  check_rate("k35", k35);
  check_rate("k45", k45);
  check_rate("k56", k56);
  check_rate("k61", k61);
  check_rate("k62", k62);
}

double StateVector::sum() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

Generator build_generator(const RateConstants& rates, bool laser_on) {
  rates.validate();
  Matrix m(n_levels, n_levels);

  if (laser_on) {
    m(2, 0) = rates.k13;
    m(3, 1) = rates.k24;
  }
  m(0, 2) = rates.k31;
  m(1, 2) = rates.k32;
  m(0, 3) = rates.k41;
  m(1, 3) = rates.k42;
  m(4, 2) = rates.k35;
  m(4, 3) = rates.k45;
  m(5, 4) = rates.k56;
  m(0, 5) = rates.k61;
  m(1, 5) = rates.k62;

  // Diagonal = negated off-diagonal column sum, never the printed closed form.
  for (int j = 0; j < n_levels; ++j) {
    double out = 0.0;
    for (int i = 0; i < n_levels; ++i)
      if (i != j) out += m(i, j);
    m(j, j) = -out;
  }
  return Generator{m, laser_on};
}

StateVector thermal_state() {
  StateVector p;
  p[0] = 1.0 / 3.0;
  p[1] = 2.0 / 3.0;
  return p;
}

void validate_state(const StateVector& p) {
  state_checks.fetch_add(1, std::memory_order_relaxed);
  for (int i = 0; i < n_levels; ++i) {
    const double v = p[i];
    if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
      throw invariant_violation("population P" + std::to_string(i + 1) + " = " +
                                std::to_string(v) + " outside [0, 1]");
  }
  const double s = p.sum();
  if (std::abs(s - 1.0) > 1e-9)
    throw invariant_violation("populations sum to " + std::to_string(s) + ", expected 1");
}

void clamp_round_off(StateVector& p) {
  for (int i = 0; i < n_levels; ++i) {
    if (p[i] < 0.0) {
      if (p[i] <= -1e-12)
        throw invariant_violation("population P" + std::to_string(i + 1) + " = " +
                                  std::to_string(p[i]) +
                                  " below the -1e-12 round-off bound");
      p[i] = 0.0;
    }
  }
}

}  // namespace nvpump
