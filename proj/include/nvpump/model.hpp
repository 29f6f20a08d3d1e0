#pragma once

#include <array>
#include <atomic>

#include "nvpump/linalg.hpp"

namespace nvpump {

// Six-level N-V model. Level indices (0-based in code, 1-based in the domain
// language): 1 = ground m_s=0, 2 = ground m_s=+-1 (lumped), 3 = excited
// m_s=0, 4 = excited m_s=+-1, 5 = upper singlet, 6 = lower singlet.
inline constexpr int n_levels = 6;

// Zero-field splittings of the ground/excited triplets, GHz. Quoted for
// reference only; they never enter the rate dynamics.
inline constexpr double ground_splitting_ghz = 2.87;
inline constexpr double excited_splitting_ghz = 1.41;

// Transition rates k_ij (level i -> level j) in ns^-1 (equivalently GHz).
// Defaults are the calibrated room-temperature values built into the model.
struct RateConstants {
  double k13 = 0.628;      // pumping, ground m_s=0 -> excited m_s=0 (laser on)
  double k24 = 0.628;      // pumping, ground m_s=+-1 -> excited m_s=+-1
  double k31 = 0.4396;     // radiative decay, spin conserving
  double k42 = 0.4396;
  double k32 = 0.0;        // radiative decay, spin flipping
  double k41 = 0.0;
  double k35 = 0.0314;     // intersystem crossing into the upper singlet
  double k45 = 0.1884;
  double k56 = 6.28;       // upper -> lower singlet
  double k61 = 0.020724;   // lower singlet -> ground m_s=0
  double k62 = 0.013816;   // lower singlet -> ground m_s=+-1

  // Throws invalid_rate_error if any rate is negative or non-finite.
  void validate() const;
};

// Populations P1..P6; nonnegative, summing to 1.
struct StateVector {
  std::array<double, n_levels> p{};

  double& operator[](int i) { return p[static_cast<size_t>(i)]; }
  double operator[](int i) const { return p[static_cast<size_t>(i)]; }
  double sum() const;
};

// Population-conserving rate matrix for dP/dt = m P. Column sums vanish by
// construction; off-diagonals are nonnegative.
struct Generator {
  Matrix m;  // 6x6, ns^-1
  bool laser_on = false;
};

// Builds the laser-on or laser-off generator from the given rates. Diagonal
// entries are the negated column sums of the off-diagonals, so conservation
// holds without rounding drift.
Generator build_generator(const RateConstants& rates, bool laser_on);

// Room-temperature starting state (1/3, 2/3, 0, 0, 0, 0).
StateVector thermal_state();

// Checks sum-to-one (1e-9) and per-level bounds; throws invariant_violation.
void validate_state(const StateVector& p);

// Zeroes round-off negatives with |value| < 1e-12; larger negatives signal a
// propagation bug and throw invariant_violation.
void clamp_round_off(StateVector& p);

// Running count of state-invariant checks, for test instrumentation.
extern std::atomic<long> state_checks;

}  // namespace nvpump
