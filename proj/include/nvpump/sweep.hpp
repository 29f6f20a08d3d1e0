#pragma once

#include <span>
#include <vector>

#include "nvpump/observables.hpp"
#include "nvpump/sequence.hpp"

namespace nvpump {

struct Tolerances {
  double steady_tol = 1e-10;
  int max_loops = 10000;

  void validate() const;
};

// Parameters held fixed while one of them is swept.
struct FixedParams {
  double pulse_ns = 4.0;
  double wait_ns = 150.0;
  int loops = 400;
  double t_read_ns = 300.0;
  double power = 1.0;

  void validate() const;
};

enum class SweepVariable { pulse_width, wait_time, loop_count, power };

const char* sweep_variable_name(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::pulse_width;
  std::vector<double> values;
  FixedParams fixed;

  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  double polarization = 0.0;
  double contrast = 0.0;
  double singlet_dwell_ns = 0.0;  // per steady loop, or total for loop-count sweeps
  int loops = 0;                  // loops to converge, or the requested count if not reached
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
};

// Evaluates every value of the spec independently and deterministically;
// rows come back in input order regardless of the worker count.
SweepResult sweep(const RateConstants& rates, const SweepSpec& spec, const Tolerances& tol = {},
                  int threads = 1);

// Laser power enters as a linear scaling of the pumping rates k13 and k24;
// decay and crossing rates are power-independent.
RateConstants power_scale(const RateConstants& rates, double s);

struct DwellPoint {
  double pulse_ns = 0.0;
  double dwell_ns = 0.0;          // singlet dwell of one steady-state loop
  double pulse_occupancy = 0.0;   // mean singlet population while the laser is on
  double polarization = 0.0;
};

// Steady-state singlet dwell paired with the final polarization, for each
// pulse width. dwell_ns is normalized per loop so widths compare fairly;
// pulse_occupancy (dwell during the pulse over the pulse width) is the
// variable the polarization tracks linearly.
std::vector<DwellPoint> dwell_vs_polarization(const RateConstants& rates,
                                              std::span<const double> pulse_values,
                                              double wait_ns, const Tolerances& tol = {},
                                              int threads = 1);

struct LoopDwell {
  double pulse_ns_part = 0.0;  // singlet dwell during the laser pulse
  double total_ns = 0.0;       // dwell over the whole loop, wait included
};

// Singlet dwell accumulated over one loop started from `state`.
LoopDwell steady_loop_dwell(const RateConstants& rates, const StateVector& state,
                            double pulse_ns, double wait_ns);

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct Optimum {
  double pulse_ns = 0.0;
  double wait_ns = 0.0;
  double polarization = 0.0;
};

// Maximizes steady-state polarization over the given parameter box: a 16x16
// grid scan followed by coordinate-wise golden-section refinement down to
// 0.1 ns. Ties break toward the smaller pulse width, then the smaller wait.
Optimum optimize_schedule(const RateConstants& rates, Bounds pulse_bounds, Bounds wait_bounds);

}  // namespace nvpump
