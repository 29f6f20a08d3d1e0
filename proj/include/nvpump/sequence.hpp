#pragma once

#include <optional>
#include <vector>

#include "nvpump/propagator.hpp"

namespace nvpump {

struct Segment {
  bool laser_on = false;
  double duration_ns = 0.0;
};

// Pulse/wait loop parameters: `loops` repetitions of a pulse of width
// `pulse_ns` followed by a wait of `wait_ns`.
struct TrainParams {
  double pulse_ns = 0.0;
  double wait_ns = 0.0;
  int loops = 0;
};

struct PulseSchedule {
  std::vector<Segment> segments;
  std::optional<TrainParams> train;  // set when built by make_pulse_train

  double total_ns() const;
};

// 2n segments alternating (on, pulse_ns), (off, wait_ns), ending with a wait.
PulseSchedule make_pulse_train(double pulse_ns, double wait_ns, int loops);

struct LoopRecord {
  int loop = 0;           // 1-based
  double polarization = 0.0;  // P1 at the end of the loop
  double p21 = 0.0;       // ground population moved 2 -> 1 during the loop
  double p12 = 0.0;       // ground population moved 1 -> 2 during the loop
};

struct SimulationResult {
  StateVector final_state;
  double polarization = 0.0;       // P1 of the final state
  double singlet_dwell_ns = 0.0;   // integral of P5 + P6 over the whole run
  double photon_integral = 0.0;    // integral of k31 P3 + k42 P4 over the run
  std::vector<LoopRecord> per_loop;
  std::optional<int> converged_at;  // first loop whose end state moved < tolerance
};

// Propagates `start` through every segment. The singlet dwell and emission
// integrals run over pulses and waits alike. Per-loop polarization and
// transfer records are produced for train schedules when track_loops is set.
SimulationResult run_schedule(const RateConstants& rates, const PulseSchedule& schedule,
                              const StateVector& start, bool track_loops = false,
                              double loop_tol = 1e-10);

// Trajectory of a whole schedule: within each segment, samples every
// sample_dt_ns (or less for shorter segments); every segment boundary is
// included. Times are global to the schedule.
std::vector<TimedState> sample_schedule(const RateConstants& rates,
                                        const PulseSchedule& schedule, const StateVector& start,
                                        double sample_dt_ns);

// One whole loop as a single linear map: exp(m_off wait) exp(m_on pulse).
struct LoopPropagator {
  Matrix t;  // 6x6, column-stochastic
  double pulse_ns = 0.0;
  double wait_ns = 0.0;
};

LoopPropagator loop_propagator(const RateConstants& rates, double pulse_ns, double wait_ns);

struct Transfer {
  double p21 = 0.0;
  double p12 = 0.0;
};

// Population exchanged with the bright ground level over one loop starting
// from `loop_start`: p21 is everything arriving at level 1, p12 is
// everything leaving it. The loop map is linear, so each flux is a map
// entry times its origin population; their difference is the loop's
// polarization gain, so p21 = p12 exactly characterizes the steady state.
// From a purely ground-supported start (e.g. thermal) p21 reduces to the
// 2 -> 1 flux t[1][2] P2.
Transfer loop_transfer(const StateVector& loop_start, const LoopPropagator& lp);

struct SteadyState {
  StateVector state;
  int loops_used = 0;
};

// Applies the loop map from the thermal state until the sup-norm change of
// the full state drops below tol. Throws convergence_error at max_loops.
SteadyState steady_state_iterative(const RateConstants& rates, double pulse_ns, double wait_ns,
                                   double tol = 1e-10, int max_loops = 10000);

// Fixed point of the loop map by direct linear solve of (t - I) p = 0 with
// the normalization row replacing one redundant equation. Throws
// degenerate_fixed_point when the fixed space has dimension > 1 (e.g. all
// pumping rates zero).
StateVector steady_state_eigen(const RateConstants& rates, double pulse_ns, double wait_ns);

double max_abs_diff(const StateVector& a, const StateVector& b);

}  // namespace nvpump
