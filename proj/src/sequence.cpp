#include "nvpump/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "nvpump/errors.hpp"

namespace nvpump {

double max_abs_diff(const StateVector& a, const StateVector& b) {
  double d = 0.0;
  for (int i = 0; i < n_levels; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double PulseSchedule::total_ns() const {
  double t = 0.0;
  for (const Segment& s : segments) t += s.duration_ns;
  return t;
}

PulseSchedule make_pulse_train(double pulse_ns, double wait_ns, int loops) {
  if (!(std::isfinite(pulse_ns) && pulse_ns > 0.0))
    throw bad_parameter("pulse width must be > 0 ns, got " + std::to_string(pulse_ns));
  if (!(std::isfinite(wait_ns) && wait_ns >= 0.0))
    throw bad_parameter("wait time must be >= 0 ns, got " + std::to_string(wait_ns));
  if (loops < 1) throw bad_parameter("loop count must be >= 1, got " + std::to_string(loops));

  PulseSchedule s;
  s.segments.reserve(2 * static_cast<size_t>(loops));
  for (int i = 0; i < loops; ++i) {
    s.segments.push_back({true, pulse_ns});
    s.segments.push_back({false, wait_ns});
  }
  s.train = TrainParams{pulse_ns, wait_ns, loops};
  return s;
}

namespace {

std::vector<std::array<double, n_levels>> run_weights(const RateConstants& rates) {
  return {singlet_weights(), emission_weights(rates)};
}

double transfer_into_bright(const Matrix& loop_map, const StateVector& p) {
  double in = 0.0;
  for (int j = 1; j < n_levels; ++j) in += loop_map(0, j) * p[j];
  return in;
}

double transfer_out_of_bright(const Matrix& loop_map, const StateVector& p) {
  return (1.0 - loop_map(0, 0)) * p[0];
}

SimulationResult run_train(const RateConstants& rates, const TrainParams& tp,
                           const StateVector& start, bool track_loops, double loop_tol) {
  const Generator on = build_generator(rates, true);
  const Generator off = build_generator(rates, false);
  const auto weights = run_weights(rates);
  const AugmentedPropagator pulse = augmented_propagator(on, tp.pulse_ns, weights);
  const AugmentedPropagator wait = augmented_propagator(off, tp.wait_ns, weights);
  const Matrix loop_map = wait.t * pulse.t;

  std::array<Accumulator, 2> accs{Accumulator{singlet_weights()},
                                  Accumulator{emission_weights(rates)}};

  SimulationResult res;
  if (track_loops) res.per_loop.reserve(static_cast<size_t>(tp.loops));
  StateVector p = start;
  StateVector prev = p;
  for (int i = 1; i <= tp.loops; ++i) {
    const double p21 = transfer_into_bright(loop_map, p);
    const double p12 = transfer_out_of_bright(loop_map, p);
    p = apply_augmented(pulse, p, accs);
    p = apply_augmented(wait, p, accs);
    if (track_loops) res.per_loop.push_back({i, p[0], p21, p12});
    if (!res.converged_at && max_abs_diff(p, prev) < loop_tol) res.converged_at = i;
    prev = p;
  }
  res.final_state = p;
  res.polarization = p[0];
  res.singlet_dwell_ns = accs[0].value;
  res.photon_integral = accs[1].value;
  return res;
}

}  // namespace

SimulationResult run_schedule(const RateConstants& rates, const PulseSchedule& schedule,
                              const StateVector& start, bool track_loops, double loop_tol) {
  if (schedule.segments.empty()) throw bad_parameter("schedule has no segments");
  for (const Segment& s : schedule.segments)
    if (!(std::isfinite(s.duration_ns) && s.duration_ns >= 0.0))
      throw bad_parameter("segment duration must be >= 0 ns");
  if (!(loop_tol > 0.0)) throw bad_parameter("loop tolerance must be > 0");
  validate_state(start);

  if (schedule.train) return run_train(rates, *schedule.train, start, track_loops, loop_tol);

  const Generator on = build_generator(rates, true);
  const Generator off = build_generator(rates, false);
  const auto weights = run_weights(rates);
  std::array<Accumulator, 2> accs{Accumulator{singlet_weights()},
                                  Accumulator{emission_weights(rates)}};

  // Distinct (flag, duration) pairs repeat in hand-built schedules; reuse
  // their propagators.
  std::map<std::pair<bool, double>, AugmentedPropagator> cache;
  StateVector p = start;
  for (const Segment& s : schedule.segments) {
    auto key = std::make_pair(s.laser_on, s.duration_ns);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, augmented_propagator(s.laser_on ? on : off, s.duration_ns, weights))
               .first;
    p = apply_augmented(it->second, p, accs);
  }

  SimulationResult res;
  res.final_state = p;
  res.polarization = p[0];
  res.singlet_dwell_ns = accs[0].value;
  res.photon_integral = accs[1].value;
  return res;
}

std::vector<TimedState> sample_schedule(const RateConstants& rates,
                                        const PulseSchedule& schedule, const StateVector& start,
                                        double sample_dt_ns) {
  if (schedule.segments.empty()) throw bad_parameter("schedule has no segments");
  if (!(std::isfinite(sample_dt_ns) && sample_dt_ns > 0.0))
    throw bad_parameter("sample step must be > 0 ns");
  validate_state(start);

  const Generator on = build_generator(rates, true);
  const Generator off = build_generator(rates, false);

  std::vector<TimedState> out;
  out.push_back({0.0, start});
  double t0 = 0.0;
  for (const Segment& seg : schedule.segments) {
    if (seg.duration_ns <= 0.0) continue;
    const double step = std::min(sample_dt_ns, seg.duration_ns);
    const std::vector<TimedState> part = sample_trajectory(
        seg.laser_on ? on : off, out.back().state, seg.duration_ns, step);
    for (size_t i = 1; i < part.size(); ++i) out.push_back({t0 + part[i].t_ns, part[i].state});
    t0 += seg.duration_ns;
  }
  return out;
}

LoopPropagator loop_propagator(const RateConstants& rates, double pulse_ns, double wait_ns) {
  if (!(std::isfinite(pulse_ns) && pulse_ns > 0.0))
    throw bad_parameter("pulse width must be > 0 ns, got " + std::to_string(pulse_ns));
  if (!(std::isfinite(wait_ns) && wait_ns >= 0.0))
    throw bad_parameter("wait time must be >= 0 ns, got " + std::to_string(wait_ns));

  const SegmentPropagator pulse = segment_propagator(build_generator(rates, true), pulse_ns);
  const SegmentPropagator wait = segment_propagator(build_generator(rates, false), wait_ns);
  Matrix t = wait.t * pulse.t;
  validate_propagator_matrix(t);
  return LoopPropagator{std::move(t), pulse_ns, wait_ns};
}

Transfer loop_transfer(const StateVector& loop_start, const LoopPropagator& lp) {
  validate_state(loop_start);
  return Transfer{transfer_into_bright(lp.t, loop_start), transfer_out_of_bright(lp.t, loop_start)};
}

SteadyState steady_state_iterative(const RateConstants& rates, double pulse_ns, double wait_ns,
                                   double tol, int max_loops) {
  if (!(tol > 0.0)) throw bad_parameter("steady-state tolerance must be > 0");
  if (max_loops < 1) throw bad_parameter("steady-state loop budget must be >= 1");

  const LoopPropagator lp = loop_propagator(rates, pulse_ns, wait_ns);
  StateVector p = thermal_state();
  for (int n = 1; n <= max_loops; ++n) {
    StateVector next = apply_propagator(lp.t, p);
    if (max_abs_diff(next, p) < tol) return SteadyState{next, n};
    p = next;
  }
  throw convergence_error("no steady state within " + std::to_string(max_loops) +
                          " loops (pulse " + std::to_string(pulse_ns) + " ns, wait " +
                          std::to_string(wait_ns) + " ns, tol " + std::to_string(tol) + ")");
}

StateVector steady_state_eigen(const RateConstants& rates, double pulse_ns, double wait_ns) {
  const LoopPropagator lp = loop_propagator(rates, pulse_ns, wait_ns);
  const Matrix residual = lp.t - Matrix::identity(n_levels);

  // Rank 5 means a unique fixed direction; two or more vanishing pivots mean
  // the fixed space is degenerate and no single steady state exists.
  int tiny = 0;
  for (double piv : lu_pivot_magnitudes(residual))
    if (piv < 1e-9) ++tiny;
  if (tiny >= 2)
    throw degenerate_fixed_point("loop map has a multi-dimensional fixed space (pulse " +
                                 std::to_string(pulse_ns) + " ns, wait " +
                                 std::to_string(wait_ns) + " ns)");

  // The rows of (t - I) are linearly dependent, so the first equation can be
  // traded for the normalization sum P = 1.
  Matrix a = residual;
  for (int j = 0; j < n_levels; ++j) a(0, j) = 1.0;
  std::vector<double> rhs(n_levels, 0.0);
  rhs[0] = 1.0;
  const std::vector<double> x = solve_linear(a, rhs);

  StateVector p;
  for (int i = 0; i < n_levels; ++i) p[i] = x[static_cast<size_t>(i)];
  clamp_round_off(p);
  validate_state(p);

  const StateVector mapped = apply_propagator(lp.t, p);
  if (max_abs_diff(mapped, p) > 1e-10)
    throw invariant_violation("steady-state solve left a fixed-point residual of " +
                              std::to_string(max_abs_diff(mapped, p)));
  return p;
}

}  // namespace nvpump
