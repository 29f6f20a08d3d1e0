#include "nvpump/propagator.hpp"

#include <cmath>
#include <string>

#include "nvpump/errors.hpp"

namespace nvpump {

namespace {

void check_duration(double dt) {
  if (!(std::isfinite(dt) && dt >= 0.0))
    throw bad_parameter("duration must be >= 0 ns, got " + std::to_string(dt));
}

}  // namespace

void validate_propagator_matrix(const Matrix& t) {
  if (!all_finite(t)) throw invariant_violation("propagator has non-finite entries");
  for (int j = 0; j < n_levels; ++j) {
    double col = 0.0;
    for (int i = 0; i < n_levels; ++i) {
      const double v = t(i, j);
      if (v < -1e-12 || v > 1.0 + 1e-10)
        throw invariant_violation("propagator entry (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ") = " + std::to_string(v) +
                                  " outside [0, 1]");
      col += v;
    }
    if (std::abs(col - 1.0) > 1e-10)
      throw invariant_violation("propagator column " + std::to_string(j + 1) + " sums to " +
                                std::to_string(col) + ", expected 1");
  }
}

SegmentPropagator segment_propagator(const Generator& g, double dt_ns) {
  check_duration(dt_ns);
  Matrix t = expm(dt_ns * g.m);
  validate_propagator_matrix(t);
  return SegmentPropagator{std::move(t), dt_ns, g.laser_on};
}

AugmentedPropagator augmented_propagator(const Generator& g, double dt_ns,
                                         std::span<const std::array<double, n_levels>> weights) {
  check_duration(dt_ns);
  const int n_acc = static_cast<int>(weights.size());
  const int n = n_levels + n_acc;

  // dJ_i/dt = weights_i . P; the J rows feed nothing back.
  Matrix aug(n, n);
  for (int i = 0; i < n_levels; ++i)
    for (int j = 0; j < n_levels; ++j) aug(i, j) = g.m(i, j);
  for (int i = 0; i < n_acc; ++i)
    for (int j = 0; j < n_levels; ++j) aug(n_levels + i, j) = weights[i][static_cast<size_t>(j)];

  const Matrix e = expm(dt_ns * aug);
  if (!all_finite(e)) throw invariant_violation("augmented propagator is non-finite");

  AugmentedPropagator ap;
  ap.t = Matrix(n_levels, n_levels);
  for (int i = 0; i < n_levels; ++i)
    for (int j = 0; j < n_levels; ++j) ap.t(i, j) = e(i, j);
  validate_propagator_matrix(ap.t);
  ap.integral.resize(static_cast<size_t>(n_acc));
  for (int i = 0; i < n_acc; ++i)
    for (int j = 0; j < n_levels; ++j)
      ap.integral[static_cast<size_t>(i)][static_cast<size_t>(j)] = e(n_levels + i, j);
  ap.duration_ns = dt_ns;
  ap.laser_on = g.laser_on;
  return ap;
}

StateVector apply_propagator(const Matrix& t, const StateVector& p) {
  const double sum_in = p.sum();
  StateVector out;
  for (int i = 0; i < n_levels; ++i) {
    double v = 0.0;
    for (int j = 0; j < n_levels; ++j) v += t(i, j) * p[j];
    out[i] = v;
  }
  clamp_round_off(out);
  if (std::abs(out.sum() - sum_in) > 1e-10)
    throw invariant_violation("propagation changed total population by " +
                              std::to_string(out.sum() - sum_in));
  validate_state(out);
  return out;
}

StateVector apply_augmented(const AugmentedPropagator& ap, const StateVector& p,
                            std::span<Accumulator> accs) {
  for (size_t i = 0; i < accs.size(); ++i) {
    double gain = 0.0;
    for (int j = 0; j < n_levels; ++j) gain += ap.integral[i][static_cast<size_t>(j)] * p[j];
    accs[i].value += gain;
  }
  return apply_propagator(ap.t, p);
}

StateVector propagate(const Generator& g, const StateVector& p, double dt_ns) {
  validate_state(p);
  return apply_propagator(segment_propagator(g, dt_ns).t, p);
}

StateVector propagate_with_accumulators(const Generator& g, const StateVector& p, double dt_ns,
                                        std::span<Accumulator> accs) {
  validate_state(p);
  std::vector<std::array<double, n_levels>> weights;
  weights.reserve(accs.size());
  for (const Accumulator& a : accs) weights.push_back(a.weights);
  return apply_augmented(augmented_propagator(g, dt_ns, weights), p, accs);
}

std::array<double, n_levels> singlet_weights() { return {0.0, 0.0, 0.0, 0.0, 1.0, 1.0}; }

std::array<double, n_levels> emission_weights(const RateConstants& rates) {
  return {0.0, 0.0, rates.k31, rates.k42, 0.0, 0.0};
}

std::vector<TimedState> sample_trajectory(const Generator& g, const StateVector& p, double dt_ns,
                                          double sample_dt_ns) {
  check_duration(dt_ns);
  if (!(std::isfinite(sample_dt_ns) && sample_dt_ns > 0.0))
    throw bad_parameter("sample step must be > 0 ns, got " + std::to_string(sample_dt_ns));
  if (sample_dt_ns > dt_ns) throw bad_parameter("sample step exceeds the segment duration");
  validate_state(p);

  const SegmentPropagator step = segment_propagator(g, sample_dt_ns);
  const int n_steps = static_cast<int>(std::floor(dt_ns / sample_dt_ns + 1e-9));

  std::vector<TimedState> out;
  out.reserve(static_cast<size_t>(n_steps) + 2);
  out.push_back({0.0, p});
  StateVector cur = p;
  for (int k = 1; k <= n_steps; ++k) {
    cur = apply_propagator(step.t, cur);
    out.push_back({k * sample_dt_ns, cur});
  }
  const double remainder = dt_ns - n_steps * sample_dt_ns;
  if (remainder > 1e-9) {
    cur = apply_propagator(segment_propagator(g, remainder).t, cur);
    out.push_back({dt_ns, cur});
  } else {
    out.back().t_ns = dt_ns;  // absorb the sub-round-off remainder
  }
  return out;
}

}  // namespace nvpump
