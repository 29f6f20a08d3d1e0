#pragma once

#include <span>
#include <vector>

#include "nvpump/model.hpp"

namespace nvpump {

// Linear map advancing populations by a fixed time under one generator:
// P(t0 + dt) = t * P(t0). Column-stochastic within 1e-10.
struct SegmentPropagator {
  Matrix t;  // 6x6
  double duration_ns = 0.0;
  bool laser_on = false;
};

// Time integral of a fixed linear function of the state:
// value += integral of (weights . P(t)) dt over each propagated segment.
struct Accumulator {
  std::array<double, n_levels> weights{};
  double value = 0.0;
};

// Propagator together with the exact integral rows for a set of accumulator
// weights, obtained by exponentiating the augmented generator
// [[m, 0], [weights, 0]]. Row i of `integral` maps a start state to the
// integral gained by accumulator i over the segment.
struct AugmentedPropagator {
  Matrix t;                      // 6x6 state block
  std::vector<std::array<double, n_levels>> integral;
  double duration_ns = 0.0;
  bool laser_on = false;
};

SegmentPropagator segment_propagator(const Generator& g, double dt_ns);

// Enforces the propagator invariants: finite entries inside [0, 1] up to
// round-off slack, column sums within 1e-10 of 1.
void validate_propagator_matrix(const Matrix& t);

AugmentedPropagator augmented_propagator(const Generator& g, double dt_ns,
                                         std::span<const std::array<double, n_levels>> weights);

// Applies a column-stochastic map to a state; clamps round-off negatives and
// enforces conservation to 1e-10.
StateVector apply_propagator(const Matrix& t, const StateVector& p);

StateVector apply_augmented(const AugmentedPropagator& ap, const StateVector& p,
                            std::span<Accumulator> accs);

StateVector propagate(const Generator& g, const StateVector& p, double dt_ns);

// As propagate, additionally advancing every accumulator by its exact
// segment integral (no quadrature step size involved).
StateVector propagate_with_accumulators(const Generator& g, const StateVector& p, double dt_ns,
                                        std::span<Accumulator> accs);

// Accumulator weights for time spent in the metastable singlets (P5 + P6).
std::array<double, n_levels> singlet_weights();

// Accumulator weights for the photon emission rate k31 P3 + k42 P4.
std::array<double, n_levels> emission_weights(const RateConstants& rates);

struct TimedState {
  double t_ns = 0.0;
  StateVector state;
};

// States at 0, sample_dt, 2*sample_dt, ..., dt; the final instant dt is always
// included. Requires 0 < sample_dt <= dt.
std::vector<TimedState> sample_trajectory(const Generator& g, const StateVector& p, double dt_ns,
                                          double sample_dt_ns);

}  // namespace nvpump
