#pragma once

#include <span>
#include <vector>

#include "nvpump/propagator.hpp"

namespace nvpump {

// Polarization is the population of the ground m_s=0 level, P1.
double polarization(const StateVector& p);

// Instantaneous photon emission rate k31 P3 + k42 P4, ns^-1.
double fluorescence_rate(const StateVector& p, const RateConstants& rates);

struct ReadoutConfig {
  double t_read_ns = 300.0;     // width of the readout laser pulse
  double collection_eff = 1.0;  // detector scaling, in (0, 1]

  void validate() const;
};

// Expected photon signal of a readout pulse starting from p0:
// collection_eff * integral over [0, t_read] of the fluorescence rate under
// laser-on evolution. Computed through the augmented propagator, so there is
// no quadrature step involved.
double readout_counts(const RateConstants& rates, const StateVector& p0,
                      const ReadoutConfig& cfg);

// Readout counts are linear in the start state; the kernel is the row vector
// with counts = row . p0. Lets a theta sweep reuse one propagator.
struct ReadoutKernel {
  std::array<double, n_levels> row{};

  double operator()(const StateVector& p0) const;
};

ReadoutKernel readout_kernel(const RateConstants& rates, const ReadoutConfig& cfg);

// Resonant microwave rotation by angle theta between the ground sublevels,
// modeled as a classical population exchange:
//   P1' = P1 cos^2(theta/2) + P2 sin^2(theta/2), and symmetrically for P2.
// Requires a ground-supported state (P3..P6 below 1e-6 in total).
StateVector rabi_signal(const StateVector& p, double theta);

// Laser-off relaxation of leftover excited/singlet population back into the
// ground manifold; errors if wait_ns leaves more than 1e-9 outside it.
StateVector relax_to_ground(const RateConstants& rates, const StateVector& p,
                            double wait_ns = 5000.0);

struct RabiPoint {
  double theta = 0.0;
  double counts = 0.0;
};

// Least-squares fit of counts(theta) = mean + amplitude * cos(theta).
struct CosineFit {
  double mean = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;  // 2-norm of the fit residual
};

CosineFit fit_cosine(std::span<const RabiPoint> points);

struct RabiCurve {
  std::vector<RabiPoint> points;
  double i_max = 0.0;     // extremes of the fitted cosine
  double i_min = 0.0;
  double contrast = 0.0;  // (i_max - i_min) / (i_max + i_min), signed with the amplitude
  double fit_residual = 0.0;
};

// Sweeps the rotation angle over [0, 2pi) in 64 steps, reads out after each
// rotation, fits the cosine and reports the fitted extremes and contrast.
RabiCurve rabi_contrast(const RateConstants& rates, const StateVector& p_polarized,
                        const ReadoutConfig& cfg);

}  // namespace nvpump
