#include "nvpump/observables.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nvpump/errors.hpp"

namespace nvpump {

double polarization(const StateVector& p) { return p[0]; }

double fluorescence_rate(const StateVector& p, const RateConstants& rates) {
  return rates.k31 * p[2] + rates.k42 * p[3];
}

void ReadoutConfig::validate() const {
  if (!(std::isfinite(t_read_ns) && t_read_ns > 0.0))
    throw bad_parameter("readout width must be > 0 ns, got " + std::to_string(t_read_ns));
  if (!(std::isfinite(collection_eff) && collection_eff > 0.0 && collection_eff <= 1.0))
    throw bad_parameter("collection efficiency must be in (0, 1], got " +
                        std::to_string(collection_eff));
}

ReadoutKernel readout_kernel(const RateConstants& rates, const ReadoutConfig& cfg) {
  cfg.validate();
  const std::array<double, n_levels> w = emission_weights(rates);
  const AugmentedPropagator ap =
      augmented_propagator(build_generator(rates, true), cfg.t_read_ns, {&w, 1});
  ReadoutKernel k;
  for (int i = 0; i < n_levels; ++i)
    k.row[static_cast<size_t>(i)] = cfg.collection_eff * ap.integral[0][static_cast<size_t>(i)];
  return k;
}

double ReadoutKernel::operator()(const StateVector& p0) const {
  double c = 0.0;
  for (int i = 0; i < n_levels; ++i) c += row[static_cast<size_t>(i)] * p0[i];
  return c;
}

double readout_counts(const RateConstants& rates, const StateVector& p0,
                      const ReadoutConfig& cfg) {
  validate_state(p0);
  return readout_kernel(rates, cfg)(p0);
}

StateVector rabi_signal(const StateVector& p, double theta) {
  validate_state(p);
  const double leftover = p[2] + p[3] + p[4] + p[5];
  if (leftover > 1e-6)
    throw bad_parameter("rabi rotation needs a ground-supported state; excited/singlet "
                        "population is " +
                        std::to_string(leftover));
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const double c2 = c * c, s2 = s * s;
  StateVector out = p;
  out[0] = p[0] * c2 + p[1] * s2;
  out[1] = p[1] * c2 + p[0] * s2;
  return out;
}

StateVector relax_to_ground(const RateConstants& rates, const StateVector& p, double wait_ns) {
  if (!(std::isfinite(wait_ns) && wait_ns > 0.0))
    throw bad_parameter("relaxation wait must be > 0 ns");
  const StateVector out = propagate(build_generator(rates, false), p, wait_ns);
  const double leftover = out[2] + out[3] + out[4] + out[5];
  if (leftover > 1e-9)
    throw convergence_error("state kept " + std::to_string(leftover) +
                            " outside the ground manifold after " + std::to_string(wait_ns) +
                            " ns of laser-off relaxation");
  return out;
}

CosineFit fit_cosine(std::span<const RabiPoint> points) {
  const auto n = static_cast<double>(points.size());
  if (points.size() < 3) throw fit_error("cosine fit needs at least 3 points");

  double sc = 0.0, scc = 0.0, sy = 0.0, syc = 0.0;
  for (const RabiPoint& pt : points) {
    const double c = std::cos(pt.theta);
    sc += c;
    scc += c * c;
    sy += pt.counts;
    syc += pt.counts * c;
  }
  const double det = n * scc - sc * sc;
  if (det <= 0.0) throw fit_error("cosine fit is underdetermined by the theta grid");
  CosineFit fit;
  fit.mean = (scc * sy - sc * syc) / det;
  fit.amplitude = (n * syc - sc * sy) / det;
  double r2 = 0.0;
  for (const RabiPoint& pt : points) {
    const double e = pt.counts - fit.mean - fit.amplitude * std::cos(pt.theta);
    r2 += e * e;
  }
  fit.residual = std::sqrt(r2);
  return fit;
}

RabiCurve rabi_contrast(const RateConstants& rates, const StateVector& p_polarized,
                        const ReadoutConfig& cfg) {
  const ReadoutKernel kernel = readout_kernel(rates, cfg);

  RabiCurve curve;
  const int n_points = 64;
  curve.points.reserve(n_points);
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < n_points; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_points;
    const double counts = kernel(rabi_signal(p_polarized, theta));
    if (k == 0) lo = hi = counts;
    lo = std::min(lo, counts);
    hi = std::max(hi, counts);
    curve.points.push_back({theta, counts});
  }

  const CosineFit fit = fit_cosine(curve.points);
  if (fit.residual > 1e-6 * (hi - lo) + 1e-12 * (1.0 + std::abs(fit.mean)))
    throw fit_error("rabi signal is not a pure cosine: residual " +
                    std::to_string(fit.residual) + " over amplitude " + std::to_string(hi - lo));

  curve.i_max = fit.mean + std::abs(fit.amplitude);
  curve.i_min = fit.mean - std::abs(fit.amplitude);
  curve.contrast = fit.mean != 0.0 ? fit.amplitude / fit.mean : 0.0;
  curve.fit_residual = fit.residual;
  return curve;
}

}  // namespace nvpump
