#include "nvpump/sweep.hpp"

#include <cmath>
#include <string>

#include "nvpump/errors.hpp"
#include "parallel.hpp"

namespace nvpump {

namespace {

constexpr double pulse_min = 0.1, pulse_max = 1000.0;
constexpr double wait_min = 0.0, wait_max = 1e4;
constexpr double loops_min = 1.0, loops_max = 1e5;
constexpr double power_min_excl = 0.0, power_max = 100.0;

void check_range(const char* name, double v, double lo, double hi, bool lo_exclusive = false) {
  const bool ok = std::isfinite(v) && (lo_exclusive ? v > lo : v >= lo) && v <= hi;
  if (!ok)
    throw bad_parameter(std::string(name) + " = " + std::to_string(v) + " outside " +
                        (lo_exclusive ? "(" : "[") + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
}

}  // namespace

void Tolerances::validate() const {
  if (!(std::isfinite(steady_tol) && steady_tol > 0.0))
    throw bad_parameter("steady-state tolerance must be > 0");
  if (max_loops < 1) throw bad_parameter("steady-state loop budget must be >= 1");
}

void FixedParams::validate() const {
  check_range("pulse width", pulse_ns, pulse_min, pulse_max);
  check_range("wait time", wait_ns, wait_min, wait_max);
  check_range("loop count", loops, loops_min, loops_max);
  check_range("readout width", t_read_ns, 0.0, 1e6, true);
  check_range("power scale", power, power_min_excl, power_max, true);
}

const char* sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::pulse_width: return "pulse_ns";
    case SweepVariable::wait_time: return "wait_ns";
    case SweepVariable::loop_count: return "loops";
    case SweepVariable::power: return "power_scale";
  }
  return "?";
}

void SweepSpec::validate() const {
  fixed.validate();
  if (values.empty()) throw bad_parameter("sweep needs at least one value");
  for (double v : values) {
    switch (variable) {
      case SweepVariable::pulse_width: check_range("pulse width", v, pulse_min, pulse_max); break;
      case SweepVariable::wait_time: check_range("wait time", v, wait_min, wait_max); break;
      case SweepVariable::loop_count:
        check_range("loop count", v, loops_min, loops_max);
        if (v != std::floor(v))
          throw bad_parameter("loop count must be an integer, got " + std::to_string(v));
        break;
      case SweepVariable::power: check_range("power scale", v, power_min_excl, power_max, true); break;
    }
  }
}

RateConstants power_scale(const RateConstants& rates, double s) {
  if (!(std::isfinite(s) && s > 0.0))
    throw bad_parameter("power scale must be > 0, got " + std::to_string(s));
  RateConstants out = rates;
  out.k13 *= s;
  out.k24 *= s;
  return out;
}

LoopDwell steady_loop_dwell(const RateConstants& rates, const StateVector& state,
                            double pulse_ns, double wait_ns) {
  const std::array<double, n_levels> w = singlet_weights();
  std::array<Accumulator, 1> acc{Accumulator{w}};
  StateVector p = propagate_with_accumulators(build_generator(rates, true), state, pulse_ns, acc);
  const double pulse_part = acc[0].value;
  propagate_with_accumulators(build_generator(rates, false), p, wait_ns, acc);
  return LoopDwell{pulse_part, acc[0].value};
}

namespace {

SweepRow eval_sweep_point(const RateConstants& base, const SweepSpec& spec, double value,
                          const Tolerances& tol) {
  FixedParams f = spec.fixed;
  double power = f.power;
  switch (spec.variable) {
    case SweepVariable::pulse_width: f.pulse_ns = value; break;
    case SweepVariable::wait_time: f.wait_ns = value; break;
    case SweepVariable::loop_count: f.loops = static_cast<int>(value); break;
    case SweepVariable::power: power = value; break;
  }
  const RateConstants rates = power_scale(base, power);
  const ReadoutConfig readout{f.t_read_ns, 1.0};

  SweepRow row;
  row.value = value;
  if (spec.variable == SweepVariable::loop_count) {
    const SimulationResult res = run_schedule(
        rates, make_pulse_train(f.pulse_ns, f.wait_ns, f.loops), thermal_state(), false,
        tol.steady_tol);
    row.polarization = res.polarization;
    row.singlet_dwell_ns = res.singlet_dwell_ns;
    row.loops = res.converged_at.value_or(f.loops);
    row.contrast = rabi_contrast(rates, relax_to_ground(rates, res.final_state), readout).contrast;
  } else {
    const SteadyState steady =
        steady_state_iterative(rates, f.pulse_ns, f.wait_ns, tol.steady_tol, tol.max_loops);
    row.polarization = polarization(steady.state);
    row.singlet_dwell_ns = steady_loop_dwell(rates, steady.state, f.pulse_ns, f.wait_ns).total_ns;
    row.loops = steady.loops_used;
    row.contrast =
        rabi_contrast(rates, relax_to_ground(rates, steady.state), readout).contrast;
  }
  return row;
}

}  // namespace

SweepResult sweep(const RateConstants& rates, const SweepSpec& spec, const Tolerances& tol,
                  int threads) {
  rates.validate();
  spec.validate();
  tol.validate();

  SweepResult result;
  result.spec = spec;
  result.rows.resize(spec.values.size());
  detail::parallel_for(static_cast<int>(spec.values.size()), threads, [&](int i) {
    const double value = spec.values[static_cast<size_t>(i)];
    try {
      result.rows[static_cast<size_t>(i)] = eval_sweep_point(rates, spec, value, tol);
    } catch (const convergence_error& e) {
      throw convergence_error("sweep " + std::string(sweep_variable_name(spec.variable)) + " = " +
                              std::to_string(value) + ": " + e.what());
    }
  });
  return result;
}

std::vector<DwellPoint> dwell_vs_polarization(const RateConstants& rates,
                                              std::span<const double> pulse_values,
                                              double wait_ns, const Tolerances& tol,
                                              int threads) {
  rates.validate();
  tol.validate();
  check_range("wait time", wait_ns, wait_min, wait_max);
  if (pulse_values.empty()) throw bad_parameter("dwell sweep needs at least one pulse width");
  for (double v : pulse_values) check_range("pulse width", v, pulse_min, pulse_max);

  std::vector<DwellPoint> out(pulse_values.size());
  detail::parallel_for(static_cast<int>(pulse_values.size()), threads, [&](int i) {
    const double pulse_ns = pulse_values[static_cast<size_t>(i)];
    const SteadyState steady =
        steady_state_iterative(rates, pulse_ns, wait_ns, tol.steady_tol, tol.max_loops);
    const LoopDwell dwell = steady_loop_dwell(rates, steady.state, pulse_ns, wait_ns);
    out[static_cast<size_t>(i)] = DwellPoint{pulse_ns, dwell.total_ns,
                                             dwell.pulse_ns_part / pulse_ns,
                                             polarization(steady.state)};
  });
  return out;
}

namespace {

struct Candidate {
  double pulse_ns = 0.0;
  double wait_ns = 0.0;
  double polarization = -1.0;
};

// Higher polarization wins; exact ties prefer the smaller pulse, then the
// smaller wait.
bool better(const Candidate& a, const Candidate& b) {
  if (a.polarization != b.polarization) return a.polarization > b.polarization;
  if (a.pulse_ns != b.pulse_ns) return a.pulse_ns < b.pulse_ns;
  return a.wait_ns < b.wait_ns;
}

}  // namespace

Optimum optimize_schedule(const RateConstants& rates, Bounds pulse_bounds, Bounds wait_bounds) {
  rates.validate();
  check_range("pulse lower bound", pulse_bounds.lo, pulse_min, pulse_max);
  check_range("pulse upper bound", pulse_bounds.hi, pulse_min, pulse_max);
  check_range("wait lower bound", wait_bounds.lo, wait_min, wait_max);
  check_range("wait upper bound", wait_bounds.hi, wait_min, wait_max);
  if (pulse_bounds.lo > pulse_bounds.hi || wait_bounds.lo > wait_bounds.hi)
    throw bad_parameter("optimizer bounds must satisfy lo <= hi");

  Candidate best;
  auto evaluate = [&](double pulse_ns, double wait_ns) {
    const Candidate c{pulse_ns, wait_ns,
                      polarization(steady_state_eigen(rates, pulse_ns, wait_ns))};
    if (better(c, best)) best = c;
    return c.polarization;
  };

  constexpr int grid_n = 16;
  auto grid_value = [](const Bounds& b, int i) {
    return b.lo + (b.hi - b.lo) * i / (grid_n - 1);
  };
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) evaluate(grid_value(pulse_bounds, i), grid_value(wait_bounds, j));

  constexpr double resolution = 0.1;  // ns
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;

  // Golden-section over one axis inside the cell around the current best.
  auto refine = [&](bool pulse_axis, const Bounds& bounds, double cell) {
    const double center = pulse_axis ? best.pulse_ns : best.wait_ns;
    double a = std::max(bounds.lo, center - cell);
    double b = std::min(bounds.hi, center + cell);
    if (b - a <= resolution) return;
    auto fx = [&](double x) {
      return pulse_axis ? evaluate(x, best.wait_ns) : evaluate(best.pulse_ns, x);
    };
    double c = b - golden * (b - a);
    double d = a + golden * (b - a);
    double fc = fx(c), fd = fx(d);
    while (b - a > resolution) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - golden * (b - a);
        fc = fx(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + golden * (b - a);
        fd = fx(d);
      }
    }
  };

  const double pulse_cell = (pulse_bounds.hi - pulse_bounds.lo) / (grid_n - 1);
  const double wait_cell = (wait_bounds.hi - wait_bounds.lo) / (grid_n - 1);
  for (int pass = 0; pass < 2; ++pass) {
    refine(true, pulse_bounds, pulse_cell);
    refine(false, wait_bounds, wait_cell);
  }

  return Optimum{best.pulse_ns, best.wait_ns, best.polarization};
}

}  // namespace nvpump
