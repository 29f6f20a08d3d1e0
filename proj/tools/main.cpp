// Batch CLI for the six-level N-V optical pumping simulator.

#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nvpump/errors.hpp"
#include "nvpump/figures.hpp"
#include "nvpump/io.hpp"

namespace {

using namespace nvpump;
using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::string out;
  std::string format;
  int threads = 1;
  std::optional<double> pulse_ns, wait_ns, t_read_ns, power, tol;
  std::optional<int> loops, max_loops;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--out", c.out, "output path (default: stdout)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", c.threads, "worker count for sweeps")->check(CLI::Range(1, 256));
  cmd->add_option("--ts", c.pulse_ns, "laser pulse width, ns");
  cmd->add_option("--tw", c.wait_ns, "wait time between pulses, ns");
  cmd->add_option("--n", c.loops, "number of pulse/wait loops");
  cmd->add_option("--t-read", c.t_read_ns, "readout pulse width, ns");
  cmd->add_option("--power", c.power, "laser power scale on the pumping rates");
  cmd->add_option("--tol", c.tol, "steady-state tolerance");
  cmd->add_option("--max-loops", c.max_loops, "steady-state loop budget");
}

RunConfig resolve_config(const CommonOpts& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config_file(c.config_path);
  if (c.pulse_ns) cfg.fixed.pulse_ns = *c.pulse_ns;
  if (c.wait_ns) cfg.fixed.wait_ns = *c.wait_ns;
  if (c.loops) cfg.fixed.loops = *c.loops;
  if (c.t_read_ns) cfg.fixed.t_read_ns = *c.t_read_ns;
  if (c.power) cfg.fixed.power = *c.power;
  if (c.tol) cfg.tol.steady_tol = *c.tol;
  if (c.max_loops) cfg.tol.max_loops = *c.max_loops;
  if (!c.format.empty()) cfg.output.format = c.format;
  if (!c.out.empty()) cfg.output.path = c.out;
  cfg.fixed.validate();
  cfg.tol.validate();
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.path.empty())
    std::cout << text;
  else
    write_text_file(cfg.output.path, text);
}

void emit_json(const RunConfig& cfg, const std::string& command, json data) {
  json doc{{"meta", meta_json(cfg, command)}, {"data", std::move(data)}};
  emit(cfg, doc.dump(2) + "\n");
}

RateConstants effective_rates(const RunConfig& cfg) {
  return power_scale(cfg.rates, cfg.fixed.power);
}

// --- subcommands ------------------------------------------------------

void run_steady(const CommonOpts& opts) {
  const RunConfig cfg = resolve_config(opts);
  const SteadyState s = steady_state_iterative(effective_rates(cfg), cfg.fixed.pulse_ns,
                                               cfg.fixed.wait_ns, cfg.tol.steady_tol,
                                               cfg.tol.max_loops);
  if (cfg.output.format == "json") {
    emit_json(cfg, "steady",
              json{{"state", state_json(s.state)},
                   {"polarization", round12(polarization(s.state))},
                   {"loops_used", s.loops_used}});
    return;
  }
  CsvBuilder csv({"p1", "p2", "p3", "p4", "p5", "p6", "polarization", "loops_used"});
  csv.add_row({s.state[0], s.state[1], s.state[2], s.state[3], s.state[4], s.state[5],
               polarization(s.state), static_cast<double>(s.loops_used)});
  emit(cfg, csv.str());
}

void run_simulate(const CommonOpts& opts, double sample_dt, bool track_loops) {
  const RunConfig cfg = resolve_config(opts);
  const RateConstants rates = effective_rates(cfg);
  const PulseSchedule sched =
      make_pulse_train(cfg.fixed.pulse_ns, cfg.fixed.wait_ns, cfg.fixed.loops);
  const SimulationResult res =
      run_schedule(rates, sched, thermal_state(), track_loops, cfg.tol.steady_tol);
  const auto trajectory = sample_schedule(rates, sched, thermal_state(), sample_dt);

  if (cfg.output.format == "json") {
    json traj = json::array();
    for (const TimedState& ts : trajectory)
      traj.push_back({{"t_ns", round12(ts.t_ns)}, {"state", state_json(ts.state)}});
    emit_json(cfg, "simulate", json{{"trajectory", traj}, {"result", result_json(res)}});
    return;
  }

  CsvBuilder csv({"t_ns", "p1", "p2", "p3", "p4", "p5", "p6"});
  for (const TimedState& ts : trajectory)
    csv.add_row({ts.t_ns, ts.state[0], ts.state[1], ts.state[2], ts.state[3], ts.state[4],
                 ts.state[5]});
  emit(cfg, csv.str());
  if (!cfg.output.path.empty()) {
    CsvBuilder summary({"polarization", "singlet_dwell_ns", "photon_integral", "converged_at"});
    summary.add_row({res.polarization, res.singlet_dwell_ns, res.photon_integral,
                     static_cast<double>(res.converged_at.value_or(0))});
    std::cout << summary.str();
  }
}

void run_sweep(const CommonOpts& opts, const std::string& var, std::vector<double> values) {
  const RunConfig cfg = resolve_config(opts);
  SweepSpec spec;
  if (var == "ts") spec.variable = SweepVariable::pulse_width;
  else if (var == "tw") spec.variable = SweepVariable::wait_time;
  else if (var == "n") spec.variable = SweepVariable::loop_count;
  else if (var == "power") spec.variable = SweepVariable::power;
  else throw bad_parameter("unknown sweep variable \"" + var + "\" (ts, tw, n, power)");
  spec.values = std::move(values);
  spec.fixed = cfg.fixed;

  const SweepResult res = sweep(cfg.rates, spec, cfg.tol, opts.threads);
  if (cfg.output.format == "json") {
    emit_json(cfg, "sweep", sweep_json(res));
    return;
  }
  CsvBuilder csv({sweep_variable_name(spec.variable), "polarization", "contrast",
                  "singlet_dwell_ns", "loops_to_converge"});
  for (const SweepRow& row : res.rows)
    csv.add_row({row.value, row.polarization, row.contrast, row.singlet_dwell_ns,
                 static_cast<double>(row.loops)});
  emit(cfg, csv.str());
}

void run_rabi(const CommonOpts& opts, double collection_eff) {
  const RunConfig cfg = resolve_config(opts);
  const RateConstants rates = effective_rates(cfg);
  const SteadyState steady = steady_state_iterative(
      rates, cfg.fixed.pulse_ns, cfg.fixed.wait_ns, cfg.tol.steady_tol, cfg.tol.max_loops);
  const StateVector ground = relax_to_ground(rates, steady.state);
  const RabiCurve curve =
      rabi_contrast(rates, ground, ReadoutConfig{cfg.fixed.t_read_ns, collection_eff});

  if (cfg.output.format == "json") {
    json data = rabi_json(curve);
    data["polarization_in"] = round12(polarization(ground));
    emit_json(cfg, "rabi", std::move(data));
    return;
  }
  CsvBuilder csv({"theta_rad", "counts"});
  for (const RabiPoint& pt : curve.points) csv.add_row({pt.theta, pt.counts});
  emit(cfg, csv.str());
  if (!cfg.output.path.empty()) {
    CsvBuilder summary({"i_max", "i_min", "contrast", "fit_residual", "polarization_in"});
    summary.add_row({curve.i_max, curve.i_min, curve.contrast, curve.fit_residual,
                     polarization(ground)});
    std::cout << summary.str();
  }
}

void run_optimize(const CommonOpts& opts, Bounds pulse_bounds, Bounds wait_bounds) {
  const RunConfig cfg = resolve_config(opts);
  const Optimum best = optimize_schedule(effective_rates(cfg), pulse_bounds, wait_bounds);
  if (cfg.output.format == "json") {
    emit_json(cfg, "optimize",
              json{{"pulse_ns", round12(best.pulse_ns)},
                   {"wait_ns", round12(best.wait_ns)},
                   {"polarization", round12(best.polarization)}});
    return;
  }
  CsvBuilder csv({"pulse_ns", "wait_ns", "polarization"});
  csv.add_row({best.pulse_ns, best.wait_ns, best.polarization});
  emit(cfg, csv.str());
}

void run_figures(const CommonOpts& opts) {
  const RunConfig cfg = resolve_config(opts);
  if (cfg.output.path.empty())
    throw bad_parameter("figures needs --out <directory> (or output.path in the config)");
  for (const std::string& name : write_figures(cfg, cfg.output.path, opts.threads))
    std::cout << name << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic six-level N-V optical pumping simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  double sample_dt = 1.0;
  bool track_loops = false;
  std::string sweep_var;
  std::vector<double> sweep_values;
  double collection_eff = 1.0;
  Bounds pulse_bounds{4.0, 200.0};
  Bounds wait_bounds{100.0, 350.0};

  CLI::App* simulate = app.add_subcommand("simulate", "run one pulse train, emit trajectory");
  add_common(simulate, opts);
  simulate->add_option("--sample-dt", sample_dt, "trajectory sample step, ns")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--track-loops", track_loops, "record per-loop transfer in json output");

  CLI::App* steady = app.add_subcommand("steady", "steady state of one (pulse, wait) loop");
  add_common(steady, opts);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter");
  add_common(sweep_cmd, opts);
  sweep_cmd->add_option("--var", sweep_var, "ts, tw, n, or power")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');

  CLI::App* rabi = app.add_subcommand("rabi", "polarize, rotate, read out");
  add_common(rabi, opts);
  rabi->add_option("--collection-eff", collection_eff, "detector collection efficiency");

  CLI::App* optimize = app.add_subcommand("optimize", "maximize steady-state polarization");
  add_common(optimize, opts);
  optimize->add_option("--ts-min", pulse_bounds.lo, "pulse width lower bound, ns");
  optimize->add_option("--ts-max", pulse_bounds.hi, "pulse width upper bound, ns");
  optimize->add_option("--tw-min", wait_bounds.lo, "wait time lower bound, ns");
  optimize->add_option("--tw-max", wait_bounds.hi, "wait time upper bound, ns");

  CLI::App* figures = app.add_subcommand("figures", "write every simulated dataset as CSV");
  add_common(figures, opts);

  simulate->callback([&] { run_simulate(opts, sample_dt, track_loops); });
  steady->callback([&] { run_steady(opts); });
  sweep_cmd->callback([&] { run_sweep(opts, sweep_var, sweep_values); });
  rabi->callback([&] { run_rabi(opts, collection_eff); });
  optimize->callback([&] { run_optimize(opts, pulse_bounds, wait_bounds); });
  figures->callback([&] { run_figures(opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const config_error& e) {
    std::cerr << "nvpump: config: " << e.what() << "\n";
    return 2;
  } catch (const bad_parameter& e) {
    std::cerr << "nvpump: usage: " << e.what() << "\n";
    return 2;
  } catch (const invalid_rate_error& e) {
    std::cerr << "nvpump: config: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "nvpump: computation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "nvpump: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
