#include "nvpump/figures.hpp"

#include <filesystem>

#include "nvpump/errors.hpp"
#include "nvpump/io.hpp"
#include "parallel.hpp"

namespace nvpump {

namespace {

std::vector<double> linear_grid(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

}  // namespace

std::vector<std::string> write_figures(const RunConfig& cfg, const std::string& dir,
                                       int threads) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw error("cannot create output directory \"" + dir + "\": " + ec.message());

  const RateConstants rates = power_scale(cfg.rates, cfg.fixed.power);
  const double wait_ns = cfg.fixed.wait_ns;
  const int loops = cfg.fixed.loops;

  // Per-loop records for three representative pulse widths.
  const std::vector<double> loop_pulses{4.0, 50.0, 200.0};
  std::vector<SimulationResult> loop_runs(loop_pulses.size());
  detail::parallel_for(static_cast<int>(loop_pulses.size()), threads, [&](int i) {
    loop_runs[static_cast<size_t>(i)] =
        run_schedule(rates, make_pulse_train(loop_pulses[static_cast<size_t>(i)], wait_ns, loops),
                     thermal_state(), true, cfg.tol.steady_tol);
  });

  // Saturated polarization vs pulse width.
  const std::vector<double> pulse_grid = linear_grid(4.0, 200.0, 4.0);
  std::vector<double> pulse_pol(pulse_grid.size());
  detail::parallel_for(static_cast<int>(pulse_grid.size()), threads, [&](int i) {
    pulse_pol[static_cast<size_t>(i)] =
        polarization(steady_state_iterative(rates, pulse_grid[static_cast<size_t>(i)], wait_ns,
                                            cfg.tol.steady_tol, cfg.tol.max_loops)
                         .state);
  });

  // Saturated polarization vs wait time at 4 ns pulses.
  const std::vector<double> wait_grid = linear_grid(10.0, 350.0, 10.0);
  std::vector<double> wait_pol(wait_grid.size());
  detail::parallel_for(static_cast<int>(wait_grid.size()), threads, [&](int i) {
    wait_pol[static_cast<size_t>(i)] =
        polarization(steady_state_iterative(rates, 4.0, wait_grid[static_cast<size_t>(i)],
                                            cfg.tol.steady_tol, cfg.tol.max_loops)
                         .state);
  });

  // Per-steady-loop singlet dwell vs pulse width.
  const std::vector<DwellPoint> dwell =
      dwell_vs_polarization(rates, pulse_grid, wait_ns, cfg.tol, threads);

  const std::vector<std::string> names{"fig2a.csv", "fig2c.csv", "fig3a.csv", "fig4a.csv",
                                       "fig4b.csv", "fig4c.csv", "fig4d.csv"};

  CsvBuilder fig2a({"pulse_ns", "loop", "polarization"});
  for (size_t i = 0; i < loop_pulses.size(); ++i)
    for (const LoopRecord& rec : loop_runs[i].per_loop)
      fig2a.add_row({loop_pulses[i], static_cast<double>(rec.loop), rec.polarization});

  CsvBuilder fig2c({"pulse_ns", "polarization"});
  for (size_t i = 0; i < pulse_grid.size(); ++i) fig2c.add_row({pulse_grid[i], pulse_pol[i]});

  CsvBuilder fig3a({"wait_ns", "polarization"});
  for (size_t i = 0; i < wait_grid.size(); ++i) fig3a.add_row({wait_grid[i], wait_pol[i]});

  CsvBuilder fig4a({"pulse_ns", "loop", "p21", "p12"});
  for (size_t i = 0; i < loop_pulses.size(); ++i)
    for (const LoopRecord& rec : loop_runs[i].per_loop)
      fig4a.add_row({loop_pulses[i], static_cast<double>(rec.loop), rec.p21, rec.p12});

  CsvBuilder fig4b({"pulse_ns", "loop", "polarization", "net_transfer"});
  for (size_t i = 0; i < loop_pulses.size(); ++i)
    for (const LoopRecord& rec : loop_runs[i].per_loop)
      fig4b.add_row({loop_pulses[i], static_cast<double>(rec.loop), rec.polarization,
                     rec.p21 - rec.p12});

  CsvBuilder fig4c({"pulse_ns", "singlet_dwell_ns", "pulse_occupancy", "polarization"});
  for (const DwellPoint& d : dwell)
    fig4c.add_row({d.pulse_ns, d.dwell_ns, d.pulse_occupancy, d.polarization});

  CsvBuilder fig4d({"pulse_occupancy", "polarization"});
  for (const DwellPoint& d : dwell) fig4d.add_row({d.pulse_occupancy, d.polarization});

  const std::vector<const CsvBuilder*> tables{&fig2a, &fig2c, &fig3a, &fig4a,
                                              &fig4b, &fig4c, &fig4d};
  for (size_t i = 0; i < names.size(); ++i)
    write_text_file((fs::path(dir) / names[i]).string(), tables[i]->str());
  return names;
}

}  // namespace nvpump
