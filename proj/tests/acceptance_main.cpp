// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL line;
// the process exits nonzero if any fails. Slowest piece is the RK4
// cross-check, which replays 20 random propagations at a 1e-4 ns step.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nvpump/errors.hpp"
#include "nvpump/figures.hpp"
#include "nvpump/io.hpp"
#include "oracle.hpp"
#include "reference_values.hpp"

namespace fs = std::filesystem;
using namespace nvpump;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail) {
  std::printf("criterion %2d: %s  %s (%s)\n", id, pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

StateVector ground_state(double p1) {
  StateVector p{};
  p[0] = p1;
  p[1] = 1.0 - p1;
  return p;
}

double linear_r2(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return sxy * sxy / (sxx * syy);
}

const std::vector<double> pulse_sweep{4, 10, 20, 50, 100, 200};

// 1. Every intermediate state of a full figures run conserves population to
//    1e-9 and stays above -1e-12; under a minute of wall time.
void criterion_1(const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  state_checks.store(0);
  bool pass = true;
  std::string note;
  try {
    write_figures(RunConfig{}, (dir / "figs_c1").string());
  } catch (const nvpump::error& e) {
    pass = false;
    note = e.what();
  }
  const long checks = state_checks.load();
  const double secs = seconds_since(t0);
  if (checks <= 0) pass = false;
  if (secs >= 60.0) pass = false;
  report(1, pass, "conservation and positivity across a figures run",
         note.empty() ? fmt("%ld states checked in %.1f s", checks, secs) : note);
}

// 2. Matrix-exponential propagation matches fixed-step RK4 (1e-4 ns) within
//    1e-8 on 20 random (generator, state, duration <= 1 us) cases.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(20260808);
  auto draw_rate = [&](double scale) {
    std::uniform_real_distribution<double> u(0.0, 1.2 * std::max(scale, 0.1));
    return u(rng);
  };
  std::uniform_real_distribution<double> dur(0.0, 1000.0);
  std::exponential_distribution<double> amp(1.0);

  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const RateConstants d;
    RateConstants r;
    r.k13 = draw_rate(d.k13);
    r.k24 = draw_rate(d.k24);
    r.k31 = draw_rate(d.k31);
    r.k42 = draw_rate(d.k42);
    r.k32 = draw_rate(d.k32);
    r.k41 = draw_rate(d.k41);
    r.k35 = draw_rate(d.k35);
    r.k45 = draw_rate(d.k45);
    r.k56 = draw_rate(d.k56);
    r.k61 = draw_rate(d.k61);
    r.k62 = draw_rate(d.k62);
    const Generator g = build_generator(r, trial % 2 == 0);

    StateVector p;
    double sum = 0.0;
    for (int i = 0; i < n_levels; ++i) {
      p[i] = amp(rng);
      sum += p[i];
    }
    for (int i = 0; i < n_levels; ++i) p[i] /= sum;
    p[0] += 1.0 - p.sum();

    const double dt = dur(rng);
    const StateVector out = propagate(g, p, dt);
    const oracle::Vec6 ref =
        oracle::rk4_propagate(g.m, {p[0], p[1], p[2], p[3], p[4], p[5]}, dt);
    for (int i = 0; i < n_levels; ++i)
      worst = std::max(worst, std::abs(out[i] - ref[static_cast<size_t>(i)]));
  }
  const double secs = seconds_since(t0);
  report(2, worst < 1e-8 && secs < 300.0, "matrix exponential vs fixed-step RK4",
         fmt("max |diff| = %.2e over 20 cases, %.1f s", worst, secs));
}

// 3. Direct and iterated fixed points agree on a 5x5 (pulse, wait) grid.
void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double ts = 4.0 + (200.0 - 4.0) * i / 4.0;
      const double tw = 50.0 + (350.0 - 50.0) * j / 4.0;
      const StateVector eig = steady_state_eigen(RateConstants{}, ts, tw);
      const SteadyState it = steady_state_iterative(RateConstants{}, ts, tw);
      worst = std::max(worst, max_abs_diff(eig, it.state));
    }
  }
  const double secs = seconds_since(t0);
  report(3, worst < 1e-8 && secs < 60.0, "direct vs iterated steady states on a 5x5 grid",
         fmt("max |diff| = %.2e, %.1f s", worst, secs));
}

// 4. Saturated polarization falls strictly as the pulse widens, with a
//    visible gap between 4 ns and 200 ns.
void criterion_4() {
  std::vector<double> pol;
  for (double ts : pulse_sweep)
    pol.push_back(polarization(steady_state_iterative(RateConstants{}, ts, 150.0).state));
  bool falling = true;
  for (size_t i = 1; i < pol.size(); ++i) falling = falling && pol[i] < pol[i - 1];
  const double gap = pol.front() - pol.back();
  report(4, falling && gap > 0.01, "polarization falls with pulse width",
         fmt("strictly falling = %s, pol(4) - pol(200) = %.4f", falling ? "yes" : "no", gap));
}

// 5. Wide pulses lead within the first 20 loops; narrow pulses win at
//    saturation.
void criterion_5() {
  const SimulationResult fine =
      run_schedule(RateConstants{}, make_pulse_train(4.0, 150.0, 20), thermal_state(), true);
  const SimulationResult coarse =
      run_schedule(RateConstants{}, make_pulse_train(200.0, 150.0, 20), thermal_state(), true);
  int lead_at = 0;
  for (size_t i = 0; i < 20; ++i) {
    if (coarse.per_loop[i].polarization > fine.per_loop[i].polarization) {
      lead_at = static_cast<int>(i) + 1;
      break;
    }
  }
  const double fine_sat =
      polarization(steady_state_iterative(RateConstants{}, 4.0, 150.0).state);
  const double coarse_sat =
      polarization(steady_state_iterative(RateConstants{}, 200.0, 150.0).state);
  report(5, lead_at > 0 && fine_sat > coarse_sat, "early crossover, late reversal",
         fmt("200 ns leads at loop %d; saturation %.4f vs %.4f", lead_at, fine_sat, coarse_sat));
}

// 6. Mechanism: positive net transfer decaying monotonically to balance;
//    per-steady-loop dwell rises with pulse width; polarization is linear in
//    the pulse-time singlet occupancy.
void criterion_6() {
  const SimulationResult run =
      run_schedule(RateConstants{}, make_pulse_train(4.0, 150.0, 600), thermal_state(), true);
  double prev = run.per_loop[0].p21 - run.per_loop[0].p12;
  const bool first_positive = prev > 0.0;
  bool monotone = true;
  for (size_t i = 1; i < run.per_loop.size(); ++i) {
    const double net = run.per_loop[i].p21 - run.per_loop[i].p12;
    if (net > prev + 1e-9) monotone = false;
    prev = net;
  }
  const bool balanced = std::abs(prev) < 1e-9;

  const auto points = dwell_vs_polarization(RateConstants{}, pulse_sweep, 150.0);
  bool dwell_rising = true;
  std::vector<double> occ, pol;
  for (size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && points[i].dwell_ns <= points[i - 1].dwell_ns) dwell_rising = false;
    occ.push_back(points[i].pulse_occupancy);
    pol.push_back(points[i].polarization);
  }
  const double r2 = linear_r2(occ, pol);

  report(6, first_positive && monotone && balanced && dwell_rising && r2 > 0.98,
         "transfer balance and dwell-time mechanism",
         fmt("net transfer %s, final |p21-p12| = %.1e, dwell rising = %s, R^2 = %.4f",
             monotone ? "monotone" : "NOT monotone", std::abs(prev),
             dwell_rising ? "yes" : "no", r2));
}

// 7. Saturated polarization is flat across the wait-time plateau.
void criterion_7() {
  double lo = 1.0, hi = 0.0;
  for (double tw = 100.0; tw <= 350.0; tw += 50.0) {
    const double p = polarization(steady_state_iterative(RateConstants{}, 4.0, tw).state);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  const double spread = (hi - lo) / hi;
  report(7, spread < 0.01, "wait-time plateau", fmt("relative spread = %.4f%%", 100.0 * spread));
}

// 8. Contrast is affine in the input polarization and favors the short-pulse
//    steady state.
void criterion_8() {
  const RateConstants r;
  const ReadoutConfig cfg{};
  std::vector<double> contrast;
  for (double p1 : {0.4, 0.6, 0.8, 1.0})
    contrast.push_back(rabi_contrast(r, ground_state(p1), cfg).contrast);
  const double d1 = contrast[1] - contrast[0];
  const double d2 = contrast[2] - contrast[1];
  const double d3 = contrast[3] - contrast[2];
  const bool affine = std::abs(d2 - d1) < 1e-9 && std::abs(d3 - d2) < 1e-9 && d1 > 0.0;

  const double fine =
      rabi_contrast(r, relax_to_ground(r, steady_state_iterative(r, 4.0, 150.0).state), cfg)
          .contrast;
  const double coarse =
      rabi_contrast(r, relax_to_ground(r, steady_state_iterative(r, 300.0, 150.0).state), cfg)
          .contrast;
  report(8, affine && fine > coarse, "contrast linearity and ordering",
         fmt("successive-difference spread = %.1e, contrast %.4f vs %.4f", std::abs(d3 - d1),
             fine, coarse));
}

// 9. A traditional single 300 ns pulse plus 1 us wait lands in the expected
//    polarization band and on the frozen reference value.
void criterion_9() {
  const SimulationResult r =
      run_schedule(RateConstants{}, make_pulse_train(300.0, 1000.0, 1), thermal_state());
  const bool in_band = r.polarization > 0.75 && r.polarization < 0.97;
  const double dev = std::abs(r.polarization - reference::single_pulse_pol_300ns_1us_wait);
  report(9, in_band && dev < 1e-8, "traditional single-pulse sanity band",
         fmt("polarization = %.6f, |dev from reference| = %.1e", r.polarization, dev));
}

// 10. Two figures runs write byte-identical files.
void criterion_10(const fs::path& dir) {
  const fs::path d1 = dir / "figs_run1", d2 = dir / "figs_run2";
  const auto names1 = write_figures(RunConfig{}, d1.string());
  const auto names2 = write_figures(RunConfig{}, d2.string());
  bool identical = names1 == names2;
  for (const std::string& name : names1)
    if (slurp(d1 / name) != slurp(d2 / name)) identical = false;
  report(10, identical, "figures output is deterministic",
         fmt("%zu files compared byte for byte", names1.size()));
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "nvpump_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  try {
    criterion_1(dir);
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(dir);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }

  std::printf("%s: %d of 10 criteria passed\n", g_failures == 0 ? "OK" : "FAILED",
              10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
