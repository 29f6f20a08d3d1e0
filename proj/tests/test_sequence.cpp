#include <doctest.h>

#include <cmath>
#include <random>

#include "nvpump/errors.hpp"
#include "nvpump/observables.hpp"
#include "nvpump/sequence.hpp"
#include "oracle.hpp"
#include "reference_values.hpp"

using namespace nvpump;

namespace {

const RateConstants zero_rates{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};

}  // namespace

TEST_SUITE("sequence") {

TEST_CASE("pulse train alternates pulse and wait segments") {
  const PulseSchedule s = make_pulse_train(4.0, 150.0, 2);
  REQUIRE(s.segments.size() == 4);
  CHECK(s.segments[0].laser_on);
  CHECK(s.segments[0].duration_ns == 4.0);
  CHECK_FALSE(s.segments[1].laser_on);
  CHECK(s.segments[1].duration_ns == 150.0);
  CHECK(s.segments[2].laser_on);
  CHECK_FALSE(s.segments[3].laser_on);
  REQUIRE(s.train.has_value());
  CHECK(s.train->loops == 2);
  CHECK(s.total_ns() == 308.0);
}

TEST_CASE("single long pulse is the one-loop train") {
  const PulseSchedule s = make_pulse_train(300.0, 150.0, 1);
  REQUIRE(s.segments.size() == 2);
  CHECK(s.segments[0].duration_ns == 300.0);
}

TEST_CASE("saturation-scale trains build in full") {
  CHECK(make_pulse_train(4.0, 150.0, 400).segments.size() == 800);
}

TEST_CASE("degenerate train parameters are rejected") {
  CHECK_THROWS_AS(make_pulse_train(0.0, 150.0, 1), bad_parameter);
  CHECK_THROWS_AS(make_pulse_train(-4.0, 150.0, 1), bad_parameter);
  CHECK_THROWS_AS(make_pulse_train(4.0, -1.0, 1), bad_parameter);
  CHECK_THROWS_AS(make_pulse_train(4.0, 150.0, 0), bad_parameter);
}

TEST_CASE("with all rates zero nothing moves") {
  const SimulationResult r =
      run_schedule(zero_rates, make_pulse_train(4.0, 150.0, 1), thermal_state());
  CHECK(max_abs_diff(r.final_state, thermal_state()) == 0.0);
  CHECK(r.singlet_dwell_ns == 0.0);
  CHECK(r.photon_integral == 0.0);
}

TEST_CASE("saturated 4 ns train reproduces the RK4 reference polarization") {
  const SimulationResult r =
      run_schedule(RateConstants{}, make_pulse_train(4.0, 150.0, 400), thermal_state());
  CHECK(std::abs(r.polarization - reference::train_pol_pulse4_wait150_n400) < 1e-8);
  CHECK(r.converged_at.has_value());
}

TEST_CASE("short pulses out-polarize the traditional long pulse at saturation") {
  const SimulationResult short_train =
      run_schedule(RateConstants{}, make_pulse_train(4.0, 150.0, 800), thermal_state());
  const SimulationResult long_train =
      run_schedule(RateConstants{}, make_pulse_train(300.0, 150.0, 800), thermal_state());
  CHECK(short_train.polarization > long_train.polarization);
}

TEST_CASE("per-loop records track the run") {
  const SimulationResult r =
      run_schedule(RateConstants{}, make_pulse_train(4.0, 150.0, 50), thermal_state(), true);
  REQUIRE(r.per_loop.size() == 50);
  CHECK(r.per_loop.front().loop == 1);
  CHECK(r.per_loop.back().loop == 50);
  CHECK(r.per_loop.back().polarization == r.polarization);
}

TEST_CASE("loop propagator with no wait is the bare pulse map") {
  const LoopPropagator lp = loop_propagator(RateConstants{}, 17.0, 0.0);
  const SegmentPropagator pulse =
      segment_propagator(build_generator(RateConstants{}, true), 17.0);
  CHECK(max_abs_diff(lp.t, pulse.t) < 1e-14);
}

TEST_CASE("loop propagator columns are stochastic") {
  const LoopPropagator lp = loop_propagator(RateConstants{}, 4.0, 150.0);
  for (int j = 0; j < n_levels; ++j) {
    double col = 0.0;
    for (int i = 0; i < n_levels; ++i) col += lp.t(i, j);
    CHECK(std::abs(col - 1.0) < 1e-10);
  }
}

TEST_CASE("loop propagator matches RK4 integration column by column") {
  const Generator on = build_generator(RateConstants{}, true);
  const Generator off = build_generator(RateConstants{}, false);
  const LoopPropagator lp = loop_propagator(RateConstants{}, 4.0, 150.0);
  const Matrix ref = oracle::rk4_propagator(off.m, 150.0) * oracle::rk4_propagator(on.m, 4.0);
  CHECK(max_abs_diff(lp.t, ref) < 1e-8);
}

TEST_CASE("net ground transfer favors the bright state from thermal") {
  const LoopPropagator lp = loop_propagator(RateConstants{}, 4.0, 150.0);
  const Transfer t = loop_transfer(thermal_state(), lp);
  CHECK(t.p21 > t.p12);
  CHECK(t.p21 > 0.0);
}

TEST_CASE("identity loop transfers nothing") {
  const LoopPropagator lp = loop_propagator(zero_rates, 4.0, 150.0);
  const Transfer t = loop_transfer(thermal_state(), lp);
  CHECK(t.p21 == 0.0);
  CHECK(t.p12 == 0.0);
}

TEST_CASE("transfer balances at the steady state") {
  const SteadyState s = steady_state_iterative(RateConstants{}, 4.0, 150.0);
  const LoopPropagator lp = loop_propagator(RateConstants{}, 4.0, 150.0);
  const Transfer t = loop_transfer(s.state, lp);
  CHECK(std::abs(t.p21 - t.p12) < 1e-9);
}

TEST_CASE("iterative steady state is a fixed point") {
  const double tol = 1e-10;
  const SteadyState s = steady_state_iterative(RateConstants{}, 4.0, 150.0, tol);
  CHECK(s.loops_used > 1);
  const LoopPropagator lp = loop_propagator(RateConstants{}, 4.0, 150.0);
  CHECK(max_abs_diff(apply_propagator(lp.t, s.state), s.state) < tol);
  CHECK(std::abs(polarization(s.state) - reference::steady_pol_pulse4_wait150) < 1e-8);
}

TEST_CASE("short pulses polarize higher but converge slower") {
  const SteadyState fine = steady_state_iterative(RateConstants{}, 4.0, 150.0);
  const SteadyState coarse = steady_state_iterative(RateConstants{}, 200.0, 150.0);
  CHECK(polarization(fine.state) > polarization(coarse.state));
  CHECK(fine.loops_used > coarse.loops_used);
  CHECK(std::abs(polarization(coarse.state) - reference::steady_pol_pulse200_wait150) < 1e-8);
}

TEST_CASE("iteration budget exhaustion is an error") {
  CHECK_THROWS_AS(steady_state_iterative(RateConstants{}, 4.0, 150.0, 1e-10, 3),
                  convergence_error);
}

TEST_CASE("eigen steady state rejects a degenerate loop map") {
  CHECK_THROWS_AS(steady_state_eigen(zero_rates, 4.0, 150.0), degenerate_fixed_point);
}

TEST_CASE("eigen and iterative steady states agree") {
  const StateVector eig = steady_state_eigen(RateConstants{}, 4.0, 150.0);
  const SteadyState it = steady_state_iterative(RateConstants{}, 4.0, 150.0);
  CHECK(max_abs_diff(eig, it.state) < 1e-8);

  const LoopPropagator lp = loop_propagator(RateConstants{}, 4.0, 150.0);
  CHECK(max_abs_diff(apply_propagator(lp.t, eig), eig) < 1e-10);
}

TEST_CASE("eigen and iterative agree across random loop parameters") {
  std::mt19937 rng(20260808);
  std::uniform_real_distribution<double> pulse(1.0, 300.0), wait(10.0, 350.0);
  for (int trial = 0; trial < 6; ++trial) {
    const double ts = pulse(rng), tw = wait(rng);
    CAPTURE(ts);
    CAPTURE(tw);
    const StateVector eig = steady_state_eigen(RateConstants{}, ts, tw);
    const SteadyState it = steady_state_iterative(RateConstants{}, ts, tw);
    CHECK(max_abs_diff(eig, it.state) < 1e-8);
  }
}

TEST_CASE("polarization climbs monotonically from thermal") {
  std::mt19937 rng(31415);
  std::uniform_real_distribution<double> pulse(1.0, 300.0), wait(10.0, 350.0);
  for (int trial = 0; trial < 8; ++trial) {
    const double ts = pulse(rng), tw = wait(rng);
    CAPTURE(ts);
    CAPTURE(tw);
    const SimulationResult r =
        run_schedule(RateConstants{}, make_pulse_train(ts, tw, 250), thermal_state(), true);
    for (size_t i = 1; i < r.per_loop.size(); ++i)
      CHECK(r.per_loop[i].polarization >= r.per_loop[i - 1].polarization - 1e-9);
  }
}

TEST_CASE("net transfer decays monotonically to zero") {
  const SimulationResult r =
      run_schedule(RateConstants{}, make_pulse_train(4.0, 150.0, 600), thermal_state(), true);
  double prev = r.per_loop[0].p21 - r.per_loop[0].p12;
  CHECK(prev > 0.0);
  for (size_t i = 1; i < r.per_loop.size(); ++i) {
    const double net = r.per_loop[i].p21 - r.per_loop[i].p12;
    CHECK(net <= prev + 1e-9);
    prev = net;
  }
  CHECK(std::abs(prev) < 1e-9);
}

TEST_CASE("saturated polarization falls as the pulse widens") {
  double prev = 1.0;
  for (double ts : {4.0, 10.0, 20.0, 50.0, 100.0, 200.0}) {
    const double pol = polarization(steady_state_iterative(RateConstants{}, ts, 150.0).state);
    CHECK(pol < prev);
    prev = pol;
  }
}

TEST_CASE("long pulses lead early, short pulses win at saturation") {
  const SimulationResult fine =
      run_schedule(RateConstants{}, make_pulse_train(4.0, 150.0, 20), thermal_state(), true);
  const SimulationResult coarse =
      run_schedule(RateConstants{}, make_pulse_train(200.0, 150.0, 20), thermal_state(), true);
  bool coarse_leads_somewhere = false;
  for (size_t i = 0; i < 20; ++i)
    if (coarse.per_loop[i].polarization > fine.per_loop[i].polarization)
      coarse_leads_somewhere = true;
  CHECK(coarse_leads_somewhere);

  const double fine_sat = polarization(steady_state_iterative(RateConstants{}, 4.0, 150.0).state);
  const double coarse_sat =
      polarization(steady_state_iterative(RateConstants{}, 200.0, 150.0).state);
  CHECK(fine_sat > coarse_sat);
}

TEST_CASE("hand-built schedules run through the segment cache path") {
  PulseSchedule custom;  // same segments as the one-loop train, no metadata
  custom.segments = {{true, 300.0}, {false, 1000.0}};
  const SimulationResult a = run_schedule(RateConstants{}, custom, thermal_state());
  const SimulationResult b =
      run_schedule(RateConstants{}, make_pulse_train(300.0, 1000.0, 1), thermal_state());
  CHECK(max_abs_diff(a.final_state, b.final_state) < 1e-12);
  CHECK(a.singlet_dwell_ns == doctest::Approx(b.singlet_dwell_ns).epsilon(1e-12));
  CHECK(a.photon_integral == doctest::Approx(b.photon_integral).epsilon(1e-12));
  CHECK(a.per_loop.empty());

  PulseSchedule empty;
  CHECK_THROWS_AS(run_schedule(RateConstants{}, empty, thermal_state()), bad_parameter);
}

TEST_CASE("schedule sampling agrees with the segment runner") {
  const PulseSchedule sched = make_pulse_train(4.0, 150.0, 5);
  const SimulationResult r = run_schedule(RateConstants{}, sched, thermal_state());
  const auto samples = sample_schedule(RateConstants{}, sched, thermal_state(), 1.0);
  CHECK(samples.front().t_ns == 0.0);
  CHECK(samples.back().t_ns == doctest::Approx(sched.total_ns()).epsilon(1e-12));
  CHECK(max_abs_diff(samples.back().state, r.final_state) < 1e-10);
}

}  // TEST_SUITE
