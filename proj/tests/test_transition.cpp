#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pws/error.hpp"
#include "pws/schemes.hpp"
#include "pws/systems.hpp"
#include "pws/transition.hpp"
#include "support.hpp"

using namespace pws;
using std::numbers::pi;

namespace {

State v2(double a, double b) { return (State(2) << a, b).finished(); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected pws::Error");
  return ErrorCode::evaluation_error;
}

Trajectory run(const NamedSystem& sys, const std::string& scheme, const State& x0, double T,
               double tau, std::optional<Perturbation> pert = std::nullopt) {
  return integrate(sys.system, make_scheme(scheme, sys, RegionSide::minus),
                   make_scheme(scheme, sys, RegionSide::plus), x0, 0, T, tau, EngineConfig{},
                   pert);
}

// Rightward flow at speed 2 (U_-) or 3 (U_+) across g = sin(10 x): the change of
// speed at each crossing lets the completion leg cross again within the step.
PwsSystem wavy_surface() {
  PwsSystem sys;
  sys.dim = 2;
  sys.f_minus = [](double, const State&) { return v2(2, 0); };
  sys.f_plus = [](double, const State&) { return v2(3, 0); };
  sys.surface.g = [](const State& x) { return std::sin(10 * x[0]); };
  sys.surface.grad_g = [](const State& x) { return v2(10 * std::cos(10 * x[0]), 0); };
  sys.conserved_minus = sys.conserved_plus = {
      [](const State& x) { return State(x.tail(1)); },
      [](const State&) { return Matrix((Matrix(1, 2) << 0, 1).finished()); }, 1};
  return sys;
}

}  // namespace

TEST_SUITE("transition-engine") {
  TEST_CASE("smooth_step") {
    const auto h = make_harmonic(3, 1);
    const auto dvf = make_scheme("dmm-midpoint", h, RegionSide::plus);
    const State x = smooth_step(dvf, 0, v2(1, 1), 0.1, {}).x;
    CHECK(x[0] == doctest::Approx(1.0947631).epsilon(1e-7));
    CHECK(x[1] == doctest::Approx(0.8952618).epsilon(1e-7));
    const auto rk2 = make_scheme("rk2", h, RegionSide::plus);
    CHECK(smooth_step(rk2, 0.3, v2(1, 1), 0.3, {}).x == v2(1, 1));
  }

  TEST_CASE("locate_crossing on the harmonic first leg") {
    const auto h = make_harmonic(3, 1);
    const auto dvf = make_scheme("dmm-midpoint", h, RegionSide::plus);
    const LocatedCrossing c =
        locate_crossing(dvf, h.system.surface, 0, v2(1, 1), 1.0, RegionSide::plus, {});
    // One midpoint step of length t rotates by 2 atan(t / 2); y = 0 needs a rotation of pi/4.
    CHECK(std::abs(c.t_hat - 2 * std::tan(pi / 8)) < 1e-14);
    CHECK((c.x_hat - v2(std::sqrt(2.0), 0)).norm() < 1e-14);
    CHECK(std::abs(c.residual_g) < 1e-14);
    CHECK(code_of([&] {
            (void)locate_crossing(dvf, h.system.surface, 0, v2(1, 1), 0.1, RegionSide::plus, {});
          }) == ErrorCode::crossing_localization_failed);
  }

  TEST_CASE("complete_step with a zero-length leg") {
    const auto h = make_harmonic(3, 1);
    const auto dvf = make_scheme("dmm-midpoint", h, RegionSide::minus);
    const State x_hat = v2(std::sqrt(2.0), 0);
    CHECK(complete_step(dvf, 0.5, x_hat, 0.5, {}).x == x_hat);
  }

  TEST_CASE("harmonic events match the closed form") {
    const auto h = make_harmonic(3, 1);
    const Trajectory traj = run(h, "dmm-midpoint", v2(1, 1), 10, 1e-3);
    const pws_test::HarmonicClosedForm exact(3, 1, 1, 1, 10);
    REQUIRE(traj.events.size() == exact.crossings().size());
    REQUIRE(traj.events.size() >= 2);
    CHECK(exact.crossings()[0].t == doctest::Approx(pi / 4));
    CHECK(exact.crossings()[1].t == doctest::Approx(pi / 4 + pi / std::sqrt(3.0)));
    CHECK(std::abs(traj.events[0].t_hat - pi / 4) < 1e-6);
    CHECK(std::abs(traj.events[1].t_hat - (pi / 4 + pi / std::sqrt(3.0))) < 1e-6);
    CHECK((traj.events[0].x_hat - v2(std::sqrt(2.0), 0)).norm() < 1e-12);
    CHECK((traj.events[1].x_hat - v2(-std::sqrt(2.0), 0)).norm() < 1e-12);
    CHECK(traj.events[0].side_from == RegionSide::plus);
    CHECK(traj.events[0].side_to == RegionSide::minus);
    CHECK(traj.states.size() == 10001);
    CHECK(traj.segments.size() == traj.events.size() + 1);
  }

  TEST_CASE("event completeness and per-segment conservation") {
    const auto e = make_elliptic();
    const Trajectory traj = run(e, "dmm-elliptic", v2(-1, -1), 10, 1e-3);
    const auto& s = e.system.surface;
    std::size_t ev = 0;
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
      const bool changed = (s.g(traj.states[k]) > 0) != (s.g(traj.states[k + 1]) > 0);
      while (ev < traj.events.size() && traj.events[ev].t_hat <= traj.times[k]) ++ev;
      if (changed) {
        REQUIRE(ev < traj.events.size());
        CHECK(traj.events[ev].t_hat <= traj.times[k + 1]);
      }
    }
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const RegionSegment& seg = traj.segment_of(k);
      CHECK(std::abs(conserved_for_side(e.system, seg.side).psi(traj.states[k])[0] -
                     seg.psi_ref[0]) <= 1e-11);
    }
  }

  TEST_CASE("zero events in a smooth run") {
    const auto h = make_harmonic(3, 1);
    const Trajectory traj = run(h, "dmm-midpoint", v2(0.1, 0.1), 0.5, 1e-3);
    CHECK(traj.events.empty());
    CHECK(traj.segments.size() == 1);
  }

  TEST_CASE("initial point on the surface is rejected") {
    const auto h = make_harmonic(3, 1);
    CHECK(code_of([&] { (void)run(h, "dmm-midpoint", v2(1, 0), 1, 1e-2); }) ==
          ErrorCode::invalid_initial_condition);
  }

  TEST_CASE("landing exactly on the surface") {
    const auto c = make_constant_flow(v2(0, -1), v2(0, -1));
    const Trajectory traj = run(c, "dmm-midpoint", v2(0, 1), 2, 0.25);
    REQUIRE(traj.events.size() == 1);
    CHECK(traj.events[0].t_hat == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(traj.events[0].side_to == RegionSide::minus);
    CHECK(traj.states.back()[1] == doctest::Approx(-1.0).epsilon(1e-14));
  }

  TEST_CASE("sliding is reported as a transversality violation") {
    const auto c = make_constant_flow(v2(0, 1), v2(0, -1));
    CHECK(code_of([&] { (void)run(c, "dmm-midpoint", v2(0, -1), 2.1, 0.3); }) ==
          ErrorCode::transversality_violation);
  }

  TEST_CASE("several crossings inside one step") {
    const PwsSystem sys = wavy_surface();
    const auto dm = implicit_midpoint_dvf(sys.f_minus, sys.conserved_minus);
    const auto dp = implicit_midpoint_dvf(sys.f_plus, sys.conserved_plus);
    EngineConfig cfg;
    cfg.crossing_scan_points = 64;
    // From x = 0.05 the step of 0.4 crosses at pi/10, 2 pi/10 and 3 pi/10:
    // 0.088 at speed 3, 0.157 at speed 2, 0.105 at speed 3, then 0.05 at speed 2.
    const Trajectory traj = integrate(sys, dm, dp, v2(0.05, 0), 0, 0.4, 0.4, cfg);
    REQUIRE(traj.events.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(traj.events[i].x_hat[0] == doctest::Approx((i + 1) * pi / 10).epsilon(1e-13));
      CHECK(traj.events[i].step_index == 0);
    }
    const double t_left = 0.4 - (pi / 10 - 0.05) / 3 - (pi / 10) / 2 - (pi / 10) / 3;
    CHECK(traj.states.back()[0] == doctest::Approx(3 * pi / 10 + 2 * t_left).epsilon(1e-13));

    cfg.max_crossings_per_step = 2;
    CHECK(code_of([&] { (void)integrate(sys, dm, dp, v2(0.05, 0), 0, 0.4, 0.4, cfg); }) ==
          ErrorCode::step_too_large);
  }

  TEST_CASE("runaway switching guard") {
    const PwsSystem sys = wavy_surface();
    const auto dm = implicit_midpoint_dvf(sys.f_minus, sys.conserved_minus);
    const auto dp = implicit_midpoint_dvf(sys.f_plus, sys.conserved_plus);
    EngineConfig cfg;
    cfg.max_events = 5;
    CHECK(code_of([&] { (void)integrate(sys, dm, dp, v2(0.05, 0), 0, 2, 0.01, cfg); }) ==
          ErrorCode::runaway_switching);
  }

  TEST_CASE("determinism") {
    const auto e = make_elliptic();
    const Trajectory a = run(e, "dmm-elliptic", v2(-1, -1), 5, 1e-3);
    const Trajectory b = run(e, "dmm-elliptic", v2(-1, -1), 5, 1e-3);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      REQUIRE(a.states[k] == b.states[k]);
      REQUIRE(a.times[k] == b.times[k]);
    }
  }

  TEST_CASE("negligible perturbation leaves the run unchanged") {
    const auto h = make_harmonic(3, 1);
    const Trajectory a = run(h, "dmm-midpoint", v2(1, 1), 10, 1e-3);
    const Trajectory b = run(h, "dmm-midpoint", v2(1, 1), 10, 1e-3, Perturbation{1, 15});
    REQUIRE(a.states.size() == b.states.size());
    double worst = 0;
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      worst = std::max(worst, (a.states[k] - b.states[k]).norm());
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("perturbation shifts crossing times by c tau^p") {
    const auto h = make_harmonic(3, 1);
    const Trajectory traj = run(h, "dmm-midpoint", v2(1, 1), 10, 1e-2, Perturbation{2, 1});
    REQUIRE_FALSE(traj.events.empty());
    CHECK(traj.events[0].perturbation_applied == doctest::Approx(2e-2));
  }

  TEST_CASE("step_count") {
    CHECK(step_count(0, 10, 1e-3) == 10000);
    CHECK(step_count(0, 29.6, 1.25e-3) == 23680);
    CHECK(step_count(1, 1, 0.1) == 0);
    CHECK(code_of([] { (void)step_count(0, 1, 0.3); }) == ErrorCode::invalid_argument);
  }
}
