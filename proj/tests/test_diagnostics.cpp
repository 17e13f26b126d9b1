#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pws/diagnostics.hpp"
#include "pws/error.hpp"
#include "pws/oracles.hpp"
#include "pws/schemes.hpp"
#include "pws/systems.hpp"

using namespace pws;

namespace {

State v2(double a, double b) { return (State(2) << a, b).finished(); }

Trajectory run(const NamedSystem& sys, const std::string& scheme, const State& x0, double T,
               double tau) {
  return integrate(sys.system, make_scheme(scheme, sys, RegionSide::minus),
                   make_scheme(scheme, sys, RegionSide::plus), x0, 0, T, tau, EngineConfig{});
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("conserved error series") {
    const auto h = make_harmonic(3, 1);
    const Trajectory dmm = run(h, "dmm-midpoint", v2(1, 1), 20, 1e-3);
    const Trajectory rk2 = run(h, "rk2", v2(1, 1), 20, 1e-3);
    const auto e_dmm = conserved_error_series(dmm, h.system);
    const auto e_rk2 = conserved_error_series(rk2, h.system);
    CHECK(e_dmm.size() == dmm.states.size());
    CHECK(max_of(e_dmm) <= 1e-11);
    CHECK(max_of(e_rk2) > 1e-9);
    CHECK(max_of(e_rk2) < 1e-6);
    const DriftSummary drift = drift_summary(rk2, e_rk2);
    CHECK(drift.segments_checked > 0);
    CHECK(drift.segments_increasing == drift.segments_checked);

    const Trajectory one = run(h, "dmm-midpoint", v2(1, 1), 1e-3, 1e-3);
    CHECK(max_of(conserved_error_series(one, h.system)) <= 1e-13);
  }

  TEST_CASE("crossing time errors") {
    const auto h = make_harmonic(3, 1);
    const Trajectory traj = run(h, "dmm-midpoint", v2(1, 1), 10, 1e-3);
    const HarmonicOracle oracle = harmonic_oracle(3, 1, v2(1, 1), 0, 10);
    const auto errs = crossing_time_errors(traj, oracle.events());
    CHECK(errs.size() == traj.events.size());
    CHECK(max_of(errs) < 1e-5);
    std::vector<OracleEvent> fewer(oracle.events().begin(), oracle.events().end() - 1);
    CHECK_THROWS_AS((void)crossing_time_errors(traj, fewer), Error);

    const Trajectory none = run(h, "dmm-midpoint", v2(0.1, 0.1), 0.5, 1e-3);
    CHECK(crossing_time_errors(none, {}).empty());
  }

  TEST_CASE("estimate_order") {
    const std::vector<double> taus{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> sq;
    std::vector<double> lin;
    for (double t : taus) {
      sq.push_back(t * t);
      lin.push_back(3 * t);
    }
    const OrderEstimate a = estimate_order(taus, sq);
    CHECK(a.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(estimate_order(taus, lin).slope == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> scaled = sq;
    for (double& e : scaled) e *= 7;
    CHECK(estimate_order(taus, scaled).slope == doctest::Approx(a.slope).epsilon(1e-12));

    std::vector<double> with_zero = sq;
    with_zero[0] = 0;
    const OrderEstimate dropped = estimate_order(taus, with_zero);
    CHECK(dropped.taus.size() == 3);
    CHECK_FALSE(dropped.note.empty());
    with_zero[1] = 0;
    CHECK_THROWS_AS((void)estimate_order(taus, with_zero), Error);
  }

  TEST_CASE("harmonic sweep after one crossing has order 2") {
    const auto h = make_harmonic(3, 1);
    const HarmonicOracle oracle = harmonic_oracle(3, 1, v2(1, 1), 0, 2);
    std::vector<double> taus{2e-2, 1e-2, 5e-3, 2.5e-3};
    std::vector<double> errs;
    for (double tau : taus) {
      const Trajectory traj = run(h, "dmm-midpoint", v2(1, 1), 2, tau);
      REQUIRE(traj.events.size() == 1);
      errs.push_back((traj.states.back() - oracle.state(2)).norm());
    }
    CHECK(estimate_order(taus, errs).slope == doctest::Approx(2.0).epsilon(0.1));
  }

  TEST_CASE("continuous crossing bound on the harmonic run") {
    const auto h = make_harmonic(3, 1);
    const Trajectory traj = run(h, "dmm-midpoint", v2(1, 1), 20, 1e-3);
    const HarmonicOracle oracle = harmonic_oracle(3, 1, v2(1, 1), 0, 20);
    REQUIRE(traj.events.size() == oracle.events().size());
    const auto errs = crossing_time_errors(traj, oracle.events());
    for (std::size_t i = 0; i < traj.events.size(); ++i) {
      const BoundReport r = check_crossing_bound(h.system, traj, traj.events[i],
                                                 oracle.events()[i].t_star,
                                                 [&](double t) { return oracle.state(t); });
      CHECK(r.satisfied);
      // H_g = 0, so only grad g . xddot = ydot' = -w^2 y survives; y = O(tau) near the crossing.
      CHECK(r.M_hat < 3 * std::sqrt(6.0) * 1e-3);
      CHECK(r.L_g_hat == doctest::Approx(1.0));
      CHECK(r.alpha_sq_hat == doctest::Approx(std::sqrt(2.0)));
      CHECK(errs[i] <= r.rhs);
    }
  }

  TEST_CASE("discrete crossing bound and transversality on the elliptic run") {
    const auto e = make_elliptic();
    const auto sm = make_scheme("dmm-elliptic", e, RegionSide::minus);
    const auto sp = make_scheme("dmm-elliptic", e, RegionSide::plus);
    const Trajectory traj =
        integrate(e.system, sm, sp, v2(-1, -1), 0, 10, 1e-3, EngineConfig{});
    REQUIRE_FALSE(traj.events.empty());
    for (const CrossingEvent& ev : traj.events) {
      const BoundReport r = check_discrete_crossing_bound(e.system, sm, sp, ev, SolverConfig{});
      CHECK(r.satisfied);
      CHECK(r.discrete_transversal);
    }
  }

  TEST_CASE("bound check needs a Hessian") {
    auto h = make_harmonic(3, 1);
    const Trajectory traj = run(h, "dmm-midpoint", v2(1, 1), 2, 1e-3);
    const HarmonicOracle oracle = harmonic_oracle(3, 1, v2(1, 1), 0, 2);
    h.system.surface.hess_g = nullptr;
    try {
      (void)check_crossing_bound(h.system, traj, traj.events[0], oracle.events()[0].t_star,
                                 [&](double t) { return oracle.state(t); });
      FAIL("expected unsupported_system");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::unsupported_system);
    }
  }
}
