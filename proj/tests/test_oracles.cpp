#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pws/error.hpp"
#include "pws/oracles.hpp"
#include "pws/systems.hpp"
#include "support.hpp"

using namespace pws;
using std::numbers::pi;

namespace {
State v2(double a, double b) { return (State(2) << a, b).finished(); }
}  // namespace

TEST_SUITE("oracles") {
  TEST_CASE("harmonic closed form") {
    const HarmonicOracle oracle = harmonic_oracle(3, 1, v2(1, 1), 0, 30);
    const auto& ev = oracle.events();
    REQUIRE(ev.size() >= 2);
    CHECK(ev[0].t_star == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK((ev[0].x_star - v2(std::sqrt(2.0), 0)).norm() < 1e-15);
    CHECK(ev[0].side_from == RegionSide::plus);
    CHECK(ev[1].t_star == doctest::Approx(pi / 4 + pi / std::sqrt(3.0)).epsilon(1e-15));
    CHECK((ev[1].x_star - v2(-std::sqrt(2.0), 0)).norm() < 1e-14);

    const auto h = make_harmonic(3, 1);
    CHECK(h.system.conserved_plus.psi(oracle.state(0.3))[0] == doctest::Approx(1.0));
    CHECK(h.system.conserved_minus.psi(oracle.state(ev[0].t_star + 0.5))[0] ==
          doctest::Approx(3.0));
  }

  TEST_CASE("library oracle agrees with the test-side closed form") {
    const HarmonicOracle oracle = harmonic_oracle(3, 1, v2(0.3, -0.7), 0, 40);
    const pws_test::HarmonicClosedForm exact(3, 1, 0.3, -0.7, 40);
    REQUIRE(oracle.events().size() == exact.crossings().size());
    for (std::size_t i = 0; i < exact.crossings().size(); ++i) {
      CHECK(std::abs(oracle.events()[i].t_star - exact.crossings()[i].t) < 1e-12);
    }
    for (double t : {0.0, 1.3, 7.7, 25.0, 40.0}) {
      CHECK((oracle.state(t) - State(exact.state(t))).norm() < 1e-12);
    }
  }

  TEST_CASE("oracle rejects a start on the surface") {
    CHECK_THROWS_AS((void)harmonic_oracle(3, 1, v2(1, 0), 0, 1), Error);
  }

  TEST_CASE("RK4 reference agrees with the closed form") {
    const auto h = make_harmonic(3, 1);
    const ReferenceRun ref = reference_trajectory(h.system, v2(1, 1), 0, 10, 1.6e-5, 1e-3);
    const pws_test::HarmonicClosedForm exact(3, 1, 1, 1, 10);
    REQUIRE(ref.events.size() == exact.crossings().size());
    for (std::size_t i = 0; i < ref.events.size(); ++i) {
      CHECK(std::abs(ref.events[i].t_star - exact.crossings()[i].t) <= 1e-10);
    }
    CHECK((ref.trajectory.states.back() - State(exact.state(10))).norm() <= 1e-11);
  }

  TEST_CASE("RK4 reference is self-consistent under halving") {
    const auto e = make_elliptic();
    const ReferenceRun a = reference_trajectory(e.system, v2(-1, -1), 0, 5, 1.6e-5, 1e-3);
    const ReferenceRun b = reference_trajectory(e.system, v2(-1, -1), 0, 5, 8e-6, 1e-3);
    CHECK((a.trajectory.states.back() - b.trajectory.states.back()).norm() <= 1e-12);
  }

  TEST_CASE("reference step must be much smaller than the study steps") {
    const auto h = make_harmonic(3, 1);
    CHECK_THROWS_AS((void)reference_trajectory(h.system, v2(1, 1), 0, 1, 1e-4, 1e-3), Error);
  }
}
