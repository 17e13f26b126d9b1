#include <doctest.h>

#include "pws/schemes.hpp"
#include "pws/systems.hpp"
#include "properties.hpp"

using namespace pws;

namespace {
constexpr std::uint64_t kSeed = 20240917;
}

TEST_SUITE("properties") {
  TEST_CASE("conservative steps conserve psi") {
    CHECK(pws_test::conservation_identity_worst(1000, kSeed) <= 1e-12);
  }

  TEST_CASE("symmetric steps reverse") {
    CHECK(pws_test::time_reversal_worst_in_tol(1000, kSeed + 1, SolverConfig{}) <= 10.0);
  }

  TEST_CASE("quadratic root bound") {
    const auto q = pws_test::quadratic_bound_property(1000, kSeed + 2);
    CHECK(q.violations == 0);
    CHECK(q.worst_relative_residual < 1e-12);
  }

  TEST_CASE("expansive map is flagged") { CHECK(pws_test::expansive_map_flagged()); }

  TEST_CASE("one sign change per localized leg") {
    for (const char* name : {"harmonic", "elliptic"}) {
      CAPTURE(name);
      const NamedSystem sys = make_system(name);
      const auto sm = make_scheme(default_scheme(sys), sys, RegionSide::minus);
      const auto sp = make_scheme(default_scheme(sys), sys, RegionSide::plus);
      for (double tau : {1e-2, 1e-3}) {
        const Trajectory traj = integrate(sys.system, sm, sp, sys.default_x0, 0, 10, tau, {});
        REQUIRE_FALSE(traj.events.empty());
        CHECK(pws_test::sign_change_failures(sys.system, sm, sp, traj) == 0);
      }
    }
  }
}
