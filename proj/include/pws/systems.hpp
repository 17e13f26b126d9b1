#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pws/core_model.hpp"

namespace pws {

using ParamMap = std::map<std::string, double, std::less<>>;

/// A catalog system together with the parameters it was built from.
struct NamedSystem {
  std::string name;
  PwsSystem system;
  ParamMap params;
  /// Both fields are linear and both invariants at most quadratic, so the
  /// implicit midpoint rule conserves them exactly.
  bool midpoint_conservative = false;
  State default_x0;
};

/// x' = y, y' = -w^2 x with w^2 switching across g = y.
/// psi = (w^2 x^2 + y^2) / 2 on each side.
[[nodiscard]] NamedSystem make_harmonic(double omega2_minus = 3.0, double omega2_plus = 1.0);

/// x' = 2y, y' = 3x^2 + a with a switching across the circle g = x^2 + y^2 - r^2.
/// psi = y^2 - x^3 - a x on each side.
[[nodiscard]] NamedSystem make_elliptic(double a_minus = -3.0, double a_plus = -2.0,
                                        double radius = 1.0);

/// Constant velocity on each side of g = y; psi = v_y x - v_x y.
/// Handy for building the sliding and repelling configurations.
[[nodiscard]] NamedSystem make_constant_flow(const State& v_minus, const State& v_plus);

/// Builds a catalog system by name. Unknown names or parameters throw config_error.
[[nodiscard]] NamedSystem make_system(std::string_view name, const ParamMap& overrides = {});

[[nodiscard]] std::vector<std::string> system_names();

/// psi = y^2 - x^3 - a x, conserved by x' = 2y, y' = 3x^2 + a.
[[nodiscard]] ConservedSet elliptic_invariant(double a);

/// psi = (w^2 x^2 + y^2) / 2, conserved by x' = y, y' = -w^2 x.
[[nodiscard]] ConservedSet harmonic_invariant(double omega2);

}  // namespace pws
