#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pws/core_model.hpp"
#include "pws/systems.hpp"

namespace pws {

/// Two-point discrete vector field f^tau(t_a, x_a, t_b, x_b). A step of length
/// h = t_b - t_a solves x_b = x_a + h * f^tau(t_a, x_a, t_b, x_b).
struct DiscreteVectorField {
  std::string name;
  std::function<State(double, const State&, double, const State&)> eval;
  int consistency_order = 1;
  /// Explicit fields ignore x_b.
  bool is_implicit = true;
  bool is_symmetric = false;
  /// Set when steps conserve these quantities exactly in real arithmetic.
  std::optional<ConservedSet> conserves;

  State operator()(double ta, const State& xa, double tb, const State& xb) const {
    return eval(ta, xa, tb, xb);
  }
};

/// f((t_a + t_b)/2, (x_a + x_b)/2). Order 2, symmetric.
[[nodiscard]] DiscreteVectorField implicit_midpoint_dvf(Field f,
                                                        std::optional<ConservedSet> conserves = {});

/// Divided-difference field for x' = 2y, y' = 3x^2 + a:
/// (y + y', x^2 + x x' + x'^2 + a). Conserves y^2 - x^3 - a x exactly.
[[nodiscard]] DiscreteVectorField elliptic_dmm_dvf(double a);

/// Explicit midpoint: f(t_a + h/2, x_a + h/2 f(t_a, x_a)).
[[nodiscard]] DiscreteVectorField rk2_dvf(Field f);

/// Classical four-stage Runge-Kutta increment based at (t_a, x_a).
[[nodiscard]] DiscreteVectorField rk4_dvf(Field f);

/// Registry lookup: "dmm-midpoint", "dmm-elliptic", "rk2", "rk4".
/// The field for `side` of `sys` is used; "dmm-elliptic" needs the elliptic system.
[[nodiscard]] DiscreteVectorField make_scheme(std::string_view name, const NamedSystem& sys,
                                              RegionSide side);

[[nodiscard]] std::vector<std::string> scheme_names();

/// Conservative scheme the catalog pairs with each system.
[[nodiscard]] std::string default_scheme(const NamedSystem& sys);

}  // namespace pws
