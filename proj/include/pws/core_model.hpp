#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "pws/error.hpp"

namespace pws {

using State = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Smooth vector field f(t, x). Must be pure.
using Field = std::function<State(double, const State&)>;

/// Zero level set of a switching function g. U_+ is {g > 0}, U_- is {g < 0}.
struct SwitchingSurface {
  std::function<double(const State&)> g;
  std::function<State(const State&)> grad_g;
  /// Optional. Needed only by the crossing-time bound diagnostics.
  std::function<Matrix(const State&)> hess_g;
  /// Dimensionless band around g = 0, scaled by the local size of g.
  double on_surface_tol = 1e-12;

  [[nodiscard]] bool has_hessian() const { return static_cast<bool>(hess_g); }
};

/// Time-independent conserved quantities psi: R^d -> R^{count}.
struct ConservedSet {
  std::function<State(const State&)> psi;
  std::function<Matrix(const State&)> grad_psi;
  int count = 1;
};

struct PwsSystem {
  int dim = 2;
  Field f_minus;
  Field f_plus;
  SwitchingSurface surface;
  ConservedSet conserved_minus;
  ConservedSet conserved_plus;
};

enum class RegionSide { minus, plus, on_surface };

[[nodiscard]] std::string_view to_string(RegionSide side) noexcept;
[[nodiscard]] RegionSide opposite(RegionSide side);

/// Width of the "numerically on S" band at x: tol * (1 + |x| |grad g(x)|).
[[nodiscard]] double surface_band(const SwitchingSurface& surface, const State& x);

[[nodiscard]] RegionSide side_of(const SwitchingSurface& surface, const State& x);

/// Evaluates f_minus or f_plus. Never consults g.
[[nodiscard]] State field_for_side(const PwsSystem& sys, RegionSide side, double t,
                                   const State& x);

[[nodiscard]] const ConservedSet& conserved_for_side(const PwsSystem& sys, RegionSide side);

enum class InterfaceKind { transversal_up, transversal_down, repelling, sliding };

[[nodiscard]] std::string_view to_string(InterfaceKind kind) noexcept;

struct InterfaceClassification {
  InterfaceKind kind;
  double a_minus;  ///< grad g . f_minus
  double a_plus;   ///< grad g . f_plus
  /// Pointwise transversality proxy min(|a_minus|, |a_plus|).
  [[nodiscard]] double alpha_sq() const;
};

/// Classifies a point of S by the signs of grad g . f_{-,+}.
/// Throws not_on_surface if |g(x)| is outside the band and degenerate_tangency
/// if either product is numerically zero.
[[nodiscard]] InterfaceClassification classify_interface_point(const PwsSystem& sys,
                                                               const State& x, double t);

/// Checks grad g(x) != 0; throws gradient_vanishes otherwise.
void require_regular_surface_point(const SwitchingSurface& surface, const State& x);

/// Smallest singular value of grad psi(x) exceeds rank_tol.
[[nodiscard]] bool has_full_row_rank(const ConservedSet& set, const State& x,
                                     double rank_tol = 1e-10);

/// Max |H - H^T| relative to |H|; zero when no Hessian is available.
[[nodiscard]] double hessian_asymmetry(const SwitchingSurface& surface, const State& x);

/// Infinity norm of psi(a) - psi(b).
[[nodiscard]] double psi_difference(const ConservedSet& set, const State& a, const State& b);

}  // namespace pws
