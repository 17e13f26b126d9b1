#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "pws/core_model.hpp"

namespace pws {

struct SolverConfig {
  /// Mixed tolerance: converged when |update| <= fp_tol * (1 + |x|).
  double fp_tol = 1e-14;
  int fp_max_iter = 100;
  /// Fixed-point iterations allowed before switching to Newton.
  int newton_fallback_after = 25;
  /// Absolute tolerance on the crossing time (on the offset inside a step).
  double root_tol_t = 1e-14;
  int root_max_iter = 200;
  /// Relative forward-difference step; scaled by max(1, |x_j|).
  double fd_jacobian_step = std::sqrt(std::numeric_limits<double>::epsilon());

  /// Throws config_error on non-positive tolerances or caps.
  void validate() const;
};

enum class SolveMethod { fixed_point, newton };

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
  /// Observed ratio |x_{n+1} - x_n| / |x_n - x_{n-1}|; below 1 for a contraction.
  double contraction_estimate = 0.0;
  SolveMethod method_used = SolveMethod::fixed_point;
};

struct SolveResult {
  State x;
  SolveStats stats;
};

using VectorMap = std::function<State(const State&)>;
using JacobianFn = std::function<Matrix(const State&)>;

/// Iterates x <- map(x). Throws diverging_fixed_point when the update ratio stays
/// >= 1 for five consecutive iterations and no_convergence at the cap.
[[nodiscard]] SolveResult fixed_point(const VectorMap& map, const State& x0,
                                      const SolverConfig& cfg);

/// Newton on F(x) = 0 with a forward-difference Jacobian unless `jacobian` is given.
/// Converged when |F(x)| <= fp_tol * (1 + |x0|).
[[nodiscard]] SolveResult newton(const VectorMap& residual, const State& x0,
                                 const SolverConfig& cfg, const JacobianFn& jacobian = {});

/// Solves x = map(x): fixed point first, Newton on x - map(x) if that stalls or diverges.
[[nodiscard]] SolveResult solve_fixed_point_equation(const VectorMap& map, const State& x0,
                                                     const SolverConfig& cfg);

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  ///< |phi(root)|
  double bracket_width = 0.0;
  int iterations = 0;
};

/// Brent's method on a sign-changing bracket [a, b]. Never evaluates phi outside
/// [a, b]. Throws bracket_error if phi(a) and phi(b) share a strict sign.
[[nodiscard]] RootResult bracketed_root(const std::function<double(double)>& phi, double a,
                                        double b, const SolverConfig& cfg);

/// Smaller root r_- = (b - sqrt(b^2 - 4ac)) / (2a) of a r^2 - b r + c for a, b > 0,
/// 0 <= c < b^2 / (4a). Throws no_real_separation otherwise.
[[nodiscard]] double quadratic_root_bound(double a, double b, double c);

/// Upper bound (c / b) / (1 - 2ac / b^2) on that root.
[[nodiscard]] double quadratic_root_series_bound(double a, double b, double c);

}  // namespace pws
