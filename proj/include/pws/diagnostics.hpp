#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pws/core_model.hpp"
#include "pws/oracles.hpp"
#include "pws/transition.hpp"

namespace pws {

/// Per-sample |psi_active(x_k) - psi_ref| of the sample's region segment
/// (max over components).
[[nodiscard]] std::vector<double> conserved_error_series(const Trajectory& traj,
                                                         const PwsSystem& sys);

/// |t* - t_hat| per event, in order. Throws event_mismatch on differing counts.
[[nodiscard]] std::vector<double> crossing_time_errors(const Trajectory& traj,
                                                       const std::vector<OracleEvent>& oracle);

struct OrderEstimate {
  std::vector<double> taus;
  std::vector<double> errors;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Non-empty when points were dropped (zero or non-finite errors).
  std::string note;
};

/// Least-squares fit of log(error) = slope * log(tau) + intercept.
[[nodiscard]] OrderEstimate estimate_order(const std::vector<double>& taus,
                                           const std::vector<double>& errors);

/// Empirical check of a crossing-time bound |t - t*| <= (M (t - t*)^2 + L_g |dx|) / alpha^2.
/// All constants are sampled proxies, not the analysis constants.
struct BoundReport {
  double alpha_sq_hat = 0.0;
  double M_hat = 0.0;
  double L_g_hat = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  /// grad g . f^tau keeps the crossing orientation at every sample (discrete check only).
  bool discrete_transversal = true;
  std::string note;
};

using StateFunction = std::function<State(double)>;

/// Continuous bound at t = t_hat against the exact crossing (t*, exact_state(t*)).
/// M samples |xdot . H_g xdot + grad g . xddot| / 2 along exact_state around the crossing,
/// with xddot from a central difference of the active field. Needs hess_g.
[[nodiscard]] BoundReport check_crossing_bound(const PwsSystem& sys, const Trajectory& traj,
                                               const CrossingEvent& event, double t_star,
                                               const StateFunction& exact_state,
                                               int samples = 32);

/// Discrete analogue: t ranges over the step that produced the event, x^tau(t) is the
/// transition-scheme solution from the step start, M-hat samples the discrete fields
/// through H_g on the segments joining x^tau(t) and x_hat. Also checks discrete
/// transversality at x_hat.
[[nodiscard]] BoundReport check_discrete_crossing_bound(const PwsSystem& sys,
                                                        const DiscreteVectorField& scheme_minus,
                                                        const DiscreteVectorField& scheme_plus,
                                                        const CrossingEvent& event,
                                                        const SolverConfig& cfg,
                                                        int samples = 16);

struct DriftSummary {
  double max_error = 0.0;
  std::size_t segments_checked = 0;
  /// Segments whose least-squares error-vs-time slope is positive.
  std::size_t segments_increasing = 0;
};

/// Trend of a per-sample error series within each segment having at least
/// `min_samples` samples.
[[nodiscard]] DriftSummary drift_summary(const Trajectory& traj, const std::vector<double>& errors,
                                         std::size_t min_samples = 100);

}  // namespace pws
