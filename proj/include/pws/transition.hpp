#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pws/core_model.hpp"
#include "pws/schemes.hpp"
#include "pws/solvers.hpp"

namespace pws {

struct EngineConfig {
  SolverConfig solver;
  /// Crossings handled inside a single step before it is declared too large.
  int max_crossings_per_step = 4;
  /// Guard against unbounded switching over the whole run.
  std::size_t max_events = 100000;
  std::size_t max_steps = 100'000'000;
  /// Interior samples used to find the earliest sign change before Brent.
  int crossing_scan_points = 4;

  void validate() const;
};

/// Artificial error c * tau^p added to each localized crossing time.
struct Perturbation {
  double c = 1.0;
  double p = 1.0;
};

struct CrossingEvent {
  double t_hat = 0.0;  ///< localized crossing time, before any perturbation
  State x_hat;
  RegionSide side_from = RegionSide::minus;
  RegionSide side_to = RegionSide::plus;
  double residual_g = 0.0;
  /// |psi_from(x_hat) - psi_from at entry to the segment being left|.
  double psi_level_residual = 0.0;
  SolveStats stats_locate;
  SolveStats stats_complete;
  double perturbation_applied = 0.0;

  std::size_t step_index = 0;  ///< the step [t_k, t_{k+1}] that produced the event
  double leg_t = 0.0;          ///< start of the leg that was localized
  State leg_x;
  double leg_length = 0.0;     ///< full length of that leg
  /// Pointwise transversality proxy min(|grad g . f_-|, |grad g . f_+|) at x_hat.
  double alpha_sq_hat = 0.0;
  /// Residual of the two-leg (convex combination) form of the transition step.
  double convex_residual = 0.0;
};

struct RegionSegment {
  std::size_t start_index = 0;
  RegionSide side = RegionSide::minus;
  State psi_ref;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  double tau = 0.0;
  std::vector<CrossingEvent> events;
  std::vector<RegionSegment> segments;

  /// Segment that sample `index` belongs to (the last one starting at or before it).
  [[nodiscard]] const RegionSegment& segment_of(std::size_t index) const;
};

/// Solves x = x_a + h * dvf(t_a, x_a, t_a + h, x); explicit fields evaluate directly.
/// h may be zero or negative.
[[nodiscard]] SolveResult smooth_step_by(const DiscreteVectorField& dvf, double t_a,
                                         const State& x_a, double h, const SolverConfig& cfg);

[[nodiscard]] SolveResult smooth_step(const DiscreteVectorField& dvf, double t_a,
                                      const State& x_a, double t_target, const SolverConfig& cfg);

struct LocatedCrossing {
  double offset = 0.0;  ///< t_hat - t_a
  double t_hat = 0.0;
  State x_hat;
  double residual_g = 0.0;
  int root_iterations = 0;
  SolveStats inner;  ///< stats of the inner solve at the root
};

/// Localizes the first crossing of the leg that starts at (t_a, x_a) on `from_side`
/// and runs for `length`: solves x = x_a + (t - t_a) dvf(t_a, x_a, t, x), g(x) = 0
/// by Brent on t with an inner implicit solve. The leg must end strictly on the
/// other side. x_a may lie on S (a leg starting at a previous crossing).
[[nodiscard]] LocatedCrossing locate_crossing(const DiscreteVectorField& dvf_from,
                                              const SwitchingSurface& surface, double t_a,
                                              const State& x_a, double length,
                                              RegionSide from_side, const EngineConfig& cfg);

/// Second leg of the transition: x = x_hat + (t_next - t_hat) dvf_to(t_hat, x_hat, t_next, x).
[[nodiscard]] SolveResult complete_step(const DiscreteVectorField& dvf_to, double t_hat,
                                        const State& x_hat, double t_next,
                                        const SolverConfig& cfg);

/// Number of sign changes of phi(s) = g(x_hat(s)) at samples + 1 equispaced points of
/// the leg (zeros skipped).
[[nodiscard]] int count_sign_changes(const DiscreteVectorField& dvf,
                                     const SwitchingSurface& surface, double t_a,
                                     const State& x_a, double length, int samples,
                                     const SolverConfig& cfg);

/// Uniform-step transition scheme from (t0, x0) to T.
[[nodiscard]] Trajectory integrate(const PwsSystem& sys, const DiscreteVectorField& scheme_minus,
                                   const DiscreteVectorField& scheme_plus, const State& x0,
                                   double t0, double T, double tau, const EngineConfig& cfg,
                                   std::optional<Perturbation> perturbation = std::nullopt);

/// Number of uniform steps covering [t0, T]; throws invalid_argument unless
/// (T - t0) / tau is an integer to round-off.
[[nodiscard]] std::size_t step_count(double t0, double T, double tau);

}  // namespace pws
