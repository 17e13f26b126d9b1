#pragma once

#include <vector>

#include "pws/core_model.hpp"
#include "pws/transition.hpp"

namespace pws {

struct OracleEvent {
  double t_star = 0.0;
  State x_star;
  RegionSide side_from = RegionSide::plus;
  RegionSide side_to = RegionSide::minus;
};

/// Exact piecewise solution of the switched harmonic oscillator across g = y.
/// Each half-plane is a rotation in (x, y / w); crossings are half-turns.
class HarmonicOracle {
 public:
  /// Requires y0 != 0 and positive w^2 on both sides.
  HarmonicOracle(double omega2_minus, double omega2_plus, const State& x0, double t0, double T);

  [[nodiscard]] State state(double t) const;
  [[nodiscard]] const std::vector<OracleEvent>& events() const { return events_; }

 private:
  struct Segment {
    double t_start;
    State x_start;
    double omega;
  };
  std::vector<Segment> segments_;
  std::vector<OracleEvent> events_;
  double t0_;
};

[[nodiscard]] HarmonicOracle harmonic_oracle(double omega2_minus, double omega2_plus,
                                             const State& x0, double t0, double T);

struct ReferenceRun {
  Trajectory trajectory;
  std::vector<OracleEvent> events;
};

/// Transition scheme with RK4 on both sides at tau_ref. `coarsest_study_tau` is the
/// smallest step the reference will be compared against; it must be >= 50 tau_ref.
[[nodiscard]] ReferenceRun reference_trajectory(const PwsSystem& sys, const State& x0, double t0,
                                                double T, double tau_ref,
                                                double smallest_study_tau,
                                                const EngineConfig& cfg = {});

}  // namespace pws
