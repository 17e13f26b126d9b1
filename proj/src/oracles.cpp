#include "pws/oracles.hpp"

#include <cmath>
#include <numbers>

namespace pws {

namespace {

State vec2(double a, double b) {
  State v(2);
  v << a, b;
  return v;
}

/// Rotation of (x, y / w) by -w s.
State rotate(const State& entry, double omega, double s) {
  const double c = std::cos(omega * s);
  const double sn = std::sin(omega * s);
  const double u = entry[0];
  const double v = entry[1] / omega;
  return vec2(u * c + v * sn, omega * (-u * sn + v * c));
}

}  // namespace

HarmonicOracle::HarmonicOracle(double omega2_minus, double omega2_plus, const State& x0,
                               double t0, double T)
    : t0_(t0) {
  if (x0.size() != 2 || x0[1] == 0.0) {
    throw Error(ErrorCode::invalid_initial_condition, "harmonic oracle needs a 2-D state with y0 != 0");
  }
  if (!(omega2_minus > 0.0) || !(omega2_plus > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "omega2 values must be positive");
  }
  const double w_minus = std::sqrt(omega2_minus);
  const double w_plus = std::sqrt(omega2_plus);
  RegionSide side = x0[1] > 0.0 ? RegionSide::plus : RegionSide::minus;
  double omega = side == RegionSide::plus ? w_plus : w_minus;
  segments_.push_back({t0, x0, omega});

  // First zero of y: the polar angle of (x, y / w) decays at rate w until it hits a
  // multiple of pi.
  const double theta = std::atan2(x0[1] / omega, x0[0]);
  double s = side == RegionSide::plus ? theta / omega : (theta + std::numbers::pi) / omega;
  double amplitude = std::hypot(x0[0], x0[1] / omega);
  // Crossing downward happens at x > 0, upward at x < 0.
  double x_cross = side == RegionSide::plus ? amplitude : -amplitude;
  double t = t0 + s;

  while (t <= T) {
    const RegionSide next = opposite(side);
    events_.push_back({t, vec2(x_cross, 0.0), side, next});
    side = next;
    omega = side == RegionSide::plus ? w_plus : w_minus;
    segments_.push_back({t, vec2(x_cross, 0.0), omega});
    // From a point on the axis the next crossing is a half-turn away, mirrored in x.
    t += std::numbers::pi / omega;
    x_cross = -x_cross;
  }
}

State HarmonicOracle::state(double t) const {
  if (t < t0_) {
    throw Error(ErrorCode::invalid_argument, "oracle queried before its initial time");
  }
  auto it = segments_.rbegin();
  while (it != segments_.rend() && it->t_start > t) ++it;
  return rotate(it->x_start, it->omega, t - it->t_start);
}

HarmonicOracle harmonic_oracle(double omega2_minus, double omega2_plus, const State& x0, double t0,
                               double T) {
  return HarmonicOracle(omega2_minus, omega2_plus, x0, t0, T);
}

ReferenceRun reference_trajectory(const PwsSystem& sys, const State& x0, double t0, double T,
                                  double tau_ref, double smallest_study_tau,
                                  const EngineConfig& cfg) {
  constexpr double kMinRatio = 50.0;
  if (!(tau_ref > 0.0) || smallest_study_tau / tau_ref < kMinRatio * (1.0 - 1e-12)) {
    throw Error(ErrorCode::invalid_argument,
                "reference step must be at least 50 times smaller than the steps under study");
  }
  ReferenceRun out;
  out.trajectory = integrate(sys, rk4_dvf(sys.f_minus), rk4_dvf(sys.f_plus), x0, t0, T, tau_ref, cfg);
  out.events.reserve(out.trajectory.events.size());
  for (const auto& ev : out.trajectory.events) {
    out.events.push_back({ev.t_hat, ev.x_hat, ev.side_from, ev.side_to});
  }
  return out;
}

}  // namespace pws
