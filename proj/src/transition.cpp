#include "pws/transition.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace pws {

void EngineConfig::validate() const {
  solver.validate();
  if (max_crossings_per_step < 1 || max_events < 1 || max_steps < 1 || crossing_scan_points < 1) {
    throw Error(ErrorCode::config_error, "engine caps must be at least 1");
  }
}

const RegionSegment& Trajectory::segment_of(std::size_t index) const {
  auto it = std::upper_bound(segments.begin(), segments.end(), index,
                             [](std::size_t i, const RegionSegment& s) { return i < s.start_index; });
  if (it == segments.begin()) {
    throw Error(ErrorCode::invalid_argument, "sample precedes the first region segment");
  }
  return *std::prev(it);
}

SolveResult smooth_step_by(const DiscreteVectorField& dvf, double t_a, const State& x_a,
                           double h, const SolverConfig& cfg) {
  const double t_b = t_a + h;
  if (h == 0.0) return {x_a, {}};
  if (!dvf.is_implicit) {
    return {(x_a + h * dvf(t_a, x_a, t_b, x_a)).eval(), {}};
  }
  const auto map = [&](const State& x) { return (x_a + h * dvf(t_a, x_a, t_b, x)).eval(); };
  return solve_fixed_point_equation(map, map(x_a), cfg);
}

SolveResult smooth_step(const DiscreteVectorField& dvf, double t_a, const State& x_a,
                        double t_target, const SolverConfig& cfg) {
  return smooth_step_by(dvf, t_a, x_a, t_target - t_a, cfg);
}

namespace {

double side_sign(RegionSide side) {
  switch (side) {
    case RegionSide::minus: return -1.0;
    case RegionSide::plus: return 1.0;
    case RegionSide::on_surface: break;
  }
  throw Error(ErrorCode::invalid_side, "a leg must start in a region");
}

}  // namespace

LocatedCrossing locate_crossing(const DiscreteVectorField& dvf_from,
                                const SwitchingSurface& surface, double t_a, const State& x_a,
                                double length, RegionSide from_side, const EngineConfig& cfg) {
  constexpr int kMaxHalvings = 60;
  const double sigma = side_sign(from_side);
  if (!(length > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "crossing leg must have positive length");
  }
  const auto phi = [&](double s) {
    return surface.g(smooth_step_by(dvf_from, t_a, x_a, s, cfg.solver).x);
  };

  try {
    // Earliest sampled sign change; Brent alone may pick any root of a multi-root bracket.
    const int n = cfg.crossing_scan_points;
    double s_lo = 0.0;
    double f_lo = surface.g(x_a);
    double s_hi = length;
    bool found = false;
    for (int j = 1; j <= n; ++j) {
      const double s = j == n ? length : length * j / n;
      const double f = phi(s);
      if (f * sigma < 0.0) {
        s_hi = s;
        found = true;
        break;
      }
      s_lo = s;
      f_lo = f;
    }
    if (!found) {
      throw Error(ErrorCode::crossing_localization_failed,
                  "leg does not end on the far side of the switching surface");
    }

    // A leg that starts on S (after an earlier crossing) needs a left end strictly
    // on the departure side.
    for (int m = 0; f_lo * sigma <= 0.0; ++m) {
      if (m == kMaxHalvings) {
        throw Error(ErrorCode::crossing_localization_failed,
                    "no point strictly inside the departure region near the leg start");
      }
      const double mid = s_lo + 0.5 * (s_hi - s_lo);
      const double f = phi(mid);
      if (f * sigma > 0.0) {
        s_lo = mid;
        f_lo = f;
      } else {
        s_hi = mid;
      }
    }

    const RootResult root = bracketed_root(phi, s_lo, s_hi, cfg.solver);
    const SolveResult at_root = smooth_step_by(dvf_from, t_a, x_a, root.root, cfg.solver);
    LocatedCrossing out;
    out.offset = root.root;
    out.t_hat = t_a + root.root;
    out.x_hat = at_root.x;
    out.residual_g = std::abs(surface.g(at_root.x));
    out.root_iterations = root.iterations;
    out.inner = at_root.stats;
    return out;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::crossing_localization_failed) throw;
    throw Error(ErrorCode::crossing_localization_failed,
                "crossing localization failed near t = " + std::to_string(t_a) + ": " + e.what());
  }
}

SolveResult complete_step(const DiscreteVectorField& dvf_to, double t_hat, const State& x_hat,
                          double t_next, const SolverConfig& cfg) {
  return smooth_step_by(dvf_to, t_hat, x_hat, t_next - t_hat, cfg);
}

int count_sign_changes(const DiscreteVectorField& dvf, const SwitchingSurface& surface,
                       double t_a, const State& x_a, double length, int samples,
                       const SolverConfig& cfg) {
  int changes = 0;
  double last = 0.0;
  for (int j = 0; j <= samples; ++j) {
    const double s = length * j / samples;
    const double g = surface.g(smooth_step_by(dvf, t_a, x_a, s, cfg).x);
    if (g == 0.0) continue;
    if (last != 0.0 && (g > 0.0) != (last > 0.0)) ++changes;
    last = g;
  }
  return changes;
}

std::size_t step_count(double t0, double T, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::invalid_argument, "time step must be positive and finite");
  }
  if (!(T >= t0) || !std::isfinite(T) || !std::isfinite(t0)) {
    throw Error(ErrorCode::invalid_argument, "final time must not precede the initial time");
  }
  const double ratio = (T - t0) / tau;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-6 * std::max(1.0, ratio)) {
    throw Error(ErrorCode::invalid_argument, "(T - t0) / tau must be an integer");
  }
  return static_cast<std::size_t>(n);
}

namespace {

struct Leg {
  double t_start;
  State x_start;
  double h;
  RegionSide side;
  State x_end;
  SolveStats stats;
};

}  // namespace

Trajectory integrate(const PwsSystem& sys, const DiscreteVectorField& scheme_minus,
                     const DiscreteVectorField& scheme_plus, const State& x0, double t0, double T,
                     double tau, const EngineConfig& cfg, std::optional<Perturbation> perturbation) {
  cfg.validate();
  if (x0.size() != sys.dim || !x0.allFinite()) {
    throw Error(ErrorCode::invalid_initial_condition, "initial state has the wrong size or is not finite");
  }
  const std::size_t n_steps = step_count(t0, T, tau);
  if (n_steps > cfg.max_steps) {
    throw Error(ErrorCode::invalid_argument, "step count exceeds the configured cap");
  }
  const auto& surface = sys.surface;
  RegionSide active = side_of(surface, x0);
  if (active == RegionSide::on_surface) {
    throw Error(ErrorCode::invalid_initial_condition, "initial state lies on the switching surface");
  }
  const double shift = perturbation ? perturbation->c * std::pow(tau, perturbation->p) : 0.0;
  const auto scheme = [&](RegionSide side) -> const DiscreteVectorField& {
    return side == RegionSide::minus ? scheme_minus : scheme_plus;
  };

  Trajectory traj;
  traj.tau = tau;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.times.push_back(t0);
  traj.states.push_back(x0);
  traj.segments.push_back({0, active, conserved_for_side(sys, active).psi(x0)});

  std::vector<Leg> legs;
  std::vector<std::pair<std::size_t, std::size_t>> step_events;  // (event index, leg index)
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_k = t0 + static_cast<double>(k) * tau;
    const double t_next = t0 + static_cast<double>(k + 1) * tau;
    legs.clear();
    step_events.clear();

    RegionSide leg_side = active;
    double leg_offset = 0.0;
    double leg_t = t_k;
    State leg_x = traj.states.back();
    int crossings = 0;

    while (true) {
      const double h = tau - leg_offset;
      SolveResult step = smooth_step_by(scheme(leg_side), leg_t, leg_x, h, cfg.solver);
      legs.push_back({leg_t, leg_x, h, leg_side, step.x, step.stats});
      // Zero-length leg, or a perturbed crossing time beyond t_{k+1}.
      if (h <= 0.0) break;

      const RegionSide start_side = side_of(surface, leg_x);
      const RegionSide end_side = side_of(surface, step.x);
      if (end_side == leg_side) break;
      // Re-entry after a perturbed crossing left the state behind the surface.
      if (start_side == opposite(leg_side)) break;

      double offset = h;
      State x_hat = step.x;
      double residual_g = std::abs(surface.g(step.x));
      int root_iterations = 0;
      if (end_side == RegionSide::on_surface) {
        if (start_side == RegionSide::on_surface) break;
        // Landed on S: a crossing at t_{k+1} unless the flow turns back.
        const InterfaceClassification cls = classify_interface_point(sys, step.x, t_next);
        if (cls.kind == InterfaceKind::sliding || cls.kind == InterfaceKind::repelling) {
          throw Error(ErrorCode::transversality_violation,
                      std::string("trajectory reached a ") + std::string(to_string(cls.kind)) +
                          " point of the switching surface");
        }
        const RegionSide dest =
            cls.kind == InterfaceKind::transversal_up ? RegionSide::plus : RegionSide::minus;
        if (dest == leg_side) break;
      } else {
        const LocatedCrossing located =
            locate_crossing(scheme(leg_side), surface, leg_t, leg_x, h, leg_side, cfg);
        offset = located.offset;
        x_hat = located.x_hat;
        residual_g = located.residual_g;
        root_iterations = located.root_iterations;
        legs.back().h = offset;
        legs.back().x_end = located.x_hat;
        legs.back().stats = located.inner;
      }

      if (++crossings > cfg.max_crossings_per_step) {
        throw Error(ErrorCode::step_too_large,
                    "more than " + std::to_string(cfg.max_crossings_per_step) +
                        " crossings in one step near t = " + std::to_string(t_k));
      }
      if (traj.events.size() >= cfg.max_events) {
        throw Error(ErrorCode::runaway_switching, "event count exceeds the configured cap");
      }

      require_regular_surface_point(surface, x_hat);
      CrossingEvent ev;
      ev.t_hat = t_k + leg_offset + offset;
      ev.x_hat = x_hat;
      ev.side_from = leg_side;
      ev.side_to = opposite(leg_side);
      ev.residual_g = residual_g;
      ev.psi_level_residual = (conserved_for_side(sys, leg_side).psi(x_hat) -
                               traj.segments.back().psi_ref)
                                  .cwiseAbs()
                                  .maxCoeff();
      ev.stats_locate = legs.back().stats;
      ev.stats_locate.iterations = root_iterations;
      ev.stats_locate.residual = residual_g;
      ev.perturbation_applied = shift;
      ev.step_index = k;
      ev.leg_t = leg_t;
      ev.leg_x = leg_x;
      ev.leg_length = h;

      const State grad = surface.grad_g(x_hat);
      const double a_minus = grad.dot(sys.f_minus(ev.t_hat, x_hat));
      const double a_plus = grad.dot(sys.f_plus(ev.t_hat, x_hat));
      if ((a_minus > 0.0) != (a_plus > 0.0)) {
        throw Error(ErrorCode::transversality_violation,
                    a_minus < 0.0 ? "repelling crossing point" : "sliding crossing point");
      }
      ev.alpha_sq_hat = std::min(std::abs(a_minus), std::abs(a_plus));

      step_events.emplace_back(traj.events.size(), legs.size() - 1);
      traj.events.push_back(std::move(ev));
      leg_side = opposite(leg_side);
      leg_offset += offset + shift;
      leg_t = t_k + leg_offset;
      leg_x = x_hat;
      traj.segments.push_back(
          {k + 1, leg_side, conserved_for_side(sys, leg_side).psi(x_hat)});
    }

    // Completion statistics and the two-leg residual of each transition.
    for (const auto& [event_index, leg_index] : step_events) {
      const Leg& in = legs[leg_index];
      const Leg& out = legs[leg_index + 1];
      const State lhs = out.x_end - in.x_start -
                        in.h * scheme(in.side)(in.t_start, in.x_start, in.t_start + in.h, in.x_end) -
                        out.h * scheme(out.side)(out.t_start, out.x_start, out.t_start + out.h, out.x_end);
      auto& ev = traj.events[event_index];
      ev.stats_complete = out.stats;
      ev.convex_residual = lhs.norm();
    }

    active = leg_side;
    traj.times.push_back(t_next);
    traj.states.push_back(legs.back().x_end);
  }
  return traj;
}

}  // namespace pws
