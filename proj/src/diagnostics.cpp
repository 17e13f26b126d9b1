#include "pws/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pws {

std::vector<double> conserved_error_series(const Trajectory& traj, const PwsSystem& sys) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const RegionSegment& seg = traj.segment_of(k);
    const State psi = conserved_for_side(sys, seg.side).psi(traj.states[k]);
    out.push_back((psi - seg.psi_ref).cwiseAbs().maxCoeff());
  }
  return out;
}

std::vector<double> crossing_time_errors(const Trajectory& traj,
                                         const std::vector<OracleEvent>& oracle) {
  if (traj.events.size() != oracle.size()) {
    throw Error(ErrorCode::event_mismatch,
                "trajectory has " + std::to_string(traj.events.size()) + " events, reference has " +
                    std::to_string(oracle.size()));
  }
  std::vector<double> out;
  out.reserve(oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    out.push_back(std::abs(oracle[i].t_star - traj.events[i].t_hat));
  }
  return out;
}

OrderEstimate estimate_order(const std::vector<double>& taus, const std::vector<double>& errors) {
  if (taus.size() != errors.size()) {
    throw Error(ErrorCode::invalid_argument, "tau and error sequences differ in length");
  }
  OrderEstimate out;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] > 0.0 && errors[i] > 0.0 && std::isfinite(taus[i]) && std::isfinite(errors[i])) {
      out.taus.push_back(taus[i]);
      out.errors.push_back(errors[i]);
    } else {
      ++dropped;
    }
  }
  if (dropped > 0) {
    out.note = std::to_string(dropped) + " non-positive or non-finite point(s) excluded";
  }
  const std::size_t n = out.taus.size();
  if (n < 3) {
    throw Error(ErrorCode::insufficient_data, "order estimate needs at least 3 usable points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(out.taus[i]);
    my += std::log(out.errors[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(out.taus[i]) - mx;
    const double dy = std::log(out.errors[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw Error(ErrorCode::insufficient_data, "order estimate needs at least two distinct steps");
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return out;
}

namespace {

double orientation(RegionSide from) { return from == RegionSide::minus ? 1.0 : -1.0; }

}  // namespace

BoundReport check_crossing_bound(const PwsSystem& sys, const Trajectory& traj,
                                 const CrossingEvent& event, double t_star,
                                 const StateFunction& exact_state, int samples) {
  const auto& surface = sys.surface;
  if (!surface.has_hessian()) {
    throw Error(ErrorCode::unsupported_system, "crossing bound check needs the Hessian of g");
  }
  const double tau = traj.tau;
  const double t_k = traj.times.at(event.step_index);
  const double lo = std::min({t_k, t_star, event.t_hat});
  const double hi = std::max({t_k + tau, t_star, event.t_hat});
  const double fd = std::cbrt(std::numeric_limits<double>::epsilon());

  const State x_star = exact_state(t_star);
  const State grad_star = surface.grad_g(x_star);
  BoundReport report;
  report.alpha_sq_hat = std::min(std::abs(grad_star.dot(sys.f_minus(t_star, x_star))),
                                 std::abs(grad_star.dot(sys.f_plus(t_star, x_star))));
  report.L_g_hat = grad_star.norm();

  double m = 0.0;
  for (int j = 0; j <= samples; ++j) {
    const double t = lo + (hi - lo) * j / samples;
    if (t == t_star) continue;
    const RegionSide side = t < t_star ? event.side_from : event.side_to;
    const State x = exact_state(t);
    const State xdot = field_for_side(sys, side, t, x);
    const double eps = fd / std::max(1.0, xdot.norm());
    const State xddot = (field_for_side(sys, side, t + eps, (x + eps * xdot).eval()) -
                         field_for_side(sys, side, t - eps, (x - eps * xdot).eval())) /
                        (2.0 * eps);
    const State grad = surface.grad_g(x);
    m = std::max(m, std::abs(xdot.dot(surface.hess_g(x) * xdot) + grad.dot(xddot)));
    report.L_g_hat = std::max(report.L_g_hat, grad.norm());
  }
  report.M_hat = 0.5 * m;

  const double dt = std::abs(event.t_hat - t_star);
  const double dx = (exact_state(event.t_hat) - x_star).norm();
  report.lhs = dt;
  report.rhs = (report.M_hat * dt * dt + report.L_g_hat * dx) / report.alpha_sq_hat;
  report.satisfied = report.lhs <= report.rhs * (1.0 + 1e-6);
  report.note = "M, L_g and alpha^2 are sampled proxies";
  return report;
}

BoundReport check_discrete_crossing_bound(const PwsSystem& sys,
                                          const DiscreteVectorField& scheme_minus,
                                          const DiscreteVectorField& scheme_plus,
                                          const CrossingEvent& event, const SolverConfig& cfg,
                                          int samples) {
  const auto& surface = sys.surface;
  if (!surface.has_hessian()) {
    throw Error(ErrorCode::unsupported_system, "crossing bound check needs the Hessian of g");
  }
  const auto& from = event.side_from == RegionSide::minus ? scheme_minus : scheme_plus;
  const auto& to = event.side_from == RegionSide::minus ? scheme_plus : scheme_minus;
  const double sigma = orientation(event.side_from);
  const double t_hat = event.t_hat;
  const State& x_hat = event.x_hat;
  const double t_start = event.leg_t;
  const double t_end = event.leg_t + event.leg_length;
  const State grad_hat = surface.grad_g(x_hat);

  struct Sample {
    double t;
    State x;
    State f;  // discrete field over the sub-leg between t and t_hat
  };
  std::vector<Sample> pts;
  for (int j = 0; j <= samples; ++j) {
    const double t = t_start + (t_end - t_start) * j / samples;
    if (t <= t_hat) {
      const State x = smooth_step_by(from, t_start, event.leg_x, t - t_start, cfg).x;
      pts.push_back({t, x, from(t, x, t_hat, x_hat)});
    } else {
      const State x = smooth_step_by(to, t_hat, x_hat, t - t_hat, cfg).x;
      pts.push_back({t, x, to(t_hat, x_hat, t, x)});
    }
  }

  BoundReport report;
  report.alpha_sq_hat = std::numeric_limits<double>::infinity();
  report.L_g_hat = grad_hat.norm();
  double m_hat = 0.0;
  for (const auto& p : pts) {
    const double a = sigma * grad_hat.dot(p.f);
    if (!(a > 0.0)) report.discrete_transversal = false;
    report.alpha_sq_hat = std::min(report.alpha_sq_hat, std::abs(a));
    report.L_g_hat = std::max(report.L_g_hat, surface.grad_g(p.x).norm());
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const State y = p.x + s * (x_hat - p.x);
      m_hat = std::max(m_hat, std::abs(p.f.dot(surface.hess_g(y) * p.f)));
    }
  }
  report.M_hat = 0.5 * m_hat;

  bool ok = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    const double dt = std::abs(p.t - t_hat);
    if (dt == 0.0) continue;
    const double rhs =
        (report.M_hat * dt * dt + report.L_g_hat * (p.x - x_hat).norm()) / report.alpha_sq_hat;
    ok = ok && dt <= rhs * (1.0 + 1e-6);
    if (dt - rhs > worst) {
      worst = dt - rhs;
      report.lhs = dt;
      report.rhs = rhs;
    }
  }
  report.satisfied = ok && report.discrete_transversal;
  report.note = "M-hat sampled on the step grid only; suprema may be under-estimated";
  return report;
}

DriftSummary drift_summary(const Trajectory& traj, const std::vector<double>& errors,
                           std::size_t min_samples) {
  DriftSummary out;
  for (double e : errors) out.max_error = std::max(out.max_error, e);
  const std::size_t n = traj.states.size();
  for (std::size_t s = 0; s < traj.segments.size(); ++s) {
    const std::size_t begin = traj.segments[s].start_index;
    const std::size_t end = s + 1 < traj.segments.size() ? traj.segments[s + 1].start_index : n;
    if (end <= begin || end - begin < min_samples) continue;
    double mt = 0.0;
    double me = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      mt += traj.times[k];
      me += errors[k];
    }
    const double count = static_cast<double>(end - begin);
    mt /= count;
    me /= count;
    double sxy = 0.0;
    for (std::size_t k = begin; k < end; ++k) sxy += (traj.times[k] - mt) * (errors[k] - me);
    ++out.segments_checked;
    if (sxy > 0.0) ++out.segments_increasing;
  }
  return out;
}

}  // namespace pws
