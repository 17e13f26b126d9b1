#include "pws/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pws {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::evaluation_error: return "evaluation_error";
    case ErrorCode::invalid_side: return "invalid_side";
    case ErrorCode::not_on_surface: return "not_on_surface";
    case ErrorCode::degenerate_tangency: return "degenerate_tangency";
    case ErrorCode::gradient_vanishes: return "gradient_vanishes";
    case ErrorCode::diverging_fixed_point: return "diverging_fixed_point";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::singular_jacobian: return "singular_jacobian";
    case ErrorCode::bracket_error: return "bracket_error";
    case ErrorCode::no_real_separation: return "no_real_separation";
    case ErrorCode::crossing_localization_failed: return "crossing_localization_failed";
    case ErrorCode::invalid_initial_condition: return "invalid_initial_condition";
    case ErrorCode::transversality_violation: return "transversality_violation";
    case ErrorCode::step_too_large: return "step_too_large";
    case ErrorCode::runaway_switching: return "runaway_switching";
    case ErrorCode::event_mismatch: return "event_mismatch";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::unsupported_system: return "unsupported_system";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::config_error: return "config_error";
  }
  return "unknown";
}

bool is_config_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::config_error:
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_initial_condition:
    case ErrorCode::unsupported_system:
    case ErrorCode::insufficient_data:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(RegionSide side) noexcept {
  switch (side) {
    case RegionSide::minus: return "minus";
    case RegionSide::plus: return "plus";
    case RegionSide::on_surface: return "on_surface";
  }
  return "unknown";
}

RegionSide opposite(RegionSide side) {
  switch (side) {
    case RegionSide::minus: return RegionSide::plus;
    case RegionSide::plus: return RegionSide::minus;
    case RegionSide::on_surface: break;
  }
  throw Error(ErrorCode::invalid_side, "on_surface has no opposite side");
}

std::string_view to_string(InterfaceKind kind) noexcept {
  switch (kind) {
    case InterfaceKind::transversal_up: return "transversal_up";
    case InterfaceKind::transversal_down: return "transversal_down";
    case InterfaceKind::repelling: return "repelling";
    case InterfaceKind::sliding: return "sliding";
  }
  return "unknown";
}

double surface_band(const SwitchingSurface& surface, const State& x) {
  return surface.on_surface_tol * (1.0 + x.norm() * surface.grad_g(x).norm());
}

RegionSide side_of(const SwitchingSurface& surface, const State& x) {
  const double gx = surface.g(x);
  if (!std::isfinite(gx)) {
    throw Error(ErrorCode::evaluation_error, "switching function returned a non-finite value");
  }
  const double band = surface_band(surface, x);
  if (gx < -band) return RegionSide::minus;
  if (gx > band) return RegionSide::plus;
  return RegionSide::on_surface;
}

State field_for_side(const PwsSystem& sys, RegionSide side, double t, const State& x) {
  switch (side) {
    case RegionSide::minus: return sys.f_minus(t, x);
    case RegionSide::plus: return sys.f_plus(t, x);
    case RegionSide::on_surface: break;
  }
  throw Error(ErrorCode::invalid_side, "dynamics are undefined on the switching surface");
}

const ConservedSet& conserved_for_side(const PwsSystem& sys, RegionSide side) {
  switch (side) {
    case RegionSide::minus: return sys.conserved_minus;
    case RegionSide::plus: return sys.conserved_plus;
    case RegionSide::on_surface: break;
  }
  throw Error(ErrorCode::invalid_side, "no conserved set is attached to the surface");
}

double InterfaceClassification::alpha_sq() const {
  return std::min(std::abs(a_minus), std::abs(a_plus));
}

InterfaceClassification classify_interface_point(const PwsSystem& sys, const State& x,
                                                 double t) {
  const auto& surface = sys.surface;
  const double gx = surface.g(x);
  if (!std::isfinite(gx) || std::abs(gx) > surface_band(surface, x)) {
    throw Error(ErrorCode::not_on_surface,
                "point is not on the switching surface (|g| = " + std::to_string(std::abs(gx)) +
                    ")");
  }
  require_regular_surface_point(surface, x);
  const State grad = surface.grad_g(x);
  const State fm = sys.f_minus(t, x);
  const State fp = sys.f_plus(t, x);
  InterfaceClassification out{InterfaceKind::transversal_up, grad.dot(fm), grad.dot(fp)};

  const auto degenerate = [&](double a, const State& f) {
    return std::abs(a) <= surface.on_surface_tol * (1.0 + grad.norm() * f.norm());
  };
  if (degenerate(out.a_minus, fm) || degenerate(out.a_plus, fp)) {
    throw Error(ErrorCode::degenerate_tangency,
                "vector field is tangent to the switching surface; transversality fails");
  }
  if (out.a_minus > 0 && out.a_plus > 0) {
    out.kind = InterfaceKind::transversal_up;
  } else if (out.a_minus < 0 && out.a_plus < 0) {
    out.kind = InterfaceKind::transversal_down;
  } else if (out.a_minus < 0) {
    out.kind = InterfaceKind::repelling;
  } else {
    out.kind = InterfaceKind::sliding;
  }
  return out;
}

void require_regular_surface_point(const SwitchingSurface& surface, const State& x) {
  const State grad = surface.grad_g(x);
  if (!grad.allFinite() || grad.norm() <= 1e-14) {
    throw Error(ErrorCode::gradient_vanishes, "grad g vanishes on the switching surface");
  }
}

bool has_full_row_rank(const ConservedSet& set, const State& x, double rank_tol) {
  const Matrix jac = set.grad_psi(x);
  if (jac.rows() != set.count || jac.rows() > jac.cols()) return false;
  Eigen::JacobiSVD<Matrix> svd(jac);
  return svd.singularValues().minCoeff() > rank_tol;
}

double hessian_asymmetry(const SwitchingSurface& surface, const State& x) {
  if (!surface.has_hessian()) return 0.0;
  const Matrix h = surface.hess_g(x);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  return (h - h.transpose()).cwiseAbs().maxCoeff() / scale;
}

double psi_difference(const ConservedSet& set, const State& a, const State& b) {
  return (set.psi(a) - set.psi(b)).cwiseAbs().maxCoeff();
}

}  // namespace pws
