#include "pws/schemes.hpp"

#include <utility>

namespace pws {

DiscreteVectorField implicit_midpoint_dvf(Field f, std::optional<ConservedSet> conserves) {
  DiscreteVectorField d;
  d.name = "dmm-midpoint";
  d.eval = [f = std::move(f)](double ta, const State& xa, double tb, const State& xb) {
    return f(0.5 * (ta + tb), (0.5 * (xa + xb)).eval());
  };
  d.consistency_order = 2;
  d.is_implicit = true;
  d.is_symmetric = true;
  d.conserves = std::move(conserves);
  return d;
}

DiscreteVectorField elliptic_dmm_dvf(double a) {
  DiscreteVectorField d;
  d.name = "dmm-elliptic";
  d.eval = [a](double, const State& xa, double, const State& xb) {
    State out(2);
    out[0] = xa[1] + xb[1];
    out[1] = xa[0] * xa[0] + xa[0] * xb[0] + xb[0] * xb[0] + a;
    return out;
  };
  d.consistency_order = 2;
  d.is_implicit = true;
  d.is_symmetric = true;
  d.conserves = elliptic_invariant(a);
  return d;
}

DiscreteVectorField rk2_dvf(Field f) {
  DiscreteVectorField d;
  d.name = "rk2";
  d.eval = [f = std::move(f)](double ta, const State& xa, double tb, const State&) {
    const double h = tb - ta;
    const State k1 = f(ta, xa);
    return f(ta + 0.5 * h, (xa + 0.5 * h * k1).eval());
  };
  d.consistency_order = 2;
  d.is_implicit = false;
  return d;
}

DiscreteVectorField rk4_dvf(Field f) {
  DiscreteVectorField d;
  d.name = "rk4";
  d.eval = [f = std::move(f)](double ta, const State& xa, double tb, const State&) {
    const double h = tb - ta;
    const double tm = ta + 0.5 * h;
    const State k1 = f(ta, xa);
    const State k2 = f(tm, (xa + 0.5 * h * k1).eval());
    const State k3 = f(tm, (xa + 0.5 * h * k2).eval());
    const State k4 = f(tb, (xa + h * k3).eval());
    return ((k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0).eval();
  };
  d.consistency_order = 4;
  d.is_implicit = false;
  return d;
}

DiscreteVectorField make_scheme(std::string_view name, const NamedSystem& sys, RegionSide side) {
  const auto field = [&]() -> Field {
    return side == RegionSide::minus ? sys.system.f_minus : sys.system.f_plus;
  };
  if (side == RegionSide::on_surface) {
    throw Error(ErrorCode::invalid_side, "schemes are attached to a region, not to the surface");
  }
  if (name == "dmm-midpoint") {
    std::optional<ConservedSet> conserves;
    if (sys.midpoint_conservative) conserves = conserved_for_side(sys.system, side);
    return implicit_midpoint_dvf(field(), std::move(conserves));
  }
  if (name == "dmm-elliptic") {
    if (sys.name != "elliptic") {
      throw Error(ErrorCode::config_error, "scheme 'dmm-elliptic' requires the elliptic system");
    }
    return elliptic_dmm_dvf(sys.params.at(side == RegionSide::minus ? "a_minus" : "a_plus"));
  }
  if (name == "rk2") return rk2_dvf(field());
  if (name == "rk4") return rk4_dvf(field());
  throw Error(ErrorCode::config_error, "unknown scheme '" + std::string(name) + "'");
}

std::vector<std::string> scheme_names() { return {"dmm-midpoint", "dmm-elliptic", "rk2", "rk4"}; }

std::string default_scheme(const NamedSystem& sys) {
  return sys.name == "elliptic" ? "dmm-elliptic" : "dmm-midpoint";
}

}  // namespace pws
