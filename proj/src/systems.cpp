#include "pws/systems.hpp"

#include <set>

namespace pws {

namespace {

State vec2(double a, double b) {
  State v(2);
  v << a, b;
  return v;
}

/// g = y, the horizontal axis.
SwitchingSurface horizontal_axis() {
  SwitchingSurface s;
  s.g = [](const State& x) { return x[1]; };
  s.grad_g = [](const State&) { return vec2(0.0, 1.0); };
  s.hess_g = [](const State&) { return Matrix::Zero(2, 2).eval(); };
  return s;
}

double take(const ParamMap& overrides, std::string_view key, double fallback) {
  const auto it = overrides.find(key);
  return it == overrides.end() ? fallback : it->second;
}

void reject_unknown(std::string_view system, const ParamMap& overrides,
                    std::initializer_list<std::string_view> known) {
  const std::set<std::string_view> allowed(known);
  for (const auto& [key, value] : overrides) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::config_error, "unknown parameter '" + key + "' for system '" +
                                               std::string(system) + "'");
    }
  }
}

}  // namespace

ConservedSet harmonic_invariant(double omega2) {
  ConservedSet c;
  c.psi = [omega2](const State& x) {
    State v(1);
    v[0] = 0.5 * (omega2 * x[0] * x[0] + x[1] * x[1]);
    return v;
  };
  c.grad_psi = [omega2](const State& x) {
    Matrix m(1, 2);
    m << omega2 * x[0], x[1];
    return m;
  };
  c.count = 1;
  return c;
}

ConservedSet elliptic_invariant(double a) {
  ConservedSet c;
  c.psi = [a](const State& x) {
    State v(1);
    v[0] = x[1] * x[1] - x[0] * x[0] * x[0] - a * x[0];
    return v;
  };
  c.grad_psi = [a](const State& x) {
    Matrix m(1, 2);
    m << -3.0 * x[0] * x[0] - a, 2.0 * x[1];
    return m;
  };
  c.count = 1;
  return c;
}

NamedSystem make_harmonic(double omega2_minus, double omega2_plus) {
  if (!(omega2_minus > 0.0) || !(omega2_plus > 0.0)) {
    throw Error(ErrorCode::config_error, "harmonic: omega2 values must be positive");
  }
  NamedSystem out;
  out.name = "harmonic";
  out.params = {{"omega2_minus", omega2_minus}, {"omega2_plus", omega2_plus}};
  out.midpoint_conservative = true;
  out.default_x0 = vec2(1.0, 1.0);

  auto& sys = out.system;
  sys.dim = 2;
  sys.f_minus = [omega2_minus](double, const State& x) { return vec2(x[1], -omega2_minus * x[0]); };
  sys.f_plus = [omega2_plus](double, const State& x) { return vec2(x[1], -omega2_plus * x[0]); };
  sys.surface = horizontal_axis();
  sys.conserved_minus = harmonic_invariant(omega2_minus);
  sys.conserved_plus = harmonic_invariant(omega2_plus);
  return out;
}

NamedSystem make_elliptic(double a_minus, double a_plus, double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::config_error, "elliptic: radius must be positive");
  }
  NamedSystem out;
  out.name = "elliptic";
  out.params = {{"a_minus", a_minus}, {"a_plus", a_plus}, {"radius", radius}};
  out.default_x0 = vec2(-1.0, -1.0);

  auto& sys = out.system;
  sys.dim = 2;
  sys.f_minus = [a_minus](double, const State& x) {
    return vec2(2.0 * x[1], 3.0 * x[0] * x[0] + a_minus);
  };
  sys.f_plus = [a_plus](double, const State& x) {
    return vec2(2.0 * x[1], 3.0 * x[0] * x[0] + a_plus);
  };
  const double r2 = radius * radius;
  sys.surface.g = [r2](const State& x) { return x[0] * x[0] + x[1] * x[1] - r2; };
  sys.surface.grad_g = [](const State& x) { return vec2(2.0 * x[0], 2.0 * x[1]); };
  sys.surface.hess_g = [](const State&) { return (2.0 * Matrix::Identity(2, 2)).eval(); };
  sys.conserved_minus = elliptic_invariant(a_minus);
  sys.conserved_plus = elliptic_invariant(a_plus);
  return out;
}

NamedSystem make_constant_flow(const State& v_minus, const State& v_plus) {
  if (v_minus.size() != 2 || v_plus.size() != 2) {
    throw Error(ErrorCode::config_error, "constant: velocities must be 2-vectors");
  }
  NamedSystem out;
  out.name = "constant";
  out.params = {{"minus_vx", v_minus[0]},
                {"minus_vy", v_minus[1]},
                {"plus_vx", v_plus[0]},
                {"plus_vy", v_plus[1]}};
  out.midpoint_conservative = true;
  out.default_x0 = vec2(0.0, 1.0);

  const auto invariant = [](const State& v) {
    ConservedSet c;
    c.psi = [v](const State& x) {
      State out(1);
      out[0] = v[1] * x[0] - v[0] * x[1];
      return out;
    };
    c.grad_psi = [v](const State&) {
      Matrix m(1, 2);
      m << v[1], -v[0];
      return m;
    };
    return c;
  };

  auto& sys = out.system;
  sys.dim = 2;
  sys.f_minus = [v_minus](double, const State&) { return v_minus; };
  sys.f_plus = [v_plus](double, const State&) { return v_plus; };
  sys.surface = horizontal_axis();
  sys.conserved_minus = invariant(v_minus);
  sys.conserved_plus = invariant(v_plus);
  return out;
}

NamedSystem make_system(std::string_view name, const ParamMap& overrides) {
  if (name == "harmonic") {
    reject_unknown(name, overrides, {"omega2_minus", "omega2_plus"});
    return make_harmonic(take(overrides, "omega2_minus", 3.0), take(overrides, "omega2_plus", 1.0));
  }
  if (name == "elliptic") {
    reject_unknown(name, overrides, {"a_minus", "a_plus", "radius"});
    return make_elliptic(take(overrides, "a_minus", -3.0), take(overrides, "a_plus", -2.0),
                         take(overrides, "radius", 1.0));
  }
  if (name == "constant") {
    reject_unknown(name, overrides, {"minus_vx", "minus_vy", "plus_vx", "plus_vy"});
    return make_constant_flow(
        vec2(take(overrides, "minus_vx", 0.0), take(overrides, "minus_vy", -1.0)),
        vec2(take(overrides, "plus_vx", 0.0), take(overrides, "plus_vy", -1.0)));
  }
  throw Error(ErrorCode::config_error, "unknown system '" + std::string(name) + "'");
}

std::vector<std::string> system_names() { return {"harmonic", "elliptic", "constant"}; }

}  // namespace pws
