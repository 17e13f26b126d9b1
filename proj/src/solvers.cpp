#include "pws/solvers.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace pws {

void SolverConfig::validate() const {
  if (!(fp_tol > 0.0) || !(root_tol_t > 0.0) || !(fd_jacobian_step > 0.0)) {
    throw Error(ErrorCode::config_error, "solver tolerances must be positive");
  }
  if (fp_max_iter < 1 || newton_fallback_after < 1 || root_max_iter < 1) {
    throw Error(ErrorCode::config_error, "solver iteration caps must be at least 1");
  }
}

SolveResult fixed_point(const VectorMap& map, const State& x0, const SolverConfig& cfg) {
  constexpr int kDivergenceWindow = 5;
  SolveResult out{x0, {}};
  double prev_update = -1.0;
  int expanding = 0;

  for (int it = 1; it <= cfg.fp_max_iter; ++it) {
    State next = map(out.x);
    if (!next.allFinite()) {
      throw Error(ErrorCode::diverging_fixed_point, "fixed-point map produced non-finite values");
    }
    const double update = (next - out.x).norm();
    out.x = std::move(next);
    out.stats.iterations = it;
    out.stats.residual = update;

    const double tol = cfg.fp_tol * (1.0 + out.x.norm());
    if (prev_update > 0.0) {
      const double ratio = update / prev_update;
      // Ratios measured at round-off level are noise.
      if (prev_update > 100.0 * tol) {
        out.stats.contraction_estimate = std::max(out.stats.contraction_estimate, ratio);
      }
      expanding = ratio >= 1.0 ? expanding + 1 : 0;
      if (expanding >= kDivergenceWindow && update > tol) {
        throw Error(ErrorCode::diverging_fixed_point,
                    "fixed-point update ratio >= 1 for " + std::to_string(kDivergenceWindow) +
                        " iterations; reduce the step size");
      }
    }
    if (update <= tol) return out;
    prev_update = update;
  }
  throw Error(ErrorCode::no_convergence, "fixed-point iteration hit the iteration cap");
}

namespace {

Matrix forward_difference_jacobian(const VectorMap& f, const State& x, const State& fx,
                                   double rel_step) {
  Matrix jac(fx.size(), x.size());
  State xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = rel_step * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    jac.col(j) = (f(xp) - fx) / h;
    xp[j] = x[j];
  }
  return jac;
}

}  // namespace

SolveResult newton(const VectorMap& residual, const State& x0, const SolverConfig& cfg,
                   const JacobianFn& jacobian) {
  constexpr double kMaxCondition = 1e14;
  SolveResult out{x0, {}};
  out.stats.method_used = SolveMethod::newton;
  const double tol = cfg.fp_tol * (1.0 + x0.norm());
  double prev_step = -1.0;

  State fx = residual(out.x);
  for (int it = 0; it <= cfg.fp_max_iter; ++it) {
    if (!fx.allFinite()) {
      throw Error(ErrorCode::no_convergence, "Newton residual became non-finite");
    }
    out.stats.residual = fx.norm();
    if (out.stats.residual <= tol) return out;
    if (it == cfg.fp_max_iter) break;

    const Matrix jac = jacobian ? jacobian(out.x)
                                : forward_difference_jacobian(residual, out.x, fx,
                                                              cfg.fd_jacobian_step);
    Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || !(sv.minCoeff() > 0.0) || sv.maxCoeff() / sv.minCoeff() > kMaxCondition) {
      throw Error(ErrorCode::singular_jacobian, "Newton Jacobian is singular or ill-conditioned");
    }
    const State step = svd.solve(-fx);
    out.x += step;
    out.stats.iterations = it + 1;
    const double step_norm = step.norm();
    if (prev_step > 0.0) out.stats.contraction_estimate = step_norm / prev_step;
    prev_step = step_norm;
    fx = residual(out.x);
  }
  throw Error(ErrorCode::no_convergence, "Newton iteration hit the iteration cap");
}

SolveResult solve_fixed_point_equation(const VectorMap& map, const State& x0,
                                       const SolverConfig& cfg) {
  SolverConfig fp_cfg = cfg;
  fp_cfg.fp_max_iter = std::min(cfg.fp_max_iter, cfg.newton_fallback_after);
  try {
    return fixed_point(map, x0, fp_cfg);
  } catch (const Error& fp_error) {
    if (fp_error.code() != ErrorCode::diverging_fixed_point &&
        fp_error.code() != ErrorCode::no_convergence) {
      throw;
    }
    try {
      return newton([&map](const State& x) { return (x - map(x)).eval(); }, x0, cfg);
    } catch (const Error& newton_error) {
      throw Error(fp_error.code(), std::string(fp_error.what()) +
                                       " (Newton fallback: " + newton_error.what() + ")");
    }
  }
}

RootResult bracketed_root(const std::function<double(double)>& phi, double a, double b,
                          const SolverConfig& cfg) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  double fa = phi(a);
  double fb = phi(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw Error(ErrorCode::bracket_error, "bracket endpoint evaluates to a non-finite value");
  }
  if (fa == 0.0) return {a, 0.0, 0.0, 0};
  if (fb == 0.0) return {b, 0.0, 0.0, 0};
  if ((fa > 0.0) == (fb > 0.0)) {
    throw Error(ErrorCode::bracket_error, "phi(a) and phi(b) do not change sign");
  }

  // Brent (1973), zero-in: b is the best iterate, [b, c] always brackets the root.
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  RootResult out;
  for (int it = 1; it <= cfg.root_max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * kEps * std::abs(b) + 0.5 * cfg.root_tol_t;
    const double m = 0.5 * (c - b);
    out = {b, std::abs(fb), std::abs(c - b), it};
    if (std::abs(m) <= tol || fb == 0.0) return out;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < 3.0 * m * q - std::abs(tol * q) && p < std::abs(0.5 * e * q)) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = phi(b);
    if (!std::isfinite(fb)) {
      throw Error(ErrorCode::bracket_error, "phi returned a non-finite value inside the bracket");
    }
  }
  throw Error(ErrorCode::no_convergence, "bracketed root search hit the iteration cap");
}

double quadratic_root_bound(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "quadratic_root_bound needs a, b > 0 and c >= 0");
  }
  const double disc = b * b - 4.0 * a * c;
  if (!(c < b * b / (4.0 * a)) || disc <= 0.0) {
    throw Error(ErrorCode::no_real_separation, "c >= b^2 / (4a): roots are not separated");
  }
  // Cancellation-free form of (b - sqrt(disc)) / (2a).
  const double r_minus = 2.0 * c / (b + std::sqrt(disc));
  const double bound = quadratic_root_series_bound(a, b, c);
  if (r_minus > bound * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::evaluation_error, "smaller root exceeds its series bound");
  }
  return r_minus;
}

double quadratic_root_series_bound(double a, double b, double c) {
  return (c / b) / (1.0 - 2.0 * a * c / (b * b));
}

}  // namespace pws
