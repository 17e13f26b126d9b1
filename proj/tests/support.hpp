#pragma once

// Test-side closed forms, written independently of the library oracles.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace pws_test {

struct HarmonicCrossing {
  double t;
  double x;
};

// Switched oscillator across g = y. In a half-plane with frequency w the point
// z = x + i y / w turns clockwise: z(t) = z0 exp(-i w t). A crossing is Im z = 0.
class HarmonicClosedForm {
 public:
  HarmonicClosedForm(double w2_minus, double w2_plus, double x0, double y0, double T)
      : wm_(std::sqrt(w2_minus)), wp_(std::sqrt(w2_plus)) {
    double t = 0.0;
    double x = x0;
    double y = y0;
    bool upper = y0 > 0.0;
    while (true) {
      const double w = upper ? wp_ : wm_;
      const std::complex<double> z(x, y / w);
      // Clockwise angle from z to the real axis.
      const double angle = upper ? std::arg(z) : std::arg(z) + std::numbers::pi;
      legs_.push_back({t, x, y, w});
      const double t_cross = t + angle / w;
      if (t_cross > T) break;
      const std::complex<double> zc = z * std::polar(1.0, -angle);
      t = t_cross;
      x = zc.real();
      y = 0.0;
      crossings_.push_back({t, x});
      upper = !upper;
    }
  }

  [[nodiscard]] Eigen::Vector2d state(double t) const {
    std::size_t i = legs_.size() - 1;
    while (i > 0 && legs_[i].t0 > t) --i;
    const Leg& leg = legs_[i];
    const std::complex<double> z =
        std::complex<double>(leg.x, leg.y / leg.w) * std::polar(1.0, -leg.w * (t - leg.t0));
    return {z.real(), z.imag() * leg.w};
  }

  [[nodiscard]] const std::vector<HarmonicCrossing>& crossings() const { return crossings_; }

 private:
  struct Leg {
    double t0, x, y, w;
  };
  double wm_;
  double wp_;
  std::vector<Leg> legs_;
  std::vector<HarmonicCrossing> crossings_;
};

// One implicit-midpoint step of x' = A x: (I - h/2 A) x1 = (I + h/2 A) x0.
inline Eigen::Vector2d midpoint_linear_step(const Eigen::Matrix2d& A, const Eigen::Vector2d& x0,
                                            double h) {
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  return (I - 0.5 * h * A).partialPivLu().solve((I + 0.5 * h * A) * x0);
}

// Least-squares slope of log(err) against log(tau).
inline double loglog_slope(const std::vector<double>& taus, const std::vector<double>& errs) {
  const auto n = static_cast<double>(taus.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double lx = std::log(taus[i]);
    const double ly = std::log(errs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace pws_test
