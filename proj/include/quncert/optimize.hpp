#pragma once

// Deterministic optimization of a real function over qubit measurement
// directions (Bloch angles): a coarse theta x phi grid followed by a
// Nelder-Mead simplex started from the best grid cell.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "quncert/common.hpp"

namespace quncert {

/// Rank-1 projective qubit measurement onto
///   |m0> = cos(t/2)|0> + e^{i p} sin(t/2)|1>,  |m1> = sin(t/2)|0> - e^{i p} cos(t/2)|1>.
class MeasurementBasis {
 public:
  MeasurementBasis() = default;

  /// Angles are reduced onto theta in [0, pi], phi in [0, 2 pi).
  MeasurementBasis(double theta, double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta > std::numbers::pi) {
      theta = two_pi - theta;
      phi += std::numbers::pi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    theta_ = theta;
    phi_ = phi;
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  std::array<Eigen::Vector2cd, 2> vectors() const { return vectors_for(theta_, phi_); }

  std::array<Eigen::Matrix2cd, 2> projectors() const {
    const auto v = vectors();
    return {v[0] * v[0].adjoint(), v[1] * v[1].adjoint()};
  }

  static std::array<Eigen::Vector2cd, 2> vectors_for(double theta, double phi) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const cplx e = std::polar(1.0, phi);
    Eigen::Vector2cd m0, m1;
    m0 << c, e * s;
    m1 << s, -e * c;
    return {m0, m1};
  }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

enum class Sense { Minimize, Maximize };

struct OptimizerSettings {
  int grid_theta = 64;
  int grid_phi = 128;
  double angle_tolerance = 1e-6;
  int max_iterations = 500;
};

struct SphereOptimum {
  double value = 0.0;       // refined optimum of the objective
  double grid_value = 0.0;  // best grid value
  MeasurementBasis basis;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline std::array<double, 3> bloch_vector(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline double chord(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const auto u = bloch_vector(a[0], a[1]);
  const auto v = bloch_vector(b[0], b[1]);
  return std::sqrt((u[0] - v[0]) * (u[0] - v[0]) + (u[1] - v[1]) * (u[1] - v[1]) + (u[2] - v[2]) * (u[2] - v[2]));
}

}  // namespace detail

/// Optimizes `objective(theta, phi)`. The simplex stops once its vertices
/// lie within `angle_tolerance` of each other on the Bloch sphere.
template <class Objective>
SphereOptimum optimize_on_sphere(Objective&& objective, Sense sense, const OptimizerSettings& cfg = {}) {
  const double sign = (sense == Sense::Minimize) ? 1.0 : -1.0;
  auto f = [&](double t, double p) { return sign * objective(t, p); };

  const double dtheta = std::numbers::pi / (cfg.grid_theta - 1);
  const double dphi = 2.0 * std::numbers::pi / cfg.grid_phi;
  double best = INFINITY;
  std::array<double, 2> best_x{0.0, 0.0};
  for (int i = 0; i < cfg.grid_theta; ++i) {
    const double t = i * dtheta;
    // Poles: every phi gives the same measurement.
    const int nphi = (i == 0 || i == cfg.grid_theta - 1) ? 1 : cfg.grid_phi;
    for (int j = 0; j < nphi; ++j) {
      const double p = j * dphi;
      const double v = f(t, p);
      if (v < best) {
        best = v;
        best_x = {t, p};
      }
    }
  }

  SphereOptimum out;
  out.grid_value = sign * best;

  // Nelder-Mead with standard coefficients.
  std::array<std::array<double, 2>, 3> x = {best_x, std::array<double, 2>{best_x[0] + dtheta, best_x[1]},
                                            std::array<double, 2>{best_x[0], best_x[1] + dphi}};
  std::array<double, 3> fx = {best, f(x[1][0], x[1][1]), f(x[2][0], x[2][1])};
  auto order = [&] {
    std::array<int, 3> idx{0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    auto xs = x;
    auto fs = fx;
    for (int k = 0; k < 3; ++k) {
      x[k] = xs[idx[k]];
      fx[k] = fs[idx[k]];
    }
  };

  int it = 0;
  bool converged = false;
  for (; it < cfg.max_iterations; ++it) {
    order();
    if (std::max(detail::chord(x[0], x[1]), detail::chord(x[0], x[2])) <= cfg.angle_tolerance) {
      converged = true;
      break;
    }
    const std::array<double, 2> c{0.5 * (x[0][0] + x[1][0]), 0.5 * (x[0][1] + x[1][1])};
    auto along = [&](double a) { return std::array<double, 2>{c[0] + a * (x[2][0] - c[0]), c[1] + a * (x[2][1] - c[1])}; };

    const auto xr = along(-1.0);
    const double fr = f(xr[0], xr[1]);
    if (fr < fx[0]) {
      const auto xe = along(-2.0);
      const double fe = f(xe[0], xe[1]);
      if (fe < fr) {
        x[2] = xe;
        fx[2] = fe;
      } else {
        x[2] = xr;
        fx[2] = fr;
      }
      continue;
    }
    if (fr < fx[1]) {
      x[2] = xr;
      fx[2] = fr;
      continue;
    }
    const bool outside = fr < fx[2];
    const auto xc = along(outside ? -0.5 : 0.5);
    const double fc = f(xc[0], xc[1]);
    if (fc < (outside ? fr : fx[2])) {
      x[2] = xc;
      fx[2] = fc;
      continue;
    }
    for (int k = 1; k < 3; ++k) {
      x[k] = {x[0][0] + 0.5 * (x[k][0] - x[0][0]), x[0][1] + 0.5 * (x[k][1] - x[0][1])};
      fx[k] = f(x[k][0], x[k][1]);
    }
  }
  order();

  out.value = sign * fx[0];
  out.basis = MeasurementBasis(x[0][0], x[0][1]);
  out.iterations = it;
  out.converged = converged;
  return out;
}

}  // namespace quncert
