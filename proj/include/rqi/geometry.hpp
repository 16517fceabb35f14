// Metrics, Christoffel symbols, tetrads and the connection 1-form.
#pragma once

#include "rqi/core.hpp"

#include <functional>
#include <map>
#include <string>

namespace rqi {

// d[l](m, n) = d_l g_{mn}
using MetricDerivative = std::array<Mat4, 4>;

struct MetricField {
  std::string name;
  std::function<Mat4(const Vec4&)> eval;
  // Closed-form first derivatives; empty for custom metrics.
  std::function<MetricDerivative(const Vec4&)> deriv;
  // Characteristic coordinate scale for finite-difference steps.
  double scale = 1.0;
};

MetricField minkowski();
// ds^2 = (1 + g z)^2 dt^2 - dx^2 - dy^2 - dz^2
MetricField rindler(double g);
// Schwarzschild coordinates (t, r, theta, phi).
MetricField schwarzschild(double M);
MetricField custom_metric(std::string name, std::function<Mat4(const Vec4&)> eval,
                          double scale = 1.0);
// Build from a config map: {"metric": name, "g": ..., "M": ...}.
MetricField metric_from_config(const std::map<std::string, std::string>& cfg);

// G[r](m, n) = Gamma^r_{mn}
struct Christoffel {
  std::array<Mat4, 4> G;
  Christoffel() {
    for (auto& m : G) m.setZero();
  }
};

// Relative to the metric's coordinate scale; one Richardson level makes the
// truncation error O(h^4), so round-off and truncation balance near 1e-3.
inline constexpr double kDefaultFdStep = 1e-3;
// Tetrads without closed-form derivatives use two Richardson levels at this step.
inline constexpr double kTetradFdStep = 3e-3;

// Closed form for catalogue metrics, finite differences otherwise.
Christoffel christoffel(const MetricField& metric, const Vec4& x,
                        double step = kDefaultFdStep);
// Always finite differences (central, one Richardson level).
Christoffel christoffel_fd(const MetricField& metric, const Vec4& x,
                           double step = kDefaultFdStep);
MetricDerivative metric_derivative_fd(const MetricField& metric, const Vec4& x, double step);

// Columns are frame vectors: E(m, I) = e^m_I.
using TetradDerivative = std::array<Mat4, 4>;  // d[n](m, I) = d_n e^m_I

struct TetradField {
  std::function<Mat4(const Vec4&)> eval;
  std::function<TetradDerivative(const Vec4&)> deriv;
  double scale = 1.0;

  // Rows are co-frame: inverse(x)(I, m) = e^I_m.
  Mat4 inverse(const Vec4& x) const { return eval(x).inverse(); }
};

TetradField identity_tetrad();
// e^m_I = delta^m_I / sqrt|g_mm|; requires a diagonal metric.
TetradField diagonal_tetrad(const MetricField& metric);

double check_tetrad(const MetricField& metric, const TetradField& tetrad, const Vec4& x);

// Proper orthochronous Lorentz transformation Lambda^I_J.
bool is_proper_lorentz(const Mat4& L, double tol = 1e-10);
Mat4 boost(const Eigen::Vector3d& beta);
Mat4 rotation(const Eigen::Vector3d& axis, double angle);

// e'^m_I = Lambda_I^J e^m_J, so frame components transform as v' = Lambda v.
TetradField transform_tetrad(const TetradField& tetrad,
                             std::function<Mat4(const Vec4&)> lambda_field);

// w[n](I, J) = omega_n^I_J
struct Connection {
  std::array<Mat4, 4> w;
  Connection() {
    for (auto& m : w) m.setZero();
  }
  Mat4 lowered(int n) const { return eta() * w[n]; }
  // u^n omega_n^I_J
  Mat4 contract(const Vec4& u) const {
    return u[0] * w[0] + u[1] * w[1] + u[2] * w[2] + u[3] * w[3];
  }
};

Connection connection_one_form(const MetricField& metric, const TetradField& tetrad,
                               const Christoffel& gamma, const Vec4& x,
                               double step = kDefaultFdStep);
Connection connection_one_form(const MetricField& metric, const TetradField& tetrad,
                               const Vec4& x, double step = kDefaultFdStep);

// Geometry bundle evaluated along trajectories.
struct Spacetime {
  MetricField metric;
  TetradField tetrad;

  Connection omega(const Vec4& x) const { return connection_one_form(metric, tetrad, x); }
  Christoffel gamma(const Vec4& x) const { return christoffel(metric, x); }
};

}  // namespace rqi
