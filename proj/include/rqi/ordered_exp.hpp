// Time-ordered exponentials of sampled generators, dY/dt = A(t) Y.
#pragma once

#include "rqi/core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

namespace rqi {

enum class Scheme {
  Midpoint,  // exp(h A(t + h/2)), second order
  Magnus4,   // two-point Gauss Magnus expansion, fourth order
};

// exp(M) for traceless 2x2 M, via M^2 = -det(M) 1.
inline Mat2c expm_traceless(const Mat2c& M) {
  const cd s = std::sqrt(-M.determinant());
  cd c, sh;
  if (std::abs(s) < 1e-4) {
    const cd s2 = s * s;
    c = 1.0 + s2 / 2.0 + s2 * s2 / 24.0 + s2 * s2 * s2 / 720.0;
    sh = 1.0 + s2 / 6.0 + s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0;
  } else {
    c = std::cosh(s);
    sh = std::sinh(s) / s;
  }
  return c * Mat2c::Identity() + sh * M;
}

inline Mat2c matrix_exp(const Mat2c& M) {
  const cd half_tr = 0.5 * M.trace();
  return std::exp(half_tr) * expm_traceless(M - half_tr * Mat2c::Identity());
}

template <class M>
M matrix_exp(const M& A) {
  return A.exp();
}

// Cubic Lagrange interpolation of samples at parameter t inside [ts[n], ts[n+1]].
template <class M>
M interpolate_cubic(const std::vector<double>& ts, const std::vector<M>& ys, std::size_t n,
                    double t) {
  const std::size_t N = ts.size();
  const std::size_t width = std::min<std::size_t>(4, N);
  std::size_t lo = n > 0 ? n - 1 : 0;
  if (lo + width > N) lo = N - width;
  M r = M::Zero(ys[n].rows(), ys[n].cols());
  for (std::size_t i = lo; i < lo + width; ++i) {
    double w = 1.0;
    for (std::size_t j = lo; j < lo + width; ++j)
      if (j != i) w *= (t - ts[j]) / (ts[i] - ts[j]);
    r += w * ys[i];
  }
  return r;
}

// Single step propagator over [ts[n], ts[n+1]].
template <class M>
M ordered_step(const std::vector<double>& ts, const std::vector<M>& A, std::size_t n,
               Scheme scheme) {
  const double h = ts[n + 1] - ts[n];
  if (scheme == Scheme::Midpoint) {
    return matrix_exp(M(h * interpolate_cubic(ts, A, n, ts[n] + 0.5 * h)));
  }
  const double d = std::sqrt(3.0) / 6.0;
  const M A1 = interpolate_cubic(ts, A, n, ts[n] + (0.5 - d) * h);
  const M A2 = interpolate_cubic(ts, A, n, ts[n] + (0.5 + d) * h);
  const M omega = 0.5 * h * (A1 + A2) + (std::sqrt(3.0) / 12.0) * h * h * (A2 * A1 - A1 * A2);
  return matrix_exp(omega);
}

// Y(t_end) = T exp(int A dt) starting from the identity at ts.front().
template <class M>
M ordered_exponential(const std::vector<double>& ts, const std::vector<M>& A, Scheme scheme) {
  M Y = M::Identity(A.empty() ? 1 : A.front().rows(), A.empty() ? 1 : A.front().cols());
  for (std::size_t n = 0; n + 1 < ts.size(); ++n) Y = ordered_step(ts, A, n, scheme) * Y;
  return Y;
}

}  // namespace rqi

namespace rqi {

// Integral of sampled scalar data, exact for the piecewise cubic interpolant.
inline double integrate_cubic(const std::vector<double>& ts, const std::vector<double>& ys) {
  if (ts.size() < 2) return 0.0;
  std::vector<Eigen::Matrix<double, 1, 1>> m(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) m[i](0, 0) = ys[i];
  const double d = std::sqrt(3.0) / 6.0;
  double sum = 0.0;
  for (std::size_t n = 0; n + 1 < ts.size(); ++n) {
    const double h = ts[n + 1] - ts[n];
    sum += 0.5 * h *
           (interpolate_cubic(ts, m, n, ts[n] + (0.5 - d) * h)(0, 0) +
            interpolate_cubic(ts, m, n, ts[n] + (0.5 + d) * h)(0, 0));
  }
  return sum;
}

}  // namespace rqi
