#include "rqi/geometry.hpp"

#include <cmath>
#include <vector>

namespace rqi {

namespace {

// Central differences refined by `levels` Richardson extrapolations.
template <class F>
std::array<Mat4, 4> richardson_gradient(F&& f, const Vec4& x, double h, int levels = 1) {
  std::array<Mat4, 4> d;
  for (int l = 0; l < 4; ++l) {
    auto central = [&](double s) {
      Vec4 xp = x, xm = x;
      xp[l] += s;
      xm[l] -= s;
      return Mat4((f(xp) - f(xm)) / (2.0 * s));
    };
    std::vector<Mat4> table;
    for (int k = 0; k <= levels; ++k) table.push_back(central(h / (1 << k)));
    for (int k = 1; k <= levels; ++k) {
      const double p = std::pow(4.0, k);
      for (int i = levels; i >= k; --i) table[i] = (p * table[i] - table[i - 1]) / (p - 1.0);
    }
    d[l] = table[levels];
  }
  return d;
}

Mat4 checked_inverse(const Mat4& g) {
  const double n = g.cwiseAbs().maxCoeff();
  const double det = g.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * std::pow(n, 4))
    throw Error(Errc::SingularMetric, "metric not invertible");
  return g.inverse();
}

Christoffel christoffel_from(const Mat4& g, const MetricDerivative& dg) {
  const Mat4 gi = checked_inverse(g);
  Christoffel c;
  for (int r = 0; r < 4; ++r) {
    c.G[r].setZero();
    for (int m = 0; m < 4; ++m)
      for (int n = m; n < 4; ++n) {
        double s = 0;
        for (int k = 0; k < 4; ++k)
          s += gi(r, k) * (dg[m](k, n) + dg[n](k, m) - dg[k](m, n));
        c.G[r](m, n) = c.G[r](n, m) = 0.5 * s;
      }
  }
  return c;
}

double coordinate_step(double step, double scale) { return step * scale; }

}  // namespace

// ─── catalogue ──────────────────────────────────────────────────────────────

MetricField minkowski() {
  MetricField m;
  m.name = "minkowski";
  m.eval = [](const Vec4&) { return eta(); };
  m.deriv = [](const Vec4&) {
    MetricDerivative d;
    for (auto& e : d) e.setZero();
    return d;
  };
  return m;
}

MetricField rindler(double g) {
  MetricField m;
  m.name = "rindler";
  m.eval = [g](const Vec4& x) {
    Mat4 r = eta();
    const double a = 1.0 + g * x[3];
    r(0, 0) = a * a;
    return r;
  };
  m.deriv = [g](const Vec4& x) {
    MetricDerivative d;
    for (auto& e : d) e.setZero();
    d[3](0, 0) = 2.0 * g * (1.0 + g * x[3]);
    return d;
  };
  m.scale = g > 0 ? std::min(1.0, 1.0 / g) : 1.0;
  return m;
}

MetricField schwarzschild(double M) {
  MetricField m;
  m.name = "schwarzschild";
  m.eval = [M](const Vec4& x) {
    const double r = x[1], s = std::sin(x[2]);
    const double f = 1.0 - 2.0 * M / r;
    Mat4 g = Mat4::Zero();
    g(0, 0) = f;
    g(1, 1) = -1.0 / f;
    g(2, 2) = -r * r;
    g(3, 3) = -r * r * s * s;
    return g;
  };
  m.deriv = [M](const Vec4& x) {
    const double r = x[1], s = std::sin(x[2]), c = std::cos(x[2]);
    const double f = 1.0 - 2.0 * M / r;
    const double fp = 2.0 * M / (r * r);
    MetricDerivative d;
    for (auto& e : d) e.setZero();
    d[1](0, 0) = fp;
    d[1](1, 1) = fp / (f * f);
    d[1](2, 2) = -2.0 * r;
    d[1](3, 3) = -2.0 * r * s * s;
    d[2](3, 3) = -2.0 * r * r * s * c;
    return d;
  };
  m.scale = M;
  return m;
}

MetricField custom_metric(std::string name, std::function<Mat4(const Vec4&)> eval,
                          double scale) {
  MetricField m;
  m.name = std::move(name);
  m.eval = std::move(eval);
  m.scale = scale;
  return m;
}

MetricField metric_from_config(const std::map<std::string, std::string>& cfg) {
  auto get = [&](const std::string& k, double def) {
    auto it = cfg.find(k);
    return it == cfg.end() ? def : std::stod(it->second);
  };
  auto it = cfg.find("metric");
  const std::string name = it == cfg.end() ? "minkowski" : it->second;
  if (name == "minkowski") return minkowski();
  if (name == "rindler") return rindler(get("g", 1.0));
  if (name == "schwarzschild") return schwarzschild(get("M", 1.0));
  throw Error(Errc::InvalidArgument, "unknown metric '" + name + "'");
}

// ─── Christoffel symbols ────────────────────────────────────────────────────

MetricDerivative metric_derivative_fd(const MetricField& metric, const Vec4& x, double step) {
  const double h = coordinate_step(step, metric.scale);
  return richardson_gradient(metric.eval, x, h);
}

Christoffel christoffel_fd(const MetricField& metric, const Vec4& x, double step) {
  return christoffel_from(metric.eval(x), metric_derivative_fd(metric, x, step));
}

Christoffel christoffel(const MetricField& metric, const Vec4& x, double step) {
  if (metric.deriv) return christoffel_from(metric.eval(x), metric.deriv(x));
  return christoffel_fd(metric, x, step);
}

// ─── tetrads ────────────────────────────────────────────────────────────────

TetradField identity_tetrad() {
  TetradField t;
  t.eval = [](const Vec4&) { return Mat4::Identity().eval(); };
  t.deriv = [](const Vec4&) {
    TetradDerivative d;
    for (auto& e : d) e.setZero();
    return d;
  };
  return t;
}

TetradField diagonal_tetrad(const MetricField& metric) {
  TetradField t;
  t.scale = metric.scale;
  t.eval = [metric](const Vec4& x) {
    const Mat4 g = metric.eval(x);
    if ((g - Mat4(g.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 1e-14 * g.cwiseAbs().maxCoeff())
      throw Error(Errc::InvalidArgument, "diagonal tetrad requested for non-diagonal metric");
    Mat4 e = Mat4::Zero();
    for (int m = 0; m < 4; ++m) {
      if (g(m, m) == 0.0) throw Error(Errc::SingularMetric, "zero diagonal metric entry");
      e(m, m) = 1.0 / std::sqrt(std::abs(g(m, m)));
    }
    return e;
  };
  if (metric.deriv) {
    t.deriv = [metric](const Vec4& x) {
      const Mat4 g = metric.eval(x);
      const MetricDerivative dg = metric.deriv(x);
      TetradDerivative d;
      for (int n = 0; n < 4; ++n) {
        d[n].setZero();
        for (int m = 0; m < 4; ++m) {
          const double a = std::abs(g(m, m));
          const double da = g(m, m) > 0 ? dg[n](m, m) : -dg[n](m, m);
          d[n](m, m) = -0.5 * da / (a * std::sqrt(a));
        }
      }
      return d;
    };
  }
  return t;
}

double check_tetrad(const MetricField& metric, const TetradField& tetrad, const Vec4& x) {
  const Mat4 e = tetrad.eval(x);
  return (e.transpose() * metric.eval(x) * e - eta()).cwiseAbs().maxCoeff();
}

bool is_proper_lorentz(const Mat4& L, double tol) {
  if ((L.transpose() * eta() * L - eta()).cwiseAbs().maxCoeff() > tol) return false;
  return L.determinant() > 0.0 && L(0, 0) >= 1.0 - tol;
}

Mat4 boost(const Eigen::Vector3d& beta) {
  const double b2 = beta.squaredNorm();
  if (b2 >= 1.0) throw Error(Errc::InvalidArgument, "boost speed must be below 1");
  const double g = 1.0 / std::sqrt(1.0 - b2);
  Mat4 L = Mat4::Identity();
  L(0, 0) = g;
  for (int i = 0; i < 3; ++i) {
    L(0, i + 1) = L(i + 1, 0) = g * beta[i];
    for (int j = 0; j < 3; ++j)
      L(i + 1, j + 1) += b2 > 0 ? (g - 1.0) * beta[i] * beta[j] / b2 : 0.0;
  }
  return L;
}

Mat4 rotation(const Eigen::Vector3d& axis, double angle) {
  Mat4 L = Mat4::Identity();
  L.block<3, 3>(1, 1) = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return L;
}

TetradField transform_tetrad(const TetradField& tetrad,
                             std::function<Mat4(const Vec4&)> lambda_field) {
  TetradField t;
  t.scale = tetrad.scale;
  t.eval = [tetrad, lambda_field](const Vec4& x) {
    const Mat4 L = lambda_field(x);
    if (!is_proper_lorentz(L))
      throw Error(Errc::ImproperTransform, "not a proper orthochronous Lorentz transformation");
    const Mat4 Linv = eta() * L.transpose() * eta();
    return Mat4(tetrad.eval(x) * Linv);
  };
  return t;
}

// ─── connection 1-form ──────────────────────────────────────────────────────

Connection connection_one_form(const MetricField& metric, const TetradField& tetrad,
                               const Christoffel& gamma, const Vec4& x, double step) {
  const Mat4 e = tetrad.eval(x);
  const double res = (e.transpose() * metric.eval(x) * e - eta()).cwiseAbs().maxCoeff();
  if (res > 1e-8)
    throw Error(Errc::NonOrthonormalTetrad, "orthonormality residual " + std::to_string(res));
  const Mat4 einv = e.inverse();
  const TetradDerivative de =
      tetrad.deriv ? tetrad.deriv(x)
                   : richardson_gradient(tetrad.eval, x,
                                         coordinate_step(kTetradFdStep, tetrad.scale), 2);
  Connection c;
  for (int n = 0; n < 4; ++n) {
    Mat4 gn;  // gn(s, r) = Gamma^s_{n r}
    for (int s = 0; s < 4; ++s) gn.row(s) = gamma.G[s].row(n);
    c.w[n] = einv * de[n] + einv * gn * e;
  }
  return c;
}

Connection connection_one_form(const MetricField& metric, const TetradField& tetrad,
                               const Vec4& x, double step) {
  return connection_one_form(metric, tetrad, christoffel(metric, x, step), x, step);
}

}  // namespace rqi
