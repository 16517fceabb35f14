#include "rqi/trajectories.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace rqi {

namespace {

using State = Eigen::Matrix<double, 8, 1>;

Vec4 xpart(const State& s) { return s.head<4>(); }
Vec4 upart(const State& s) { return s.tail<4>(); }

Vec4 geodesic_term(const Christoffel& c, const Vec4& u) {
  Vec4 r;
  for (int m = 0; m < 4; ++m) r[m] = -u.dot(c.G[m] * u);
  return r;
}

// Coordinate acceleration from the field: (q/m) g^{mr} F_{rn} u^n.
Vec4 force_term(const Spacetime& st, const EMField& field, double q_over_m, const Vec4& x,
                const Vec4& u) {
  if (!field.F || q_over_m == 0.0) return Vec4::Zero();
  const Mat4 einv = st.tetrad.inverse(x);
  const Mat4 Fc = einv.transpose() * field.F(x) * einv;
  return q_over_m * st.metric.eval(x).inverse() * Fc * u;
}

template <class Rhs>
State rk4(const State& y, double h, Rhs&& f) {
  const State k1 = f(y);
  const State k2 = f(y + 0.5 * h * k1);
  const State k3 = f(y + 0.5 * h * k2);
  const State k4 = f(y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double frame_norm(const Vec4& uI) { return dot(uI, uI); }

}  // namespace

Trajectory Trajectory::slice(std::size_t first, std::size_t last) const {
  Trajectory t;
  t.kind = kind;
  t.samples.assign(samples.begin() + first, samples.begin() + last + 1);
  return t;
}

EMField no_field() { return {}; }

EMField uniform_field(const Eigen::Vector3d& E, const Eigen::Vector3d& B) {
  // F_{0i} = E_i, F_{ij} = -eps_{ijk} B_k
  Mat4 F = Mat4::Zero();
  for (int i = 0; i < 3; ++i) {
    F(0, i + 1) = E[i];
    F(i + 1, 0) = -E[i];
  }
  F(1, 2) = -B[2];
  F(2, 1) = B[2];
  F(1, 3) = B[1];
  F(3, 1) = -B[1];
  F(2, 3) = -B[0];
  F(3, 2) = B[0];
  EMField f;
  f.F = [F](const Vec4&) { return F; };
  return f;
}

Trajectory integrate_lorentz_force(const Spacetime& st, const EMField& field, double mass,
                                   double charge, const Vec4& x0, const Vec4& u0,
                                   double span, double step, IntegrationOptions opt) {
  if (!(step > 0)) throw Error(Errc::InvalidArgument, "step must be positive");
  const double qm = charge / mass;
  const Mat4 g0 = st.metric.eval(x0);
  const double n0 = u0.dot(g0 * u0);
  if (!(n0 > 0) || std::abs(n0 - 1.0) > 1e-9)
    throw Error(Errc::NotTimelike, "initial velocity not unit timelike");

  auto rhs = [&](const State& y) {
    const Vec4 x = xpart(y), u = upart(y);
    State d;
    d.head<4>() = u;
    d.tail<4>() = geodesic_term(st.gamma(x), u) + force_term(st, field, qm, x, u);
    return d;
  };
  auto make_sample = [&](double lam, const State& y) {
    Sample s;
    s.lambda = lam;
    s.x = xpart(y);
    s.u = upart(y);
    const Mat4 einv = st.tetrad.inverse(s.x);
    s.uI = einv * s.u;
    s.aI = einv * force_term(st, field, qm, s.x, s.u);
    return s;
  };

  const int n = std::max(0, static_cast<int>(std::llround(span / step)));
  const double h = n > 0 ? span / n : 0.0;
  Trajectory traj;
  traj.kind = TrajectoryKind::Timelike;
  traj.samples.reserve(n + 1);
  State y;
  y << x0, u0;
  traj.samples.push_back(make_sample(0.0, y));
  for (int k = 1; k <= n; ++k) {
    y = rk4(y, h, rhs);
    if (opt.renormalise) {
      const Vec4 x = xpart(y), u = upart(y);
      y.tail<4>() = u / std::sqrt(u.dot(st.metric.eval(x) * u));
    }
    traj.samples.push_back(make_sample(k * h, y));
  }
  const double drift = normalisation_drift(traj);
  if (!(drift <= opt.drift_tolerance))
    throw Error(Errc::StepTooLarge, "normalisation drift " + std::to_string(drift));
  return traj;
}

Trajectory integrate_null_geodesic(const Spacetime& st, const Vec4& x0, const Vec4& k0_in,
                                   double span, double step, IntegrationOptions opt) {
  if (!(step > 0)) throw Error(Errc::InvalidArgument, "step must be positive");
  const Mat4 einv0 = st.tetrad.inverse(x0);
  const double e0 = (einv0 * k0_in)[0];
  if (!(e0 > 0)) throw Error(Errc::NotNull, "wavevector not future directed");
  const Vec4 k0 = k0_in / e0;
  const double nn = k0.dot(st.metric.eval(x0) * k0);
  if (std::abs(nn) > 1e-10) throw Error(Errc::NotNull, "|k.k| = " + std::to_string(nn));

  auto rhs = [&](const State& y) {
    State d;
    d.head<4>() = upart(y);
    d.tail<4>() = geodesic_term(st.gamma(xpart(y)), upart(y));
    return d;
  };
  auto make_sample = [&](double lam, const State& y) {
    Sample s;
    s.lambda = lam;
    s.x = xpart(y);
    s.u = upart(y);
    s.uI = st.tetrad.inverse(s.x) * s.u;
    return s;
  };

  const int n = std::max(0, static_cast<int>(std::llround(span / step)));
  const double h = n > 0 ? span / n : 0.0;
  Trajectory traj;
  traj.kind = TrajectoryKind::Null;
  traj.samples.reserve(n + 1);
  State y;
  y << x0, k0;
  traj.samples.push_back(make_sample(0.0, y));
  for (int k = 1; k <= n; ++k) {
    y = rk4(y, h, rhs);
    traj.samples.push_back(make_sample(k * h, y));
  }
  const double drift = normalisation_drift(traj);
  if (!(drift <= opt.drift_tolerance))
    throw Error(Errc::StepTooLarge, "nullity drift " + std::to_string(drift));
  return traj;
}

Vec4 proper_acceleration(const Spacetime& st, const Trajectory& traj, std::size_t index) {
  if (traj.kind == TrajectoryKind::Null)
    throw Error(Errc::NullTrajectory, "proper acceleration undefined on null curves");
  const auto& s = traj.samples;
  if (s.size() < 3) throw Error(Errc::InvalidArgument, "need at least three samples");
  // Three-point Lagrange derivative, centred where possible.
  std::size_t i0 = index == 0 ? 0 : (index + 1 >= s.size() ? s.size() - 3 : index - 1);
  const double t = s[index].lambda;
  const double t0 = s[i0].lambda, t1 = s[i0 + 1].lambda, t2 = s[i0 + 2].lambda;
  const double w0 = ((t - t1) + (t - t2)) / ((t0 - t1) * (t0 - t2));
  const double w1 = ((t - t0) + (t - t2)) / ((t1 - t0) * (t1 - t2));
  const double w2 = ((t - t0) + (t - t1)) / ((t2 - t0) * (t2 - t1));
  const Vec4 du = w0 * s[i0].u + w1 * s[i0 + 1].u + w2 * s[i0 + 2].u;
  const Vec4 a = du - geodesic_term(st.gamma(s[index].x), s[index].u);
  return st.tetrad.inverse(s[index].x) * a;
}

double normalisation_drift(const Trajectory& traj) {
  double worst = 0;
  const double target = traj.kind == TrajectoryKind::Timelike ? 1.0 : 0.0;
  for (const auto& s : traj.samples) {
    double d = std::abs(frame_norm(s.uI) - target);
    if (traj.kind == TrajectoryKind::Null) d /= s.uI[0] * s.uI[0];
    worst = std::max(worst, d);
  }
  return worst;
}

void attach_frame_velocity(const Spacetime& st, Trajectory& traj) {
  for (auto& s : traj.samples) s.uI = st.tetrad.inverse(s.x) * s.u;
}

void change_tetrad(Trajectory& traj, const TetradField& from, const TetradField& to) {
  for (auto& s : traj.samples) {
    const Mat4 inv = to.inverse(s.x);
    s.uI = inv * s.u;
    s.aI = inv * (from.eval(s.x) * s.aI);
  }
}

// ─── analytic worldlines ───────────────────────────────────────────────────

Trajectory circular_orbit_flat(double beta, double radius, double revolutions, int steps) {
  const double gam = 1.0 / std::sqrt(1.0 - beta * beta);
  const double Omega = beta / radius;
  const double tau_end = revolutions * 2.0 * M_PI / (Omega * gam);
  Trajectory traj;
  traj.kind = TrajectoryKind::Timelike;
  for (int k = 0; k <= steps; ++k) {
    const double tau = tau_end * k / steps;
    const double t = gam * tau, ph = Omega * t;
    Sample s;
    s.lambda = tau;
    s.x << t, radius * std::cos(ph), radius * std::sin(ph), 0.0;
    s.u << gam, -gam * beta * std::sin(ph), gam * beta * std::cos(ph), 0.0;
    s.uI = s.u;
    const double acc = gam * gam * beta * Omega;
    s.aI << 0.0, -acc * std::cos(ph), -acc * std::sin(ph), 0.0;
    traj.samples.push_back(s);
  }
  return traj;
}

Trajectory rindler_hover(double g, double z, double duration, int steps) {
  const double a = 1.0 + g * z;
  Trajectory traj;
  traj.kind = TrajectoryKind::Timelike;
  for (int k = 0; k <= steps; ++k) {
    const double tau = duration * k / steps;
    Sample s;
    s.lambda = tau;
    s.x << tau / a, 0.0, 0.0, z;
    s.u << 1.0 / a, 0.0, 0.0, 0.0;
    s.uI << 1.0, 0.0, 0.0, 0.0;
    s.aI << 0.0, 0.0, 0.0, g / a;
    traj.samples.push_back(s);
  }
  return traj;
}

Trajectory schwarzschild_circular(double M, double r, double duration, int steps) {
  if (r <= 3.0 * M) throw Error(Errc::InvalidArgument, "no timelike circular orbit at r <= 3M");
  const double ut = 1.0 / std::sqrt(1.0 - 3.0 * M / r);
  const double Omega = std::sqrt(M / (r * r * r));
  const double f = 1.0 - 2.0 * M / r;
  Trajectory traj;
  traj.kind = TrajectoryKind::Timelike;
  for (int k = 0; k <= steps; ++k) {
    const double tau = duration * k / steps;
    Sample s;
    s.lambda = tau;
    s.x << ut * tau, r, M_PI / 2, Omega * ut * tau;
    s.u << ut, 0.0, 0.0, Omega * ut;
    s.uI << ut * std::sqrt(f), 0.0, 0.0, r * Omega * ut;
    traj.samples.push_back(s);
  }
  return traj;
}

// ─── CSV ───────────────────────────────────────────────────────────────────

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "lambda,x0,x1,x2,x3,u0,u1,u2,u3,uI0,uI1,uI2,uI3,aI0,aI1,aI2,aI3\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (const auto& s : traj.samples) {
    put(s.lambda);
    for (const Vec4* v : {&s.x, &s.u, &s.uI, &s.aI})
      for (int i = 0; i < 4; ++i) {
        os << ',';
        put((*v)[i]);
      }
    os << '\n';
  }
}

Trajectory read_csv(std::istream& is, TrajectoryKind kind) {
  Trajectory traj;
  traj.kind = kind;
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[17];
    for (int i = 0; i < 17; ++i) {
      if (!std::getline(ss, cell, ','))
        throw Error(Errc::InvalidArgument, "trajectory CSV row has fewer than 17 columns");
      v[i] = std::stod(cell);
    }
    Sample s;
    s.lambda = v[0];
    s.x = Vec4(v[1], v[2], v[3], v[4]);
    s.u = Vec4(v[5], v[6], v[7], v[8]);
    s.uI = Vec4(v[9], v[10], v[11], v[12]);
    s.aI = Vec4(v[13], v[14], v[15], v[16]);
    traj.samples.push_back(s);
  }
  return traj;
}

}  // namespace rqi
