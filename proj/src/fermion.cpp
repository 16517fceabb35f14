#include "rqi/fermion.hpp"

#include <cmath>

namespace rqi {

namespace {

const cd I1(0.0, 1.0);

std::array<Mat2c, 4> make_sigma(double sign) {
  std::array<Mat2c, 4> s;
  s[0] = Mat2c::Identity();
  s[1] << 0, 1, 1, 0;
  s[2] << 0, -I1, I1, 0;
  s[3] << 1, 0, 0, -1;
  for (int i = 1; i < 4; ++i) s[i] *= sign;
  return s;
}

// Interpolation-ready generator samples along a trajectory.
std::vector<double> parameters(const Trajectory& traj) {
  std::vector<double> ts;
  ts.reserve(traj.size());
  for (const auto& s : traj.samples) ts.push_back(s.lambda);
  return ts;
}

void require_velocity(const Vec4& a, const Vec4& b) {
  if ((a - b).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw Error(Errc::VelocityMismatch, "qubit velocity differs from trajectory start");
}

}  // namespace

const std::array<Mat2c, 4>& sigma() {
  static const auto s = make_sigma(1.0);
  return s;
}

const std::array<Mat2c, 4>& sigma_bar() {
  static const auto s = make_sigma(-1.0);
  return s;
}

const std::array<std::array<Mat2c, 4>, 4>& generators() {
  static const auto L = [] {
    std::array<std::array<Mat2c, 4>, 4> r;
    for (int I = 0; I < 4; ++I)
      for (int J = 0; J < 4; ++J)
        r[I][J] = (I1 / 4.0) * (sigma()[I] * sigma_bar()[J] - sigma()[J] * sigma_bar()[I]);
    return r;
  }();
  return L;
}

Mat2c contract_generators(const Mat4& X) {
  Mat2c r = Mat2c::Zero();
  for (int I = 0; I < 4; ++I)
    for (int J = 0; J < 4; ++J)
      if (I != J && X(I, J) != 0.0) r += X(I, J) * generators()[I][J];
  return r;
}

// ─── inner product ─────────────────────────────────────────────────────────

Mat2c inner_product_form(const Vec4& u) {
  return u[0] * sigma()[0] + u[1] * sigma()[1] + u[2] * sigma()[2] + u[3] * sigma()[3];
}

cd inner_product(const Vec4& u, const Vec2c& a, const Vec2c& b) {
  return a.dot(inner_product_form(u) * b);
}

cd inner_product(const WeylQubit& a, const WeylQubit& b) {
  if ((a.u - b.u).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, a.u.cwiseAbs().maxCoeff()))
    throw Error(Errc::MomentumMismatch, "states carry different momenta");
  return inner_product(a.u, a.psi, b.psi);
}

double norm2(const WeylQubit& q) { return inner_product(q.u, q.psi, q.psi).real(); }

// ─── Fermi-Walker transport ────────────────────────────────────────────────

Mat2c fermi_walker_generator(const Vec4& u, const Mat4& Omega_u, const Vec4& a,
                             const Mat4& B_rest, double charge_to_mass) {
  const Vec4 ul = lower(u), al = lower(a);
  const Mat4 X = 0.5 * eta() * Omega_u + ul * al.transpose() - 0.5 * charge_to_mass * B_rest;
  return I1 * contract_generators(X);
}

Mat4 fermi_walker_vector_generator(const Vec4& u, const Mat4& Omega_u, const Vec4& a,
                                   const Mat4& B_rest, double charge_to_mass) {
  // i X_{IJ} L^{IJ} on spinors corresponds to K = -eta (X - X^T) on vectors.
  return a * lower(u).transpose() - u * lower(a).transpose() - Omega_u +
         charge_to_mass * eta() * B_rest;
}

Mat4 rest_frame_magnetic(const Vec4& u, const Mat4& F) {
  const Mat4 h = Mat4::Identity() - u * lower(u).transpose();
  return h.transpose() * F * h;
}

WeylQubit fermi_walker_step(const WeylQubit& q, const Vec4& u_coord, const Connection& omega,
                            const Vec4& a, const Mat4& B_rest, double charge_to_mass,
                            double dtau) {
  const double ua = dot(q.u, a);
  if (std::abs(ua) > 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw Error(Errc::NonOrthogonalAcceleration, "u.a = " + std::to_string(ua));
  const Mat4 Om = omega.contract(u_coord);
  WeylQubit r = q;
  r.psi = matrix_exp(Mat2c(dtau * fermi_walker_generator(q.u, Om, a, B_rest, charge_to_mass))) *
          q.psi;
  r.u = matrix_exp(Mat4(dtau * fermi_walker_vector_generator(q.u, Om, a, B_rest,
                                                             charge_to_mass))) *
        q.u;
  return r;
}

TransportResult transport(const WeylQubit& q, const Trajectory& traj, const Spacetime& st,
                          const EMField& em, double charge, double mass,
                          TransportOptions opt) {
  if (traj.size() == 0) throw Error(Errc::InvalidArgument, "empty trajectory");
  require_velocity(q.u, traj.front().uI);
  const double qm = mass != 0.0 ? charge / mass : 0.0;
  std::vector<Mat2c> A;
  A.reserve(traj.size());
  for (const auto& s : traj.samples) {
    const Mat4 Om = st.omega(s.x).contract(s.u);
    const Mat4 B = em.F ? rest_frame_magnetic(s.uI, em.frame(s.x)) : Mat4::Zero();
    A.push_back(fermi_walker_generator(s.uI, Om, s.aI, B, qm));
  }
  TransportResult r;
  r.op.T = ordered_exponential(parameters(traj), A, opt.scheme);
  r.op.u_start = traj.front().uI;
  r.op.u_end = traj.back().uI;
  r.qubit.x = traj.back().x;
  r.qubit.u = traj.back().uI;
  r.qubit.psi = r.op.T * q.psi;
  return r;
}

// ─── standard boosts and the rest-frame picture ─────────────────────────────

Mat2c standard_boost_spinhalf(const Vec4& u) {
  if (!(u[0] > 0) || std::abs(dot(u, u) - 1.0) > 1e-8)
    throw Error(Errc::NotTimelike, "velocity not unit future timelike");
  Mat2c L = (1.0 + u[0]) * Mat2c::Identity();
  for (int i = 1; i < 4; ++i) L -= u[i] * sigma()[i];
  return L / std::sqrt(2.0 * (1.0 + u[0]));
}

Mat4 spin1_boost(const Vec4& u) {
  if (!(u[0] > 0) || std::abs(dot(u, u) - 1.0) > 1e-8)
    throw Error(Errc::NotTimelike, "velocity not unit future timelike");
  Mat4 L;
  L(0, 0) = u[0];
  for (int i = 1; i < 4; ++i) {
    L(0, i) = L(i, 0) = u[i];
    for (int j = 1; j < 4; ++j) L(i, j) = (i == j ? 1.0 : 0.0) + u[i] * u[j] / (1.0 + u[0]);
  }
  return L;
}

Vec2c weyl_to_wigner(const WeylQubit& q) {
  return standard_boost_spinhalf(q.u).inverse() * q.psi;
}

WeylQubit wigner_to_weyl(const Vec4& x, const Vec4& u, const Vec2c& psi_rest) {
  WeylQubit q;
  q.x = x;
  q.u = u;
  q.psi = standard_boost_spinhalf(u) * psi_rest;
  return q;
}

Mat2c wigner_generator(const Vec4& u, const Vec4& du, const Mat4& Omega_u) {
  const Vec4 ul = lower(u), dul = lower(du);
  const Mat4 Ol = eta() * Omega_u;
  const double k = 1.0 / (u[0] + 1.0);
  Mat4 c = Mat4::Zero();
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j) {
      double ol = 0;
      for (int l = 1; l < 4; ++l) ol += Ol(i, l) * u[l];
      c(i, j) = k * ul[i] * dul[j] + 0.5 * Ol(i, j) + Ol(0, j) * u[i] + k * ol * u[j];
    }
  return I1 * contract_generators(c);
}

Mat2c wigner_transport_operator(const Trajectory& traj, const Spacetime& st,
                                TransportOptions opt) {
  if (traj.kind != TrajectoryKind::Timelike)
    throw Error(Errc::NotTimelike, "rest-frame transport needs a timelike trajectory");
  std::vector<Mat2c> A;
  A.reserve(traj.size());
  for (const auto& s : traj.samples) {
    const Mat4 Om = st.omega(s.x).contract(s.u);
    const Vec4 du = s.aI - Om * s.uI;
    A.push_back(wigner_generator(s.uI, du, Om));
  }
  return ordered_exponential(parameters(traj), A, opt.scheme);
}

// ─── Lorentz group lifts ───────────────────────────────────────────────────

Mat2c spin_half_lift(const Mat4& Lambda) {
  if (!is_proper_lorentz(Lambda, 1e-8))
    throw Error(Errc::ImproperTransform, "not a proper orthochronous Lorentz transformation");
  const auto& t = sigma();
  Mat2c best;
  double best_det = -1;
  for (int b = 0; b < 4; ++b) {
    Mat2c S = Mat2c::Zero();
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        if (Lambda(m, n) != 0.0) S += Lambda(m, n) * t[m] * t[b] * t[n];
    const double d = std::abs(S.determinant());
    if (d > best_det) {
      best_det = d;
      best = S;
    }
  }
  Mat2c A = best / std::sqrt(best.determinant());
  if (A.trace().real() < 0) A = -A;
  return A;
}

Mat2c weyl_action(const Mat4& Lambda) { return spin_half_lift(Lambda).adjoint().inverse(); }

Mat2c wigner_rotation(const Mat4& Lambda, const Vec4& p) {
  const Vec4 q = Lambda * p;
  return standard_boost_spinhalf(q).inverse() * weyl_action(Lambda) * standard_boost_spinhalf(p);
}

Vec4 bloch_vector(const WeylQubit& q) {
  Vec4 b;
  for (int I = 0; I < 4; ++I) b[I] = q.psi.dot(sigma()[I] * q.psi).real();
  return b;
}

double su2_angle(const Mat2c& U) {
  const cd c = 0.5 * U.trace();
  const double s = (U - c * Mat2c::Identity()).norm() / std::sqrt(2.0);
  return 2.0 * std::atan2(s, std::abs(c.real()));
}

}  // namespace rqi
