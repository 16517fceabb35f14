#include "rqi/photon.hpp"

#include <cmath>

namespace rqi {

namespace {

Eigen::Vector3d direction(const Vec4& u) {
  const Eigen::Vector3d k = u.tail<3>();
  const double n = k.norm();
  if (!(n > 0)) throw Error(Errc::NotNull, "photon velocity has no spatial part");
  return k / n;
}

void require_parallel(const Vec4& a, const Vec4& b) {
  if ((a / a[0] - b / b[0]).cwiseAbs().maxCoeff() > 1e-9)
    throw Error(Errc::MomentumMismatch, "photon velocities not parallel");
}

std::vector<double> parameters(const Trajectory& traj) {
  std::vector<double> ts;
  for (const auto& s : traj.samples) ts.push_back(s.lambda);
  return ts;
}

void require_null(const Trajectory& traj) {
  if (traj.kind != TrajectoryKind::Null)
    throw Error(Errc::NotNull, "photon transport needs a null geodesic");
}

}  // namespace

Mat4 adaption_rotation(const Vec4& u) {
  const Eigen::Vector3d n = direction(u);
  const double c = n[2];
  if (c < -1.0 + 1e-9)
    throw Error(Errc::AntipodalSingularity, "photon direction antipodal to the tetrad z-axis");
  const Eigen::Vector3d v = n.cross(Eigen::Vector3d::UnitZ());
  Eigen::Matrix3d vx;
  vx << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
  Mat4 R = Mat4::Identity();
  R.block<3, 3>(1, 1) = c * Eigen::Matrix3d::Identity() + vx + v * v.transpose() / (1.0 + c);
  return R;
}

Eigen::Matrix<double, 2, 4> diad(const Vec4& u) { return adaption_rotation(u).middleRows<2>(1); }

Vec2c extract_jones(const PolarisationQubit& q) {
  return diad(q.u).cast<cd>() * q.psi;
}

Vec4c jones_to_vector(const Vec4& u, const Vec2c& jones) {
  return diad(u).transpose().cast<cd>() * jones;
}

Vec4 null_partner(const Vec4& u) {
  const Vec4 w(u[0], -u[1], -u[2], -u[3]);
  return w / dot(u, w);
}

Vec4c refix_gauge(const Vec4& u, const Vec4c& psi) {
  const Vec4 w = null_partner(u);
  const Vec4 ul = lower(u);
  const cd up = ul.cast<cd>().dot(psi);  // real coefficients, no conjugation effect
  return psi - up * w.cast<cd>();
}

PhotonTransportResult parallel_transport_polarisation(const PolarisationQubit& q,
                                                      const Trajectory& traj,
                                                      const Spacetime& st, Scheme scheme) {
  require_null(traj);
  require_parallel(q.u, traj.front().uI);
  const auto ts = parameters(traj);
  std::vector<Mat4> A;
  A.reserve(traj.size());
  for (const auto& s : traj.samples) A.push_back(-st.omega(s.x).contract(s.u));
  PhotonTransportResult r;
  Vec4c psi = q.psi;
  constexpr std::size_t kRefix = 64;
  for (std::size_t n = 0; n + 1 < ts.size(); ++n) {
    const Mat4 S = ordered_step(ts, A, n, scheme);
    r.op = S * r.op;
    psi = S.cast<cd>() * psi;
    if ((n + 1) % kRefix == 0 || n + 2 == ts.size()) psi = refix_gauge(traj.samples[n + 1].uI, psi);
  }
  r.qubit.x = traj.back().x;
  r.qubit.u = traj.back().uI;
  r.qubit.psi = psi;
  return r;
}

double wigner_angle(const Trajectory& traj, const Spacetime& st) {
  require_null(traj);
  std::vector<double> m12;
  m12.reserve(traj.size());
  for (const auto& s : traj.samples) {
    const Mat4 Om = st.omega(s.x).contract(s.u);
    const Vec4 du = -Om * s.uI;
    // Directional derivative of R(u) along du, one Richardson level.
    auto Rd = [&](double e) {
      return Mat4((adaption_rotation(s.uI + e * du) - adaption_rotation(s.uI - e * du)) / (2 * e));
    };
    const double e = 1e-3 * s.uI[0] / std::max(du.norm(), 1e-300);
    const Mat4 dR = du.norm() > 0 ? Mat4((4.0 * Rd(0.5 * e) - Rd(e)) / 3.0) : Mat4::Zero();
    const Mat4 R = adaption_rotation(s.uI);
    m12.push_back(-(R.row(1).dot(dR.row(2)) + R.row(1).dot(Om * R.row(2).transpose())));
  }
  return integrate_cubic(parameters(traj), m12);
}

double wigner_angle_adapted(const Trajectory& traj, const Spacetime& st) {
  require_null(traj);
  std::vector<double> w;
  for (const auto& s : traj.samples) w.push_back((eta() * st.omega(s.x).contract(s.u))(1, 2));
  return integrate_cubic(parameters(traj), w);
}

Eigen::Matrix2d rotation_y(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

cd polarisation_inner_product(const PolarisationQubit& a, const PolarisationQubit& b) {
  require_parallel(a.u, b.u);
  return -a.psi.dot(eta().cast<cd>() * b.psi);
}

}  // namespace rqi
