#include "rqi/photon.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rqi;

namespace {

const cd I1(0, 1);

Spacetime flat() { return {minkowski(), identity_tetrad()}; }

Vec4 null_along(const Eigen::Vector3d& d, double E = 1.0) {
  const Eigen::Vector3d n = d.normalized();
  return E * Vec4(1, n[0], n[1], n[2]);
}

// Non-radial null geodesic in Schwarzschild.
Trajectory bent_ray(const Spacetime& st, int steps) {
  const double r0 = 12, f = 1 - 2 / r0;
  const double kr = -0.4, kth = 0.01, kph = 0.04;
  const double kt = std::sqrt((kr * kr / f + r0 * r0 * (kth * kth + std::pow(std::sin(1.3) * kph, 2))) / f);
  return integrate_null_geodesic(st, Vec4(0, r0, 1.3, 0), Vec4(kt, kr, kth, kph), 20.0,
                                 20.0 / steps);
}

PolarisationQubit state_on(const Trajectory& t, const Vec2c& jones) {
  PolarisationQubit q;
  q.x = t.front().x;
  q.u = t.front().uI;
  q.psi = jones_to_vector(q.u, jones);
  return q;
}

}  // namespace

TEST(Adaption, IdentityAlongZ) {
  EXPECT_LT((adaption_rotation(Vec4(2, 0, 0, 2)) - Mat4::Identity()).norm(), 1e-15);
}

TEST(Adaption, XMapsToZ) {
  const Mat4 R = adaption_rotation(Vec4(1, 1, 0, 0));
  EXPECT_LT((R * Vec4(1, 1, 0, 0) - Vec4(1, 0, 0, 1)).norm(), 1e-15);
  EXPECT_EQ(R(0, 0), 1.0);
  EXPECT_LT(R.row(0).tail<3>().norm() + R.col(0).tail<3>().norm(), 1e-15);
}

TEST(Adaption, RandomDirections) {
  std::mt19937 rng(11);
  std::normal_distribution<double> N;
  int used = 0;
  while (used < 200) {
    const Eigen::Vector3d d(N(rng), N(rng), N(rng));
    if (std::acos(d.normalized()[2]) >= 3.0) continue;
    ++used;
    const double E = 0.5 + std::abs(N(rng));
    const Vec4 u = null_along(d, E);
    const Mat4 R = adaption_rotation(u);
    EXPECT_LT((R * u - E * Vec4(1, 0, 0, 1)).norm(), 1e-12);
    EXPECT_LT((R.transpose() * eta() * R - eta()).norm(), 1e-13);
    EXPECT_NEAR(R.determinant(), 1.0, 1e-13);
    const auto f = diad(u);
    EXPECT_LT(std::abs(f.row(0).dot(lower(u))) + std::abs(f.row(1).dot(lower(u))), 1e-13);
    EXPECT_EQ(f(0, 0), 0.0);
    EXPECT_EQ(f(1, 0), 0.0);
  }
}

TEST(Adaption, AntipodalRejected) {
  EXPECT_THROW(adaption_rotation(Vec4(1, 0, 0, -1)), Error);
}

TEST(Jones, Examples) {
  PolarisationQubit q;
  q.psi = Vec4c(0, 1, 0, 0);
  EXPECT_LT((extract_jones(q) - Vec2c(1, 0)).norm(), 1e-15);
  for (cd c : {cd(0.3, -0.7), cd(2, 1)}) {
    q.psi = Vec4c(c, 0, 1, c);
    EXPECT_LT((extract_jones(q) - Vec2c(0, 1)).norm(), 1e-15);
  }
}

TEST(Jones, GaugeInvariance) {
  std::mt19937 rng(12);
  std::normal_distribution<double> N;
  for (int k = 0; k < 100; ++k) {
    const Vec4 u = null_along({N(rng), N(rng), 1 + std::abs(N(rng))}, 1.3);
    PolarisationQubit q;
    q.u = u;
    q.psi = jones_to_vector(u, Vec2c(cd(N(rng), N(rng)), cd(N(rng), N(rng))));
    const Vec2c j0 = extract_jones(q);
    q.psi += cd(N(rng), N(rng)) * u.cast<cd>();
    EXPECT_LT((extract_jones(q) - j0).norm(), 1e-12);
  }
}

TEST(PolarisationIP, Examples) {
  PolarisationQubit a, b;
  const cd nu(0.4, 0.2), mu(-1.0, 0.5);
  a.psi = Vec4c(nu, 1, 0, nu);
  b.psi = Vec4c(mu, 0, 1, mu);
  EXPECT_LT(std::abs(polarisation_inner_product(b, a)), 1e-15);
  EXPECT_NEAR(std::abs(polarisation_inner_product(a, a) - 1.0), 0, 1e-15);
  std::mt19937 rng(13);
  std::normal_distribution<double> N;
  for (int k = 0; k < 50; ++k) {
    const Vec4 u = null_along({N(rng), N(rng), N(rng)});
    PolarisationQubit p, q;
    p.u = q.u = u;
    p.psi = refix_gauge(u, Vec4c::Random());
    q.psi = refix_gauge(u, Vec4c::Random());
    const cd base = polarisation_inner_product(p, q);
    p.psi += cd(N(rng), N(rng)) * u.cast<cd>();
    q.psi += cd(N(rng), N(rng)) * u.cast<cd>();
    EXPECT_LT(std::abs(polarisation_inner_product(p, q) - base), 1e-12);
  }
  PolarisationQubit c;
  c.u = Vec4(1, 1, 0, 0);
  EXPECT_THROW(polarisation_inner_product(a, c), Error);
}

TEST(PhotonTransport, FlatIsTrivial) {
  const auto t = integrate_null_geodesic(flat(), Vec4::Zero(), Vec4(1, 0.6, 0.8, 0), 5, 0.05);
  const auto q = state_on(t, Vec2c(0.6, cd(0, 0.8)));
  const auto r = parallel_transport_polarisation(q, t, flat());
  EXPECT_LT((r.qubit.psi - q.psi).norm(), 1e-14);
  EXPECT_NEAR(wigner_angle(t, flat()), 0.0, 1e-14);
}

TEST(PhotonTransport, GaugeNormAndInnerProductOverTenThousandSteps) {
  const auto sch = schwarzschild(1.0);
  const Spacetime st{sch, diagonal_tetrad(sch)};
  const auto t = bent_ray(st, 10000);
  const auto a = state_on(t, Vec2c(1, 0));
  const auto b = state_on(t, Vec2c(cd(0.6, 0.1), cd(0.2, -0.7)).normalized());
  const auto ra = parallel_transport_polarisation(a, t, st);
  const auto rb = parallel_transport_polarisation(b, t, st);
  EXPECT_LT(std::abs(lower(ra.qubit.u).cast<cd>().dot(ra.qubit.psi)), 1e-9);
  EXPECT_NEAR(polarisation_inner_product(ra.qubit, ra.qubit).real(), 1.0, 1e-9);
  EXPECT_LT(std::abs(polarisation_inner_product(ra.qubit, rb.qubit) -
                     polarisation_inner_product(a, b)),
            1e-9);
}

TEST(PhotonTransport, HelicityPreserved) {
  const auto sch = schwarzschild(1.0);
  const Spacetime st{sch, diagonal_tetrad(sch)};
  const auto t = bent_ray(st, 2000);
  for (cd h : {I1, -I1}) {
    const auto q = state_on(t, Vec2c(1, h) / std::sqrt(2.0));
    const Vec2c j = extract_jones(parallel_transport_polarisation(q, t, st).qubit);
    EXPECT_LT(std::abs(j[1] - h * j[0]), 1e-9);
  }
}

TEST(PhotonWigner, DualRouteSchwarzschild) {
  const auto sch = schwarzschild(1.0);
  const Mat4 L = rotation(Eigen::Vector3d(0.3, 1, -0.2), 0.8);
  for (const auto& tet :
       {diagonal_tetrad(sch), transform_tetrad(diagonal_tetrad(sch), [L](const Vec4&) { return L; })}) {
    const Spacetime st{sch, tet};
    const auto t = bent_ray(st, 4000);
    const double theta = wigner_angle(t, st);
    EXPECT_GT(std::abs(theta), 1e-3);
    for (const Vec2c& j0 : {Vec2c(1, 0), Vec2c(cd(0.6, 0.1), cd(0.2, -0.7)).normalized()}) {
      const auto r = parallel_transport_polarisation(state_on(t, j0), t, st);
      const Vec2c expect = rotation_y(theta).cast<cd>() * j0;
      EXPECT_LT((extract_jones(r.qubit) - expect).norm(), 1e-8);
    }
  }
}

TEST(PhotonWigner, AdaptedTetradReducesToOmega12) {
  // Flat space, ray along z, tetrad twisting about z with the height.
  const double kappa = 0.7;
  const auto twisted = transform_tetrad(identity_tetrad(), [kappa](const Vec4& x) {
    return rotation(Eigen::Vector3d::UnitZ(), kappa * x[3] + 0.2 * std::sin(x[0]));
  });
  const Spacetime st{minkowski(), twisted};
  const auto t = integrate_null_geodesic(st, Vec4::Zero(), Vec4(1, 0, 0, 1), 3.0, 1e-3);
  const double general = wigner_angle(t, st);
  const double adapted = wigner_angle_adapted(t, st);
  EXPECT_GT(std::abs(adapted), 0.1);
  EXPECT_NEAR(general, adapted, 1e-9);
  const auto r = parallel_transport_polarisation(state_on(t, Vec2c(1, 0)), t, st);
  EXPECT_LT((extract_jones(r.qubit) - rotation_y(general).cast<cd>() * Vec2c(1, 0)).norm(), 1e-8);
}
