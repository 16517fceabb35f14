#include "rqi/trajectories.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace rqi;

namespace {

Spacetime flat() { return {minkowski(), identity_tetrad()}; }
Spacetime rindler_st(double g) {
  const auto m = rindler(g);
  return {m, diagonal_tetrad(m)};
}
double gamma_of(double b) { return 1 / std::sqrt(1 - b * b); }

}  // namespace

TEST(LorentzForce, FreeStraightLine) {
  const auto t = integrate_lorentz_force(flat(), no_field(), 1, 0, Vec4::Zero(),
                                         Vec4(1, 0, 0, 0), 2.0, 0.01);
  EXPECT_EQ(t.size(), 201u);
  EXPECT_LT((t.back().x - Vec4(2, 0, 0, 0)).norm(), 1e-13);
  for (const auto& s : t.samples) EXPECT_EQ(s.aI.norm(), 0.0);
}

TEST(LorentzForce, CyclotronOrbit) {
  // Oracle: x = R sin(w tau), y = -R (1 - cos(w tau)), w = eB/m, R = gamma m beta / (e B).
  const double e = 1.5, m = 2.0, B = 0.8, b = 0.6, g = gamma_of(b);
  const double R = g * m * b / (e * B), w = e * B / m;
  const auto field = uniform_field({0, 0, 0}, {0, 0, B});
  const double span = 2.5;
  const auto t = integrate_lorentz_force(flat(), field, m, e, Vec4::Zero(),
                                         Vec4(g, g * b, 0, 0), span, 1e-3);
  const Vec4 x = t.back().x;
  EXPECT_NEAR(x[1], R * std::sin(w * span), 1e-10);
  EXPECT_NEAR(x[2], -R * (1 - std::cos(w * span)), 1e-10);
  EXPECT_NEAR(x[0], g * span, 1e-10);
  for (const auto& s : t.samples) {
    EXPECT_NEAR(std::sqrt(-dot(s.aI, s.aI)), e * B * b * g / m, 1e-9);
    EXPECT_NEAR(std::hypot(s.x[1], s.x[2] + R), R, 1e-10);
  }
  const Vec4 a = proper_acceleration(flat(), t, 1000);
  EXPECT_NEAR(std::sqrt(-dot(a, a)), e * B * b * g / m, 1e-6);
}

TEST(LorentzForce, RindlerHoverByElectricField) {
  // A static frame field F_{03} = m g / (q (1 + g z)) holds the particle at height z.
  const double g = 0.3, z = 0.5, m = 1.0, q = 1.0;
  const auto st = rindler_st(g);
  const auto field = uniform_field({0, 0, m * g / (q * (1 + g * z))}, {0, 0, 0});
  const auto t = integrate_lorentz_force(st, field, m, q, Vec4(0, 0, 0, z),
                                         Vec4(1 / (1 + g * z), 0, 0, 0), 3.0, 1e-3);
  EXPECT_NEAR(t.back().x[3], z, 1e-9);
  for (const auto& s : t.samples) {
    EXPECT_NEAR(std::sqrt(-dot(s.aI, s.aI)), g / (1 + g * z), 1e-9);
    EXPECT_NEAR(dot(s.aI, s.uI), 0, 1e-12);
  }
  const Vec4 a = proper_acceleration(st, t, 1500);
  EXPECT_NEAR(a[3], g / (1 + g * z), 1e-8);
}

TEST(ProperAcceleration, StationaryAndGeodesic) {
  const double g = 0.4;
  const auto st = rindler_st(g);
  const auto hover = rindler_hover(g, 0.0, 2.0, 100);
  const Vec4 a = proper_acceleration(st, hover, 50);
  EXPECT_NEAR(std::sqrt(-dot(a, a)), g, 1e-12);
  const auto geo = schwarzschild_circular(1.0, 9.0, 5.0, 500);
  const auto sch = schwarzschild(1.0);
  for (std::size_t i : {0u, 250u, 500u})
    EXPECT_LT(proper_acceleration({sch, diagonal_tetrad(sch)}, geo, i).norm(), 1e-8);
  Trajectory null_t;
  null_t.kind = TrajectoryKind::Null;
  null_t.samples.resize(3);
  EXPECT_THROW(proper_acceleration(flat(), null_t, 1), Error);
}

TEST(LorentzForce, DriftIsFourthOrder) {
  const double g = 0.5, z0 = 0.2, vx = 0.8;
  const auto st = rindler_st(g);
  const Vec4 u0(std::sqrt(1 + vx * vx) / (1 + g * z0), vx, 0, 0);
  auto drift = [&](double h) {
    return normalisation_drift(
        integrate_lorentz_force(st, no_field(), 1, 0, Vec4(0, 0, 0, z0), u0, 1.5, h));
  };
  const double d1 = drift(0.005), d2 = drift(0.0025);
  EXPECT_GT(d1, 1e-13);
  EXPECT_GE(d1 / d2, 8.0);
}

TEST(LorentzForce, StepTooLargeRaised) {
  const double e = 1, m = 1, B = 50;
  EXPECT_THROW(integrate_lorentz_force(flat(), uniform_field({0, 0, 0}, {0, 0, B}), m, e,
                                       Vec4::Zero(), Vec4(1.25, 0.75, 0, 0), 1.0, 0.2),
               Error);
}

TEST(LorentzForce, RindlerEnergyConserved) {
  // Free fall: E = g_tt u^t is a constant of motion.
  const double g = 0.5;
  const auto st = rindler_st(g);
  const double z0 = 0.4, vx = 0.3;
  const double ut = std::sqrt(1 + vx * vx) / (1 + g * z0);
  const auto t = integrate_lorentz_force(st, no_field(), 1, 0, Vec4(0, 0, 0, z0),
                                         Vec4(ut, vx, 0, 0), 1.5, 1e-3);
  const double E0 = std::pow(1 + g * z0, 2) * ut;
  for (const auto& s : t.samples)
    EXPECT_NEAR(std::pow(1 + g * s.x[3], 2) * s.u[0] / E0, 1.0, 1e-8);
}

TEST(NullGeodesic, FlatStraightRay) {
  const auto t = integrate_null_geodesic(flat(), Vec4::Zero(), Vec4(2, 0, 2, 0), 3.0, 0.01);
  EXPECT_LT((t.front().uI - Vec4(1, 0, 1, 0)).norm(), 1e-15);
  EXPECT_LT((t.back().x - Vec4(3, 0, 3, 0)).norm(), 1e-12);
}

TEST(NullGeodesic, SchwarzschildRadialInfall) {
  const double M = 1.0, r0 = 20.0;
  const auto sch = schwarzschild(M);
  const double f = 1 - 2 * M / r0;
  const auto t = integrate_null_geodesic({sch, diagonal_tetrad(sch)}, Vec4(0, r0, M_PI / 2, 0),
                                         Vec4(1 / f, -1, 0, 0), 10.0, 1e-3);
  for (std::size_t i : {0u, 5000u, 10000u}) {
    const auto& s = t.samples[i];
    EXPECT_NEAR(s.u[1] / s.u[0], -(1 - 2 * M / s.x[1]), 1e-10);
  }
}

TEST(NullGeodesic, NullityDriftOverTenThousandSteps) {
  const auto sch = schwarzschild(1.0);
  const double r0 = 10, f = 1 - 2 / r0;
  // Tangential plus radial components, null by construction.
  const double kr = 0.3, kph = 0.05;
  const double kt = std::sqrt((kr * kr / f + r0 * r0 * kph * kph) / f);
  const auto t = integrate_null_geodesic({sch, diagonal_tetrad(sch)}, Vec4(0, r0, M_PI / 2, 0),
                                         Vec4(kt, kr, 0, kph), 20.0, 2e-3);
  EXPECT_EQ(t.size(), 10001u);
  EXPECT_LT(normalisation_drift(t), 1e-9);
}

TEST(NullGeodesic, NotNullRejected) {
  EXPECT_THROW(integrate_null_geodesic(flat(), Vec4::Zero(), Vec4(1, 0.5, 0, 0), 1, 0.1), Error);
}

TEST(TrajectoryCsv, RoundTrip) {
  const auto t = circular_orbit_flat(0.3, 2.0, 0.25, 10);
  std::stringstream ss;
  write_csv(ss, t);
  const auto r = read_csv(ss, TrajectoryKind::Timelike);
  ASSERT_EQ(r.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(r.samples[i].lambda, t.samples[i].lambda);
    EXPECT_EQ(r.samples[i].x, t.samples[i].x);
    EXPECT_EQ(r.samples[i].aI, t.samples[i].aI);
  }
}
