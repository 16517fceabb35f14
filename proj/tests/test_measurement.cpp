#include "rqi/measurement.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rqi;

namespace {

const cd I1(0, 1);

struct Rand {
  std::mt19937 rng;
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U{-1, 1};
  explicit Rand(unsigned seed) : rng(seed) {}

  Eigen::Vector3d unit() { return Eigen::Vector3d(N(rng), N(rng), N(rng)).normalized(); }
  Vec4 velocity(double max_beta = 0.9) {
    const Eigen::Vector3d b = unit() * max_beta * std::abs(U(rng));
    const double g = 1 / std::sqrt(1 - b.squaredNorm());
    return Vec4(g, g * b[0], g * b[1], g * b[2]);
  }
  Vec4 spatial_unit() {
    const Eigen::Vector3d d = unit();
    return Vec4(0, d[0], d[1], d[2]);
  }
  Mat4 lorentz() { return boost(unit() * 0.9 * std::abs(U(rng))) * rotation(unit(), 3 * U(rng)); }
  Vec2c spinor() { return Vec2c(cd(N(rng), N(rng)), cd(N(rng), N(rng))); }
};

WeylQubit normalised(const Vec4& u, const Vec2c& chi) {
  // Rest-frame unit spinor boosted to u.
  return wigner_to_weyl(Vec4::Zero(), u, chi.normalized());
}

Mat2c sigma_dot(const Eigen::Vector3d& m) {
  return m[0] * sigma()[1] + m[1] * sigma()[2] + m[2] * sigma()[3];
}

}  // namespace

TEST(SternGerlach, Examples) {
  SternGerlachConfig c;
  EXPECT_LT((stern_gerlach_axis(c) - Vec4(0, 0, 0, 1)).norm(), 1e-15);

  const double b = 0.6, g = 1.25;
  c.u = Vec4(g, g * b, 0, 0);
  c.m = Vec4(0, 1, 0, 0);
  const Vec4 n = stern_gerlach_axis(c);
  EXPECT_LT((n - g * Vec4(b, 1, 0, 0)).norm(), 1e-14);
  EXPECT_NEAR(dot(n, c.u), 0.0, 1e-14);
  EXPECT_NEAR(dot(n, n), -1.0, 1e-14);

  c.m = Vec4(0, 0, 0, 1);
  EXPECT_LT((stern_gerlach_axis(c) - Vec4(0, 0, 0, 1)).norm(), 1e-15);
}

TEST(SternGerlach, RandomConfigurations) {
  Rand r(21);
  for (int k = 0; k < 1000; ++k) {
    SternGerlachConfig c;
    c.v = r.velocity();
    c.u = r.velocity();
    c.m = boost(Eigen::Vector3d(c.v[1], c.v[2], c.v[3]) / c.v[0]) * r.spatial_unit();
    const Vec4 n = stern_gerlach_axis(c);
    EXPECT_LT(std::abs(dot(n, c.u)), 1e-12);
    EXPECT_LT(std::abs(dot(n, n) + 1), 1e-12);
  }
}

TEST(SternGerlach, InvalidInputs) {
  SternGerlachConfig c;
  c.u = Vec4(1, 1, 0, 0);
  EXPECT_THROW(stern_gerlach_axis(c), Error);
  c = {};
  c.m = Vec4(0, 2, 0, 0);
  EXPECT_THROW(stern_gerlach_axis(c), Error);
}

TEST(SpinObservable, RestFrameZ) {
  const auto o = make_spin_observable(Vec4(0, 0, 0, 1), Vec4(1, 0, 0, 0));
  EXPECT_LT((o.op - sigma()[3]).norm(), 1e-15);
  EXPECT_THROW(make_spin_observable(Vec4(0.5, 0, 0, 1), Vec4(1, 0, 0, 0)), Error);
}

TEST(SpinObservable, SpectrumProjectorsAndHermiticity) {
  Rand r(22);
  for (int k = 0; k < 100; ++k) {
    const Vec4 u = r.velocity();
    const Vec4 n = spin1_boost(u) * r.spatial_unit();
    const auto o = make_spin_observable(n, u);
    EXPECT_TRUE(is_iu_hermitian(o.op, u));
    const auto es = spin_eigensystem(o);
    EXPECT_NEAR(es.values[0], -1, 1e-10);
    EXPECT_NEAR(es.values[1], 1, 1e-10);
    const Mat2c gram = es.vectors.adjoint() * inner_product_form(u) * es.vectors;
    EXPECT_LT((gram - Mat2c::Identity()).norm(), 1e-12);
    for (int i = 0; i < 2; ++i)
      EXPECT_LT((o.op * es.vectors.col(i) - es.values[i] * es.vectors.col(i)).norm(), 1e-10);
    const auto [Pp, Pm] = spin_projectors(o);
    EXPECT_LT((Pp + Pm - Mat2c::Identity()).norm(), 1e-12);
    EXPECT_LT((Pp * Pp - Pp).norm(), 1e-12);
    EXPECT_LT((Pm * Pm - Pm).norm(), 1e-12);
    // Rest-frame round trip: L^-1 op L is delta-Hermitian.
    const Mat2c L = standard_boost_spinhalf(u);
    const Mat2c rest = L.inverse() * o.op * L;
    EXPECT_LT((rest - rest.adjoint()).norm(), 1e-12);
    EXPECT_TRUE(is_iu_hermitian(L * rest * L.inverse(), u));
  }
}

TEST(SpinObservable, GeneralNCarriesIdentityTerm) {
  Rand r(23);
  for (int k = 0; k < 50; ++k) {
    const Vec4 u = r.velocity();
    const Vec4 N(r.N(r.rng), r.N(r.rng), r.N(r.rng), r.N(r.rng));
    const auto o = make_observable(N, u);
    EXPECT_TRUE(is_iu_hermitian(o.op, u, 1e-11));
    WeylQubit q;
    q.u = u;
    q.psi = r.spinor();
    // <psi|o psi>_u equals psibar N.sigmabar psi.
    EXPECT_NEAR(inner_product(u, q.psi, o.op * q.psi).real(), expectation(q, o),
                1e-11 * std::max(1.0, std::abs(expectation(q, o))));
  }
}

TEST(Expectation, Examples) {
  const auto o = make_spin_observable(Vec4(0, 0, 0, 1), Vec4(1, 0, 0, 0));
  WeylQubit q;
  EXPECT_NEAR(expectation(q, o), 1.0, 1e-15);
  q.psi = Vec2c(1, 1) / std::sqrt(2.0);
  EXPECT_NEAR(expectation(q, o), 0.0, 1e-15);
  q.u = Vec4(1.25, 0.75, 0, 0);
  EXPECT_THROW(expectation(q, o), Error);
}

TEST(Expectation, LorentzScalar) {
  Rand r(24);
  for (int k = 0; k < 200; ++k) {
    WeylQubit q;
    q.u = r.velocity();
    q.psi = r.spinor();
    const Vec4 n = spin1_boost(q.u) * r.spatial_unit();
    const double e0 = expectation(q, make_spin_observable(n, q.u));
    const Mat4 L = r.lorentz();
    WeylQubit t = q;
    t.u = L * q.u;
    t.psi = weyl_action(L) * q.psi;
    EXPECT_NEAR(expectation(t, make_spin_observable(L * n, t.u)), e0, 1e-10 * std::max(1.0, std::abs(e0)));
  }
}

TEST(MeasureSpin, Examples) {
  const auto o = make_spin_observable(Vec4(0, 0, 0, 1), Vec4(1, 0, 0, 0));
  WeylQubit q;
  const auto a = measure_spin(q, o);
  EXPECT_NEAR(a.p_plus, 1, 1e-15);
  EXPECT_NEAR(a.p_minus, 0, 1e-15);
  EXPECT_TRUE(a.plus_defined);
  EXPECT_FALSE(a.minus_defined);
  EXPECT_EQ(a.post_minus.psi.norm(), 0.0);
  EXPECT_LT((a.post_plus.psi - q.psi).norm(), 1e-15);
  for (double alpha : {0.1, 1.0, 2.5}) {
    q.psi = Vec2c(std::cos(alpha / 2), std::sin(alpha / 2));
    const auto m = measure_spin(q, o);
    EXPECT_NEAR(m.p_plus, std::pow(std::cos(alpha / 2), 2), 1e-15);
    EXPECT_NEAR(m.p_plus + m.p_minus, 1, 1e-12);
    EXPECT_NEAR(measure_spin(m.post_plus, o).p_plus, 1, 1e-12);
    EXPECT_NEAR(measure_spin(m.post_minus, o).p_minus, 1, 1e-12);
  }
  q.psi = Vec2c(2, 0);
  EXPECT_THROW(measure_spin(q, o), Error);
}

TEST(MeasureSpin, CoMovingApparatusMatchesRestFrameSigma) {
  // u = v: the axis is m projected orthogonal to u, and the rest-frame oracle is sigma.m'.
  Rand r(25);
  for (int k = 0; k < 200; ++k) {
    SternGerlachConfig c;
    c.u = c.v = r.velocity();
    const Mat4 Lu = spin1_boost(c.u);
    const Vec4 m_rest = r.spatial_unit();
    c.m = Lu * m_rest;
    const Vec2c chi = r.spinor().normalized();
    const WeylQubit q = normalised(c.u, chi);
    const auto out = measure_spin(q, c);
    const double oracle = 0.5 * (1 + chi.dot(sigma_dot(m_rest.tail<3>()) * chi).real());
    EXPECT_NEAR(out.p_plus, oracle, 1e-12);
    EXPECT_NEAR(out.p_plus + out.p_minus, 1.0, 1e-12);
  }
}

TEST(MeasureSpin, NonRelativisticLimit) {
  Rand r(26);
  for (int k = 0; k < 200; ++k) {
    SternGerlachConfig c;
    c.u = r.velocity(1e-9);
    c.v = r.velocity(1e-9);
    const Vec4 m = r.spatial_unit();
    c.m = boost(Eigen::Vector3d(c.v[1], c.v[2], c.v[3]) / c.v[0]) * m;
    const Vec2c chi = r.spinor().normalized();
    WeylQubit q = normalised(c.u, chi);
    const double oracle = 0.5 * (1 + chi.dot(sigma_dot(m.tail<3>()) * chi).real());
    EXPECT_NEAR(measure_spin(q, c).p_plus, oracle, 1e-8);
  }
}

TEST(MeasureSpin, ProbabilitiesAreLorentzScalars) {
  Rand r(27);
  for (int k = 0; k < 200; ++k) {
    SternGerlachConfig c;
    c.u = r.velocity();
    c.v = r.velocity();
    c.m = boost(Eigen::Vector3d(c.v[1], c.v[2], c.v[3]) / c.v[0]) * r.spatial_unit();
    const WeylQubit q = normalised(c.u, r.spinor());
    const double p0 = measure_spin(q, c).p_plus;
    const Mat4 L = r.lorentz();
    SternGerlachConfig t{L * c.m, L * c.v, L * c.u};
    WeylQubit qt = q;
    qt.u = t.u;
    qt.psi = weyl_action(L) * q.psi;
    EXPECT_NEAR(measure_spin(qt, t).p_plus, p0, 1e-10);
  }
}

TEST(Polariser, Examples) {
  const Vec4 u(1, 0, 0, 1);
  PolarisationQubit q;
  q.u = u;
  q.psi = jones_to_vector(u, Vec2c(1, I1) / std::sqrt(2.0));
  EXPECT_NEAR(polariser_probability(q, make_polariser(u, Vec2c(1, I1))), 1, 1e-15);
  EXPECT_NEAR(polariser_probability(q, make_polariser(u, Vec2c(1, -I1))), 0, 1e-15);
  q.psi = jones_to_vector(u, Vec2c(1, 0));
  EXPECT_NEAR(polariser_probability(q, make_polariser(u, Vec2c(0, 1))), 0, 1e-15);
  for (double phi = 0; phi < 3.2; phi += 0.2)
    EXPECT_NEAR(polariser_probability(q, make_polariser(u, Vec2c(std::cos(phi), std::sin(phi)))),
                std::pow(std::cos(phi), 2), 1e-14);
  PolariserVector bad = make_polariser(Vec4(1, 1, 0, 0), Vec2c(1, 0));
  EXPECT_THROW(polariser_probability(q, bad), Error);
  validate_polariser(make_polariser(u, Vec2c(0.3, cd(0.1, 2))));
  bad = make_polariser(u, Vec2c(1, 0));
  bad.P *= 2;
  EXPECT_THROW(validate_polariser(bad), Error);
}

TEST(Polariser, GaugeInvarianceAndLorentzScalar) {
  Rand r(28);
  for (int k = 0; k < 200; ++k) {
    Eigen::Vector3d d = r.unit();
    if (d[2] < -0.9) d = -d;
    const Vec4 u = 1.7 * Vec4(1, d[0], d[1], d[2]);
    PolarisationQubit q;
    q.u = u;
    q.psi = jones_to_vector(u, r.spinor().normalized());
    PolariserVector pol = make_polariser(u, r.spinor());
    const double p0 = polariser_probability(q, pol);
    PolarisationQubit qg = q;
    qg.psi += cd(r.N(r.rng), r.N(r.rng)) * u.cast<cd>();
    PolariserVector pg = pol;
    pg.P += cd(r.N(r.rng), r.N(r.rng)) * u.cast<cd>();
    EXPECT_NEAR(polariser_probability(qg, pg), p0, 1e-12);
    const Mat4 L = r.lorentz();
    PolarisationQubit qt = q;
    qt.u = L * q.u;
    qt.psi = L.cast<cd>() * q.psi;
    PolariserVector pt{L.cast<cd>() * pol.P, L * pol.u};
    EXPECT_NEAR(polariser_probability(qt, pt), p0, 1e-10);
  }
}

TEST(PhotonObservable, Examples) {
  const Vec4 u(1, 0.6, 0, 0.8);
  const auto fr = adapted_diad_frame(u);
  const Vec4c f1 = fr.f.row(0).transpose().cast<cd>(), f2 = fr.f.row(1).transpose().cast<cd>();
  const Mat4c id = make_photon_observable(1, 1, 0, fr);
  for (const Vec4c& v : {f1, f2, Vec4c(cd(0.3, 1) * f1 + cd(-2, 0.5) * f2)})
    EXPECT_LT((id * v - v).norm(), 1e-15);
  EXPECT_LT((id * u.cast<cd>()).norm(), 1e-15);
  const Mat4c hv = make_photon_observable(1, -1, 0, fr);
  EXPECT_LT((hv * f1 - f1).norm(), 1e-15);
  EXPECT_LT((hv * f2 + f2).norm(), 1e-15);
}

TEST(PhotonObservable, RandomParametersAreHermitian) {
  Rand r(29);
  for (int k = 0; k < 100; ++k) {
    Eigen::Vector3d d = r.unit();
    if (d[2] < -0.9) d = -d;
    const Vec4 u(1, d[0], d[1], d[2]);
    const auto fr = adapted_diad_frame(u);
    const cd beta(r.N(r.rng), r.N(r.rng));
    const Mat4c o = make_photon_observable(r.N(r.rng), r.N(r.rng), beta, fr);
    EXPECT_TRUE(is_photon_hermitian(o, u));
    EXPECT_LT((o * u.cast<cd>()).norm(), 1e-12);
    EXPECT_LT((u.transpose().cast<cd>() * eta().cast<cd>() * o).norm(), 1e-12);
  }
  Eigen::Matrix<double, 2, 4> bad;
  bad << 0, 1, 0, 0, 0, 1, 0, 0;
  EXPECT_THROW(make_diad_frame(Vec4(1, 0, 0, 1), bad), Error);
  bad << 0, 0, 0, 1, 0, 1, 0, 0;
  EXPECT_THROW(make_diad_frame(Vec4(1, 0, 0, 1), bad), Error);
}
