#include "rqi/measurement.hpp"
#include "rqi/multiqubit.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rqi;

namespace {

const cd I1(0, 1);

struct Rand {
  std::mt19937 rng;
  std::normal_distribution<double> N;
  explicit Rand(unsigned seed) : rng(seed) {}
  Eigen::Vector3d unit() { return Eigen::Vector3d(N(rng), N(rng), N(rng)).normalized(); }
  Vec4 velocity() {
    const Eigen::Vector3d b = unit() * 0.8 * std::abs(std::tanh(N(rng)));
    const double g = 1 / std::sqrt(1 - b.squaredNorm());
    return Vec4(g, g * b[0], g * b[1], g * b[2]);
  }
  Vec2c spinor() { return Vec2c(cd(N(rng), N(rng)), cd(N(rng), N(rng))); }
  Mat2c unitary() {
    Eigen::HouseholderQR<Mat2c> qr(Mat2c::Random());
    return qr.householderQ();
  }
  Mat4 lorentz() { return boost(unit() * 0.7) * rotation(unit(), N(rng)); }
};

MultiState singlet(const Vec4& u1 = Vec4(1, 0, 0, 0), const Vec4& u2 = Vec4(1, 0, 0, 0)) {
  const Mat2c L1 = standard_boost_spinhalf(u1), L2 = standard_boost_spinhalf(u2);
  MultiState s;
  s.meta = {{Vec4::Zero(), u1, Species::Fermion}, {Vec4::Zero(), u2, Species::Fermion}};
  VecXc up1 = L1.col(0), dn1 = L1.col(1), up2 = L2.col(0), dn2 = L2.col(1);
  s.c = VecXc::Zero(4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) s.c[2 * a + b] = (up1[a] * dn2[b] - dn1[a] * up2[b]) / std::sqrt(2.0);
  return s;
}

MultiState triplet0() {
  MultiState s = singlet();
  s.c << 0, 1, 1, 0;
  s.c /= std::sqrt(2.0);
  return s;
}

TransportOperator random_transport(Rand& r, const Vec4& u0) {
  // Lorentz step u0 -> Lambda u0 with its spinor action.
  const Mat4 L = r.lorentz();
  return {weyl_action(L), u0, L * u0};
}

}  // namespace

TEST(Bipartite, SingletExamples) {
  EXPECT_NEAR(std::abs(inner_product(singlet(), singlet()) - 1.0), 0, 1e-15);
  EXPECT_LT(std::abs(inner_product(singlet(), triplet0())), 1e-15);
  MultiState other = singlet();
  other.meta[1].u = Vec4(1.25, 0.75, 0, 0);
  EXPECT_THROW(inner_product(singlet(), other), Error);
}

TEST(Bipartite, InnerProductCovariance) {
  Rand r(31);
  for (int k = 0; k < 50; ++k) {
    const Vec4 u1 = r.velocity(), u2 = r.velocity();
    MultiState s{{{Vec4::Zero(), u1, Species::Fermion}, {Vec4::Zero(), u2, Species::Fermion}},
                 VecXc::Random(4)};
    MultiState t = s;
    t.c = VecXc::Random(4);
    const cd ip = inner_product(s, t);
    const Mat4 L1 = r.lorentz(), L2 = r.lorentz();
    MultiState s2 = apply_local(apply_local(s, 0, weyl_action(L1)), 1, weyl_action(L2));
    MultiState t2 = apply_local(apply_local(t, 0, weyl_action(L1)), 1, weyl_action(L2));
    for (auto* m : {&s2, &t2}) {
      m->meta[0].u = L1 * u1;
      m->meta[1].u = L2 * u2;
    }
    EXPECT_LT(std::abs(inner_product(s2, t2) - ip), 1e-10 * std::max(1.0, std::abs(ip)));
  }
}

TEST(Bipartite, PhotonSlots) {
  const Vec4 k(1, 0, 0, 1);
  const Subsystem ph{Vec4::Zero(), k, Species::Photon};
  const Subsystem fe{Vec4::Zero(), Vec4(1, 0, 0, 0), Species::Fermion};
  const VecXc h = jones_to_vector(k, Vec2c(1, 0)), v = jones_to_vector(k, Vec2c(0, 1));
  MultiState a = product_state({ph, fe}, {h, Vec2c(1, 0)});
  MultiState b = product_state({ph, fe}, {v, Vec2c(1, 0)});
  EXPECT_NEAR(norm2(a), 1, 1e-15);
  EXPECT_LT(std::abs(inner_product(a, b)), 1e-15);
  // Gauge shift on the photon slot leaves inner products unchanged.
  MultiState ag = product_state({ph, fe}, {VecXc(h + cd(0.3, 2) * k.cast<cd>()), Vec2c(1, 0)});
  EXPECT_NEAR(std::abs(inner_product(ag, a) - 1.0), 0, 1e-14);
  // Entangled photon-fermion pair has one bit.
  MultiState e = a;
  e.c = (a.c + product_state({ph, fe}, {v, Vec2c(0, 1)}).c) / std::sqrt(2.0);
  EXPECT_NEAR(entanglement_entropy(e), 1.0, 1e-12);
  EXPECT_THROW(product_state({ph}, {Vec2c(1, 0)}), Error);
}

TEST(EvolveLocal, IdentityAndErrors) {
  const auto s = singlet();
  EXPECT_LT((evolve_local(s, 0, TransportOperator{}).c - s.c).norm(), 1e-15);
  EXPECT_THROW(evolve_local(s, 2, TransportOperator{}), Error);
  TransportOperator moved;
  moved.u_start = Vec4(1.25, 0.75, 0, 0);
  EXPECT_THROW(evolve_local(s, 0, moved), Error);
  EXPECT_THROW(evolve_local(s, 0, MatXc(sigma()[1] * cd(0, 1)), 0.1), Error);
}

TEST(EvolveLocal, OrderIndependenceNormAndEntropy) {
  Rand r(32);
  for (int k = 0; k < 50; ++k) {
    MultiState s = singlet(r.velocity(), r.velocity());
    s.c = VecXc::Random(4);
    s.c /= std::sqrt(norm2(s));
    const auto T1 = random_transport(r, s.meta[0].u), T2 = random_transport(r, s.meta[1].u);
    const auto a = evolve_local(evolve_local(s, 0, T1), 1, T2);
    const auto b = evolve_local(evolve_local(s, 1, T2), 0, T1);
    EXPECT_LT((a.c - b.c).norm(), 1e-12);
    EXPECT_NEAR(norm2(a), 1.0, 1e-10);
    EXPECT_NEAR(entanglement_entropy(a), entanglement_entropy(s), 1e-10);
    // Hermitian generator route: the spin observable along a random axis.
    const Vec4 axis = spin1_boost(a.meta[0].u) * Vec4(0, 0.6, 0, 0.8);
    const Mat2c H = make_spin_observable(axis, a.meta[0].u).op;
    const auto c = evolve_local(a, 0, MatXc(H), 0.37);
    EXPECT_NEAR(norm2(c), 1.0, 1e-10);
    EXPECT_NEAR(entanglement_entropy(c), entanglement_entropy(s), 1e-10);
  }
}

TEST(UpdateOnOutcome, SingletAnticorrelation) {
  const auto s = singlet();
  const auto [Pp, Pm] = spin_projectors(make_spin_observable(Vec4(0, 0, 0, 1), Vec4(1, 0, 0, 0)));
  const auto r = update_on_outcome(s, 0, Pp);
  EXPECT_NEAR(r.probability, 0.5, 1e-15);
  EXPECT_TRUE(r.defined);
  const auto q = update_on_outcome(r.state, 1, Pm);
  EXPECT_NEAR(q.probability, 1.0, 1e-15);
  EXPECT_NEAR(update_on_outcome(r.state, 1, Pp).probability, 0.0, 1e-15);
  EXPECT_FALSE(update_on_outcome(r.state, 1, Pp).defined);
}

TEST(UpdateOnOutcome, ProductStateLeavesOtherSlot) {
  Rand r(33);
  WeylQubit a, b;
  a.u = r.velocity();
  b.u = r.velocity();
  a.psi = r.spinor();
  b.psi = r.spinor();
  a.psi /= std::sqrt(norm2(a));
  b.psi /= std::sqrt(norm2(b));
  const auto s = product_state({a, b});
  const Vec4 n = spin1_boost(a.u) * Vec4(0, 0, 0, 1);
  const auto [Pp, Pm] = spin_projectors(make_spin_observable(n, a.u));
  const auto up = update_on_outcome(s, 0, Pp);
  WeylQubit a2 = a;
  a2.psi = Pp * a.psi;
  a2.psi /= std::sqrt(norm2(a2));
  const auto expect = product_state({a2, b});
  EXPECT_NEAR(std::abs(inner_product(expect, up.state)), 1.0, 1e-12);
  EXPECT_NEAR(up.probability, inner_product(a.u, a.psi, Pp * a.psi).real(), 1e-12);
}

TEST(UpdateOnOutcome, CommutesWithOtherSlotEvolution) {
  Rand r(34);
  for (int k = 0; k < 50; ++k) {
    MultiState s = singlet(r.velocity(), r.velocity());
    s.c = VecXc::Random(4);
    s.c /= std::sqrt(norm2(s));
    const Vec4 n = spin1_boost(s.meta[0].u) * Vec4(0, 1, 0, 0);
    const auto [Pp, Pm] = spin_projectors(make_spin_observable(n, s.meta[0].u));
    const auto T = random_transport(r, s.meta[1].u);
    const auto a = evolve_local(update_on_outcome(s, 0, Pp).state, 1, T);
    const auto up = update_on_outcome(evolve_local(s, 1, T), 0, Pp);
    EXPECT_LT((a.c - up.state.c).norm(), 1e-12);
    EXPECT_NEAR(update_on_outcome(s, 0, Pp).probability, up.probability, 1e-12);
  }
}

TEST(Exchange, SymmetriseAndAntisymmetrise) {
  WeylQubit up, dn;
  dn.psi = Vec2c(0, 1);
  const auto ud = product_state({up, dn});
  EXPECT_NEAR(std::abs(inner_product(antisymmetrise(ud), singlet())), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(inner_product(symmetrise(ud), triplet0())), 1.0, 1e-15);
  // Pauli exclusion.
  EXPECT_THROW(antisymmetrise(product_state({up, up})), Error);
  WeylQubit moving = up;
  moving.u = Vec4(1.25, 0.75, 0, 0);
  EXPECT_THROW(symmetrise(product_state({up, moving})), Error);
}

// ─── Teleportation ─────────────────────────────────────────────────────────

TEST(Teleport, FlatBasisStateArrives) {
  std::array<BasisPair, 3> basis;
  for (auto& b : basis) b = basis_from_rest_frame(Vec4::Zero(), Vec4(1, 0, 0, 0), Mat2c::Identity());
  const auto s = make_session(basis, 1, 0);
  for (const auto& br : teleport_all(s)) {
    EXPECT_NEAR(br.probability, 0.25, 1e-15);
    EXPECT_LT((br.bob_state - Vec2c(1, 0)).norm(), 1e-15);
    EXPECT_NEAR(br.fidelity, 1.0, 1e-15);
  }
}

TEST(Teleport, RandomInputsWithTransportedBases) {
  Rand r(35);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    std::array<BasisPair, 3> basis;
    for (auto& b : basis) b = basis_from_rest_frame(Vec4::Zero(), r.velocity(), r.unitary());
    const Vec2c ab = r.spinor().normalized();
    auto s = make_session(basis, ab[0], ab[1]);
    for (std::size_t i = 0; i < 3; ++i) transport_particle(s, i, random_transport(r, s.basis[i].phi.u));
    double total = 0;
    for (const auto& br : teleport_all(s)) {
      EXPECT_NEAR(br.probability, 0.25, 1e-10);
      EXPECT_GT(br.fidelity, 1 - 1e-9);
      EXPECT_LT((br.bob_state - ab).norm(), 1e-9);
      total += br.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_GT(teleport(s, rng).fidelity, 1 - 1e-9);
  }
}

TEST(Teleport, InvariantUnderGlobalPhaseAndCommonLorentz) {
  Rand r(36);
  std::array<BasisPair, 3> basis;
  for (auto& b : basis) b = basis_from_rest_frame(Vec4::Zero(), r.velocity(), r.unitary());
  const Vec2c ab = r.spinor().normalized();
  const auto s = make_session(basis, ab[0], ab[1]);
  const auto ref = teleport_all(s);
  const auto ph = teleport_all(make_session(basis, ab[0] * I1, ab[1] * I1));
  const Mat4 L = r.lorentz();
  auto moved = basis;
  for (auto& b : moved)
    for (auto* q : {&b.phi, &b.psi}) {
      q->u = L * q->u;
      q->psi = weyl_action(L) * q->psi;
    }
  const auto lt = teleport_all(make_session(moved, ab[0], ab[1]));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(ph[i].fidelity, ref[i].fidelity, 1e-12);
    EXPECT_NEAR(lt[i].fidelity, ref[i].fidelity, 1e-10);
    EXPECT_NEAR(lt[i].probability, ref[i].probability, 1e-10);
  }
}

TEST(Teleport, WrongBobBasisGivesOutcomeDependentStates) {
  Rand r(37);
  std::array<BasisPair, 3> basis;
  for (auto& b : basis) b = basis_from_rest_frame(Vec4::Zero(), Vec4(1, 0, 0, 0), Mat2c::Identity());
  const Vec2c ab = Vec2c(0.6, cd(0, 0.8));
  auto s = make_session(basis, ab[0], ab[1]);
  // A spatial rotation about x: rest-frame components change while u stays at rest.
  const Mat4 R = rotation(Eigen::Vector3d::UnitX(), 0.9);
  transport_particle(s, 2, {weyl_action(R), Vec4(1, 0, 0, 0), Vec4(1, 0, 0, 0)}, false);
  const auto br = teleport_all(s);
  double spread = 0;
  for (int i = 1; i < 4; ++i) spread = std::max(spread, 1 - std::norm(br[0].bob_state.dot(br[i].bob_state)));
  EXPECT_GT(spread, 0.1);
  for (const auto& b : br) EXPECT_NEAR(b.probability, 0.25, 1e-12);
}

TEST(Teleport, NonCanonicalRejected) {
  std::array<BasisPair, 3> basis;
  for (auto& b : basis) b = basis_from_rest_frame(Vec4::Zero(), Vec4(1, 0, 0, 0), Mat2c::Identity());
  auto s = make_session(basis, 1, 0);
  s.state.c.setZero();
  s.state.c[0] = 1;  // |000>: no entanglement
  EXPECT_THROW(check_canonical(s), Error);
  EXPECT_THROW(make_session(basis, 1, 1), Error);
}
