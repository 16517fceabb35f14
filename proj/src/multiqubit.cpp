#include "rqi/multiqubit.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace rqi {

namespace {

constexpr double kZeroBranch = 1e-14;

std::size_t total_dim(const std::vector<Subsystem>& meta) {
  std::size_t n = 1;
  for (const auto& m : meta) n *= m.dim();
  return n;
}

void require_slot(const MultiState& s, std::size_t which) {
  if (which >= s.parties())
    throw Error(Errc::SubsystemOutOfRange, "no subsystem " + std::to_string(which));
}

bool same_velocity(const Vec4& a, const Vec4& b) {
  return (a - b).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff());
}

// Splits the index space around slot k: (pre, d, post).
struct Split {
  std::size_t pre = 1, d = 1, post = 1;
};

Split split(const std::vector<Subsystem>& meta, std::size_t k) {
  Split s;
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (i < k) s.pre *= meta[i].dim();
    if (i > k) s.post *= meta[i].dim();
  }
  s.d = meta[k].dim();
  return s;
}

VecXc apply_slot(const std::vector<Subsystem>& meta, const VecXc& c, std::size_t k,
                 const MatXc& op) {
  const Split sp = split(meta, k);
  VecXc out = VecXc::Zero(sp.pre * op.rows() * sp.post);
  for (std::size_t p = 0; p < sp.pre; ++p)
    for (Eigen::Index i = 0; i < op.rows(); ++i)
      for (std::size_t j = 0; j < sp.d; ++j) {
        const cd w = op(i, j);
        if (w == cd(0)) continue;
        for (std::size_t q = 0; q < sp.post; ++q)
          out[(p * op.rows() + i) * sp.post + q] += w * c[(p * sp.d + j) * sp.post + q];
      }
  return out;
}

VecXc kron(const VecXc& a, const VecXc& b) {
  VecXc out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

// Map to orthonormal components for one slot.
MatXc orthonormal_map(const Subsystem& s) {
  if (s.species == Species::Fermion) return standard_boost_spinhalf(s.u).inverse();
  return diad(s.u).cast<cd>();
}

MatXc swap_operator(int d) {
  MatXc S = MatXc::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) S(j * d + i, i * d + j) = 1.0;
  return S;
}

MultiState exchange(const MultiState& s, double sign) {
  if (s.parties() != 2) throw Error(Errc::InvalidArgument, "exchange needs two subsystems");
  if (s.meta[0].species != s.meta[1].species || !same_velocity(s.meta[0].u, s.meta[1].u))
    throw Error(Errc::MomentumMismatch, "exchange needs identical species and momenta");
  MultiState out = s;
  out.c = s.c + sign * (swap_operator(s.meta[0].dim()) * s.c);
  const double n = norm2(out);
  if (n <= kZeroBranch) throw Error(Errc::ZeroProbabilityBranch, "exchange annihilates state");
  out.c /= std::sqrt(n);
  return out;
}

}  // namespace

MultiState product_state(const std::vector<WeylQubit>& qubits) {
  std::vector<Subsystem> meta;
  std::vector<VecXc> parts;
  for (const auto& q : qubits) {
    meta.push_back({q.x, q.u, Species::Fermion});
    parts.push_back(q.psi);
  }
  return product_state(meta, parts);
}

MultiState product_state(const std::vector<Subsystem>& meta, const std::vector<VecXc>& parts) {
  if (meta.size() != parts.size() || meta.empty())
    throw Error(Errc::DimensionMismatch, "one part per subsystem required");
  VecXc c = VecXc::Ones(1);
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (parts[i].size() != meta[i].dim())
      throw Error(Errc::DimensionMismatch, "part dimension does not match species");
    c = kron(c, parts[i]);
  }
  return {meta, c};
}

MatXc local_form(const Subsystem& s) {
  if (s.species == Species::Fermion) return inner_product_form(s.u);
  return -eta().cast<cd>();
}

cd inner_product(const MultiState& s, const MultiState& t) {
  if (s.parties() != t.parties()) throw Error(Errc::DimensionMismatch, "party count differs");
  for (std::size_t i = 0; i < s.parties(); ++i)
    if (s.meta[i].species != t.meta[i].species || !same_velocity(s.meta[i].u, t.meta[i].u))
      throw Error(Errc::MomentumMismatch, "subsystem " + std::to_string(i) + " differs");
  VecXc g = t.c;
  for (std::size_t i = 0; i < t.parties(); ++i) g = apply_slot(t.meta, g, i, local_form(t.meta[i]));
  return s.c.dot(g);
}

double norm2(const MultiState& s) { return inner_product(s, s).real(); }

MultiState apply_local(const MultiState& s, std::size_t which, const MatXc& op) {
  require_slot(s, which);
  const int d = s.meta[which].dim();
  if (op.rows() != d || op.cols() != d)
    throw Error(Errc::DimensionMismatch, "operator does not match subsystem dimension");
  return {s.meta, apply_slot(s.meta, s.c, which, op)};
}

MultiState evolve_local(const MultiState& s, std::size_t which, const TransportOperator& op) {
  require_slot(s, which);
  if (s.meta[which].species != Species::Fermion)
    throw Error(Errc::InvalidArgument, "spinor transport on a photon slot");
  if (!same_velocity(s.meta[which].u, op.u_start))
    throw Error(Errc::VelocityMismatch, "operator starts at a different velocity");
  MultiState out = apply_local(s, which, op.T);
  out.meta[which].u = op.u_end;
  return out;
}

MultiState evolve_local(const MultiState& s, std::size_t which, const MatXc& H, double dlambda) {
  require_slot(s, which);
  const MatXc G = local_form(s.meta[which]);
  if (H.rows() != G.rows() || H.cols() != G.cols())
    throw Error(Errc::DimensionMismatch, "generator does not match subsystem dimension");
  const MatXc GH = G * H;
  if ((GH - GH.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, GH.cwiseAbs().maxCoeff()))
    throw Error(Errc::InvalidArgument, "generator is not Hermitian under the subsystem form");
  const MatXc U = (cd(0, -dlambda) * H).exp();
  return apply_local(s, which, U);
}

UpdateResult update_on_outcome(const MultiState& s, std::size_t which, const MatXc& projector) {
  const MultiState v = apply_local(s, which, projector);
  UpdateResult r;
  const double n = norm2(s);
  r.probability = std::max(0.0, inner_product(s, v).real() / n);
  r.defined = r.probability > kZeroBranch;
  r.state = v;
  if (r.defined)
    r.state.c /= std::sqrt(norm2(v));
  else
    r.state.c.setZero();
  return r;
}

VecXc orthonormal_coefficients(const MultiState& s) {
  VecXc c = s.c;
  std::vector<Subsystem> meta = s.meta;
  for (std::size_t i = 0; i < meta.size(); ++i) {
    const MatXc M = orthonormal_map(meta[i]);
    c = apply_slot(meta, c, i, M);
    if (meta[i].species == Species::Photon) meta[i].species = Species::Fermion;  // now 2-dim
  }
  return c;
}

double entanglement_entropy(const MultiState& s) {
  if (s.parties() != 2) throw Error(Errc::InvalidArgument, "entropy needs a bipartite state");
  const VecXc c = orthonormal_coefficients(s);
  const Eigen::Index d2 = 2;
  const MatXc M = Eigen::Map<const Eigen::Matrix<cd, -1, -1, Eigen::RowMajor>>(c.data(), c.size() / d2, d2);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<MatXc>(M).singularValues();
  const double tot = sv.squaredNorm();
  double S = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double p = sv[i] * sv[i] / tot;
    if (p > 1e-300) S -= p * std::log2(p);
  }
  return S;
}

MultiState symmetrise(const MultiState& s) { return exchange(s, +1.0); }
MultiState antisymmetrise(const MultiState& s) { return exchange(s, -1.0); }

// ─── Teleportation ─────────────────────────────────────────────────────────

BasisPair basis_from_rest_frame(const Vec4& x, const Vec4& u, const Mat2c& rest_unitary) {
  if ((rest_unitary.adjoint() * rest_unitary - Mat2c::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(Errc::InvalidArgument, "rest-frame basis must be unitary");
  const Mat2c L = standard_boost_spinhalf(u);
  BasisPair b;
  b.phi = {x, u, L * rest_unitary.col(0)};
  b.psi = {x, u, L * rest_unitary.col(1)};
  return b;
}

namespace {

void check_pair(const BasisPair& b) {
  const double e = std::abs(inner_product(b.phi, b.psi)) + std::abs(norm2(b.phi) - 1.0) +
                   std::abs(norm2(b.psi) - 1.0);
  if (e > 1e-9) throw Error(Errc::InvalidArgument, "basis pair is not I_u-orthonormal");
}

VecXc kron2(const Vec2c& a, const Vec2c& b) { return kron(VecXc(a), VecXc(b)); }

// Bell vector on slots 1-2 in component space.
VecXc bell_vector(const TeleportationSession& s, BellOutcome k) {
  const Vec2c &p1 = s.basis[0].phi.psi, &q1 = s.basis[0].psi.psi;
  const Vec2c &p2 = s.basis[1].phi.psi, &q2 = s.basis[1].psi.psi;
  const double r = 1 / std::sqrt(2.0);
  switch (k) {
    case BellOutcome::PhiPlus: return r * (kron2(p1, p2) + kron2(q1, q2));
    case BellOutcome::PhiMinus: return r * (kron2(p1, p2) - kron2(q1, q2));
    case BellOutcome::PsiPlus: return r * (kron2(p1, q2) + kron2(q1, p2));
    case BellOutcome::PsiMinus: return r * (kron2(p1, q2) - kron2(q1, p2));
  }
  return {};
}

Mat2c correction(BellOutcome k) {
  switch (k) {
    case BellOutcome::PhiPlus: return Mat2c::Identity();
    case BellOutcome::PhiMinus: return sigma()[3];
    case BellOutcome::PsiPlus: return sigma()[1];
    case BellOutcome::PsiMinus: return cd(0, 1) * sigma()[2];
  }
  return {};
}

}  // namespace

TeleportationSession make_session(const std::array<BasisPair, 3>& basis, cd alpha, cd beta) {
  for (const auto& b : basis) check_pair(b);
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw Error(Errc::InvalidArgument, "|alpha|^2 + |beta|^2 must be 1");
  TeleportationSession s;
  s.basis = basis;
  s.alpha = alpha;
  s.beta = beta;
  for (const auto& b : basis) s.state.meta.push_back({b.phi.x, b.phi.u, Species::Fermion});
  const VecXc in = alpha * basis[0].phi.psi + beta * basis[0].psi.psi;
  const VecXc pair = kron2(basis[1].phi.psi, basis[2].phi.psi) + kron2(basis[1].psi.psi, basis[2].psi.psi);
  s.state.c = kron(in, pair) / std::sqrt(2.0);
  return s;
}

void transport_particle(TeleportationSession& s, std::size_t i, const TransportOperator& op,
                        bool carry_basis) {
  s.state = evolve_local(s.state, i, op);
  auto& b = s.basis.at(i);
  if (carry_basis) {
    b.phi.psi = op.T * b.phi.psi;
    b.psi.psi = op.T * b.psi.psi;
    b.phi.u = b.psi.u = op.u_end;
  } else {
    // Keeps the old rest-frame components, ignoring the transport rotation.
    Mat2c rest;
    rest.col(0) = weyl_to_wigner(b.phi);
    rest.col(1) = weyl_to_wigner(b.psi);
    b = basis_from_rest_frame(b.phi.x, op.u_end, rest);
  }
}

const char* bell_name(BellOutcome b) {
  switch (b) {
    case BellOutcome::PhiPlus: return "Phi+";
    case BellOutcome::PhiMinus: return "Phi-";
    case BellOutcome::PsiPlus: return "Psi+";
    case BellOutcome::PsiMinus: return "Psi-";
  }
  return "?";
}

void check_canonical(const TeleportationSession& s, double tol) {
  if (s.state.parties() != 3) throw Error(Errc::NonCanonicalEntanglement, "need three particles");
  const VecXc c = orthonormal_coefficients(s.state);
  const Eigen::Matrix<cd, -1, -1, Eigen::RowMajor> M =
      Eigen::Map<const Eigen::Matrix<cd, -1, -1, Eigen::RowMajor>>(c.data(), 2, 4);
  Eigen::JacobiSVD<MatXc> outer(M, Eigen::ComputeThinV);
  const auto sv1 = outer.singularValues();
  if (sv1[1] > tol * sv1[0])
    throw Error(Errc::NonCanonicalEntanglement, "particle 1 is entangled with the pair");
  const VecXc pair = outer.matrixV().col(0);
  const Eigen::Matrix<cd, -1, -1, Eigen::RowMajor> P =
      Eigen::Map<const Eigen::Matrix<cd, -1, -1, Eigen::RowMajor>>(pair.data(), 2, 2);
  const auto sv = Eigen::JacobiSVD<MatXc>(P).singularValues();
  if (std::abs(sv[0] - sv[1]) > tol)
    throw Error(Errc::NonCanonicalEntanglement, "shared pair is not maximally entangled");
}

TeleportBranch teleport_branch(const TeleportationSession& s, BellOutcome outcome) {
  check_canonical(s);
  const auto& meta = s.state.meta;
  for (std::size_t i = 0; i < 3; ++i)
    if (!same_velocity(meta[i].u, s.basis[i].phi.u))
      throw Error(Errc::MomentumMismatch, "basis and state velocities differ");
  // chi = <Bell|_{12} Upsilon under I_u1 (x) I_u2.
  const VecXc bell = bell_vector(s, outcome);
  const MultiState b12{{meta[0], meta[1]}, bell};
  VecXc g = bell;
  for (std::size_t i = 0; i < 2; ++i) g = apply_slot(b12.meta, g, i, local_form(meta[i]));
  const Eigen::Matrix<cd, -1, -1, Eigen::RowMajor> U =
      Eigen::Map<const Eigen::Matrix<cd, -1, -1, Eigen::RowMajor>>(s.state.c.data(), 4, 2);
  const Vec2c chi = (g.adjoint() * U).transpose();

  TeleportBranch r;
  r.outcome = outcome;
  r.probability = inner_product(meta[2].u, chi, chi).real();
  Vec2c d(inner_product(meta[2].u, s.basis[2].phi.psi, chi),
          inner_product(meta[2].u, s.basis[2].psi.psi, chi));
  d = correction(outcome) * d;
  if (r.probability > kZeroBranch) {
    r.bob_state = d / d.norm();
    r.fidelity = std::norm(Vec2c(s.alpha, s.beta).dot(r.bob_state));
  }
  return r;
}

std::array<TeleportBranch, 4> teleport_all(const TeleportationSession& s) {
  return {teleport_branch(s, BellOutcome::PhiPlus), teleport_branch(s, BellOutcome::PhiMinus),
          teleport_branch(s, BellOutcome::PsiPlus), teleport_branch(s, BellOutcome::PsiMinus)};
}

TeleportBranch teleport(const TeleportationSession& s, std::mt19937_64& rng) {
  const auto all = teleport_all(s);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double x = U(rng), acc = 0;
  for (const auto& b : all) {
    acc += b.probability;
    if (x < acc) return b;
  }
  return all[3];
}

}  // namespace rqi
