// Multipartite localised-qubit states and the teleportation protocol.
#pragma once

#include "rqi/fermion.hpp"
#include "rqi/photon.hpp"

#include <array>
#include <random>

namespace rqi {

enum class Species { Fermion, Photon };

struct Subsystem {
  Vec4 x = Vec4::Zero();
  Vec4 u = Vec4(1, 0, 0, 0);
  Species species = Species::Fermion;

  int dim() const { return species == Species::Fermion ? 2 : 4; }
};

// Components psi_{A1 A2 ...}; the first subsystem is the most significant index.
struct MultiState {
  std::vector<Subsystem> meta;
  VecXc c;

  std::size_t parties() const { return meta.size(); }
};

// Product of single-particle states.
MultiState product_state(const std::vector<WeylQubit>& qubits);
MultiState product_state(const std::vector<Subsystem>& meta, const std::vector<VecXc>& parts);

// I_u for fermions, -eta for photons.
MatXc local_form(const Subsystem& s);

cd inner_product(const MultiState& s, const MultiState& t);
double norm2(const MultiState& s);

// Applies op to one slot.
MultiState apply_local(const MultiState& s, std::size_t which, const MatXc& op);

// Transport operator carries the slot from op.u_start to op.u_end.
MultiState evolve_local(const MultiState& s, std::size_t which, const TransportOperator& op);
// exp(-i H dlambda) with H Hermitian under the slot's form.
MultiState evolve_local(const MultiState& s, std::size_t which, const MatXc& H, double dlambda);

struct UpdateResult {
  double probability = 0;
  MultiState state;
  bool defined = false;  // false for a zero-probability branch; state is then zero
};

UpdateResult update_on_outcome(const MultiState& s, std::size_t which, const MatXc& projector);

// Coefficients in per-slot orthonormal bases: L(u) columns for fermions, the adapted diad
// for photons. Photon slots then carry two components.
VecXc orthonormal_coefficients(const MultiState& s);
// Von Neumann entropy (bits) of the first subsystem of a bipartite state.
double entanglement_entropy(const MultiState& s);

// (psi +- swap psi), normalised; both slots must have the same species and velocity.
MultiState symmetrise(const MultiState& s);
MultiState antisymmetrise(const MultiState& s);

// ─── Teleportation ─────────────────────────────────────────────────────────

struct BasisPair {
  WeylQubit phi;
  WeylQubit psi;
};

// I_u-orthonormal pair built from a rest-frame unitary.
BasisPair basis_from_rest_frame(const Vec4& x, const Vec4& u, const Mat2c& rest_unitary);

struct TeleportationSession {
  std::array<BasisPair, 3> basis;
  cd alpha = 1;
  cd beta = 0;
  MultiState state;
};

// (alpha phi1 + beta psi1)(phi2 phi3 + psi2 psi3) / sqrt 2
TeleportationSession make_session(const std::array<BasisPair, 3>& basis, cd alpha, cd beta);

// Moves particle i: state and (optionally) its basis pair evolve with op.
void transport_particle(TeleportationSession& s, std::size_t i, const TransportOperator& op,
                        bool carry_basis = true);

enum class BellOutcome { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
const char* bell_name(BellOutcome b);

struct TeleportBranch {
  BellOutcome outcome = BellOutcome::PhiPlus;
  double probability = 0;
  Vec2c bob_state = Vec2c::Zero();  // after correction, in Bob's basis, normalised
  double fidelity = 0;              // |<(alpha, beta)|bob_state>|^2
};

// Schmidt coefficients of particles 2-3 equal within tol; throws NonCanonicalEntanglement.
void check_canonical(const TeleportationSession& s, double tol = 1e-10);

TeleportBranch teleport_branch(const TeleportationSession& s, BellOutcome outcome);
std::array<TeleportBranch, 4> teleport_all(const TeleportationSession& s);
// Samples the Bell outcome.
TeleportBranch teleport(const TeleportationSession& s, std::mt19937_64& rng);

}  // namespace rqi
