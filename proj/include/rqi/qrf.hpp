// Quantum reference frames for U(1) and SU(2): representations, twirls, relational
// encoding, the relational instrument and the decoherence of a change of frame.
#pragma once

#include "rqi/core.hpp"

#include <string>
#include <vector>

namespace rqi::qrf {

enum class Group { U1, SU2 };

// U(1): phase theta in [0, 2pi). SU(2): the spin-1/2 matrix.
struct GroupElement {
  Group group = Group::U1;
  double theta = 0;
  Mat2c su2 = Mat2c::Identity();

  static GroupElement u1(double theta);
  // exp(i omega n.J), n = (sin t cos p, sin t sin p, cos t)
  static GroupElement polar(double omega, double theta, double phi);
  // exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)
  static GroupElement euler(double alpha, double beta, double gamma);
  static GroupElement identity(Group g);

  GroupElement operator*(const GroupElement& o) const;
  GroupElement inverse() const;
};

// Euler angles of an SU(2) element, alpha in [0, 4pi), beta in [0, pi], gamma in [0, 2pi).
std::array<double, 3> euler_angles(const GroupElement& g);

// Spin-j matrix of an SU(2) element, basis m = j, j-1, ..., -j.
MatXc wigner_d(double j, const Mat2c& u);
// Jx, Jy, Jz on spin j in the same basis.
std::array<MatXc, 3> spin_matrices(double j);

// One irreducible label with its multiplicity. U(1): label is the charge.
// SU(2): label is the spin j.
struct Block {
  double label = 0;
  int multiplicity = 1;
};

// Tensor product of factors; each factor is a direct sum of blocks.
// Basis inside an SU(2) block is irrep (major) x multiplicity.
struct RepSpace {
  Group group = Group::U1;
  std::vector<std::vector<Block>> factors;

  int dim() const;
  MatXc matrix(const GroupElement& g) const;
  // Total charge of every basis state (U(1) only).
  Eigen::VectorXd charges() const;
};

RepSpace u1_fock(int s);                            // charges 0..s
RepSpace u1_qubit();                                // exp(i theta (1 + sigma_z) / 2)
RepSpace u1_charges(const std::vector<double>& q);  // one basis state per charge
RepSpace su2_irrep(double j);
RepSpace su2_regular(int s);  // integer j <= s, multiplicity 2j+1
RepSpace su2_qubit();
RepSpace tensor(const RepSpace& a, const RepSpace& b);

// (2s+1)(2s+3)(s+1)/3
int su2_regular_dim(int s);

// Weighted Haar grid; weights sum to 1.
struct Quadrature {
  std::vector<GroupElement> g;
  std::vector<double> w;
};

// Trapezoid on n equispaced phases.
Quadrature u1_quadrature(int n);
// alpha: 2n points on [0, 4pi); cos beta: n Gauss-Legendre nodes; gamma: n points.
Quadrature su2_euler_quadrature(int n);
// omega: 2n points on [0, 2pi) weighted by sin^2(omega/2); cos theta: n Gauss-Legendre
// nodes; phi: 2n points.
Quadrature su2_polar_quadrature(int n);
Quadrature default_quadrature(Group g, int n);

enum class FrameKind { U1Phase, U1Coherent, SU2Fiducial, SU2Coherent };

const char* frame_kind_name(FrameKind k);
Group frame_group(FrameKind k);
// Kinds whose orbit twirls to I/D and so give a resolution of the identity.
bool is_maximum_likelihood(FrameKind k);

// size: cutoff s (U1Phase, SU2Fiducial), amplitude t (U1Coherent), spin j (SU2Coherent).
// cutoff: Fock truncation for U1Coherent, chosen from tail_tol when negative.
struct FrameSpec {
  FrameKind kind = FrameKind::U1Phase;
  double size = 1;
  int cutoff = -1;
  double tail_tol = 1e-14;
};

struct FrameState {
  FrameSpec spec;
  GroupElement g;
  RepSpace rep;
  VecXc vec;
};

// Smallest K with the Poisson(t^2) tail beyond K below tol.
int coherent_cutoff(double amplitude, double tol);

FrameState make_frame(const FrameSpec& spec, const GroupElement& g);
// Normalisation D of the projector family paired with spec.
double projector_dim(const FrameSpec& spec);
// Projector family used to measure a frame of this kind: phase states for U(1)
// (cutoff of a coherent frame becomes the phase-state cutoff), fiducial states for
// fiducial frames and coherent states for SU(2) coherent frames.
FrameSpec projector_family(const FrameSpec& spec);

// Liouville matrix on column-stacked density matrices.
struct CPMap {
  int dim = 0;
  MatXc L;

  MatXc apply(const MatXc& rho) const;
  CPMap then(const CPMap& next) const;  // next after this
  MatXc choi() const;
  double trace_deviation() const;       // max |Tr out - Tr in| over matrix units
  double min_choi_eigenvalue() const;
};

CPMap identity_map(int dim);
CPMap unitary_map(const MatXc& U);
// sum_k w_k U_k . U_k^dagger
CPMap mixture_map(const std::vector<MatXc>& U, const std::vector<double>& w);

// Valid density matrix: Hermitian, unit trace, positive to tol.
void check_density_matrix(const MatXc& rho, double tol = 1e-9);

// Integral of U(g) rho U(g)^dagger. Exact charge-sector projection for U(1);
// Euler quadrature for SU(2).
MatXc g_twirl(const MatXc& rho, const RepSpace& rep, int quadrature_n = 16);
MatXc g_twirl(const MatXc& rho, const RepSpace& rep, const Quadrature& q);
// max |[U(g), sigma]| over the grid.
double invariance_residual(const MatXc& sigma, const RepSpace& rep, const Quadrature& q);

// G_{SR}(rho_S (x) |psi><psi|_R)
MatXc encode(const MatXc& rho_S, const RepSpace& rep_S, const FrameState& frame,
             int quadrature_n = 16);

struct Recovery {
  MatXc rho;
  double invariance_residual = 0;
  bool not_invariant = false;  // residual above tolerance
  std::string warning;
};

// D_s int dmu(g) [U_S(g^-1) (x) <g|] sigma [U_S(g^-1)^dagger (x) |g>]
Recovery recover(const MatXc& sigma_SR, const RepSpace& rep_S, const FrameSpec& frame,
                 const Quadrature& q, double tol = 1e-8);

// D_A D_B int dmu(g) Pi^{g,h} sigma Pi^{g,h}; sigma on S (x) A (x) B with S of dim_S.
MatXc relational_instrument(const MatXc& sigma, int dim_S, const FrameSpec& A,
                            const FrameSpec& B, const GroupElement& h, const Quadrature& q);
// Effect E_h on A (x) B.
MatXc relational_effect(const FrameSpec& A, const FrameSpec& B, const GroupElement& h,
                        const Quadrature& q);
// || int dmu(h) E_h - I || in spectral norm.
double povm_completeness_residual(const FrameSpec& A, const FrameSpec& B, const Quadrature& q_g,
                                  const Quadrature& q_h);

// G_{SA}(rho_S (x) |psi(a)><psi(a)|) (x) G_B(rho_B)
MatXc uncorrelated_initial_state(const MatXc& rho_S, const RepSpace& rep_S,
                                 const FrameState& frame_A, const MatXc& rho_B,
                                 const RepSpace& rep_B, const Quadrature& q);
// Tr_A[M^h(sigma_SAB)] by direct construction.
MatXc change_frame_brute_force(const MatXc& sigma_SAB, int dim_S, const FrameSpec& A,
                               const FrameSpec& B, const GroupElement& h, const Quadrature& q);
// E_{|h>_B}(F_A o U_S(a^-1)[rho_S]), normalised.
MatXc change_frame(const MatXc& rho_S, const RepSpace& rep_S, const FrameState& frame_A,
                   const FrameSpec& B, const GroupElement& h, const Quadrature& q);

// D_A int dmu(g) |<g|psi(e)>|^2 U_S(g^-1)
CPMap decoherence_map_A(const FrameSpec& A, const RepSpace& rep_S, const Quadrature& q);
// F_B o U(h^-1) o F_A o U(a^-1)
CPMap net_decoherence(const FrameSpec& A, const FrameSpec& B, const GroupElement& a,
                      const GroupElement& h, const RepSpace& rep_S, const Quadrature& q);

// D_s |<g|psi(e)>|^2 for the frame's projector family.
double frame_kernel(const FrameSpec& A, const GroupElement& g);

// |<s;g|s;h>|^2 with delta = h - g
double u1_overlap(int s, double delta);
// <s;g|t;0>_CS for phase states with cutoff K
cd u1_coherent_overlap(double t, double g, int cutoff);
// <s;e|s;g> for the SU(2) fiducial state, g of rotation angle omega
cd su2_fiducial_overlap(int s, double omega);
// <j;e|j;g>_CS
cd su2_coherent_overlap(double j, double alpha, double beta, double gamma);

// z-dephasing channel on a spin rep
CPMap z_dephasing(const RepSpace& rep_S, int n = 64);
// (2j+1) int sin(b) db/2 cos^{4j}(b/2) R_y(-b)
CPMap su2_cs_middle(double j, const RepSpace& rep_S, int quadrature_n = 64);
// D o middle o D
CPMap su2_cs_decoherence(double j, const RepSpace& rep_S, int quadrature_n = 64);
// || D o (middle - id) o D || in spectral norm of the Liouville matrix.
double su2_cs_dephasing_deviation(double j, const RepSpace& rep_S, int quadrature_n = 64);

// ─── Balanced homodyne detection ───────────────────────────────────────────
// Output ports c = (a - b)/sqrt2 and d = (a + b)/sqrt2 count j + m and j - m.

// Closed form for two coherent frames, otherwise the exact beamsplitter route.
double bhd_probability(double j, double m, const FrameState& A, const FrameState& B);
// Exact beamsplitter route for any pair of U(1) states.
double bhd_probability_beamsplitter(double j, double m, const FrameState& A, const FrameState& B);
// Probability of 2j photons in total for two phase eigenstates.
double bhd_phase_total(double j, int s_A, int s_B);

struct BhdEntry {
  double j = 0;
  double m = 0;
  double p = 0;
};
// All (j, m) with 2j up to the truncation; coherent frames truncate at Poisson tail tol.
std::vector<BhdEntry> bhd_distribution(const FrameState& A, const FrameState& B,
                                       double tail_tol = 1e-10);

}  // namespace rqi::qrf
