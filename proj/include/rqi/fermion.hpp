// Weyl-spinor qubits: inner product, Fermi-Walker transport and the rest-frame picture.
//
// Index conventions: sigma^I = (1, sigma^i), sigmabar^I = (1, -sigma^i),
// L^{IJ} = (i/4)(sigma^I sigmabar^J - sigma^J sigmabar^I), which gives
// L^{0j} = -(i/2) sigma^j and L^{ij} = (1/2) eps_{ijk} sigma^k.
#pragma once

#include "rqi/geometry.hpp"
#include "rqi/ordered_exp.hpp"
#include "rqi/trajectories.hpp"

namespace rqi {

const std::array<Mat2c, 4>& sigma();
const std::array<Mat2c, 4>& sigma_bar();
// generators()[I][J] = L^{IJ}
const std::array<std::array<Mat2c, 4>, 4>& generators();

// sum_{IJ} X(I, J) L^{IJ} for X with lowered indices.
Mat2c contract_generators(const Mat4& X_lower);

struct WeylQubit {
  Vec4 x = Vec4::Zero();
  Vec4 u = Vec4(1, 0, 0, 0);  // frame components u^I
  Vec2c psi = Vec2c(1, 0);
};

// I_u = u_I sigmabar^I = u^0 1 + u^i sigma^i
Mat2c inner_product_form(const Vec4& u);
cd inner_product(const Vec4& u, const Vec2c& a, const Vec2c& b);
cd inner_product(const WeylQubit& a, const WeylQubit& b);
double norm2(const WeylQubit& q);

struct TransportOperator {
  Mat2c T = Mat2c::Identity();
  Vec4 u_start = Vec4(1, 0, 0, 0);
  Vec4 u_end = Vec4(1, 0, 0, 0);
};

// Generator G with dpsi/dtau = G psi:
// i (1/2 u^m omega_{mIJ} + u_I a_J - (e/2m) B_{IJ}) L^{IJ}.
// Omega_u(I, J) = u^m omega_m^I_J.
Mat2c fermi_walker_generator(const Vec4& u, const Mat4& Omega_u, const Vec4& a,
                             const Mat4& B_rest, double charge_to_mass);
// Vector-representation counterpart K^I_J of the same Lorentz generator; du/dtau = K u.
Mat4 fermi_walker_vector_generator(const Vec4& u, const Mat4& Omega_u, const Vec4& a,
                                   const Mat4& B_rest, double charge_to_mass);

// B_{IJ} = h_I^K h_J^L F_{KL} with h = delta - u (x) u.
Mat4 rest_frame_magnetic(const Vec4& u, const Mat4& F_lower);

// One exponential step with the supplied (midpoint) data. The velocity is advanced by
// the same Lorentz generator; the point is left to the caller.
WeylQubit fermi_walker_step(const WeylQubit& q, const Vec4& u_coord, const Connection& omega,
                            const Vec4& a, const Mat4& B_rest, double charge_to_mass,
                            double dtau);

struct TransportOptions {
  Scheme scheme = Scheme::Magnus4;
};

struct TransportResult {
  WeylQubit qubit;
  TransportOperator op;
};

TransportResult transport(const WeylQubit& q, const Trajectory& traj, const Spacetime& st,
                          const EMField& em, double charge, double mass,
                          TransportOptions opt = {});

// L(u) = ((1 + u^0) 1 - u^i sigma^i) / sqrt(2 (1 + u^0)) = I_u^{-1/2}
Mat2c standard_boost_spinhalf(const Vec4& u);
// Standard boost taking (1,0,0,0) to u.
Mat4 spin1_boost(const Vec4& u);

Vec2c weyl_to_wigner(const WeylQubit& q);
WeylQubit wigner_to_weyl(const Vec4& x, const Vec4& u, const Vec2c& psi_rest);

// Rest-frame generator i c_{ij} L^{ij} from u^I, du^I/dtau and Omega_u = u^m omega_m.
Mat2c wigner_generator(const Vec4& u, const Vec4& du, const Mat4& Omega_u);
Mat2c wigner_transport_operator(const Trajectory& traj, const Spacetime& st,
                                TransportOptions opt = {});

// A in SL(2,C) with A X(v) A^dagger = X(Lambda v), X(v) = v^0 + v^i sigma^i,
// sign fixed by Re tr A >= 0. Weyl spinors transform with A^{-dagger}.
Mat2c spin_half_lift(const Mat4& Lambda);
Mat2c weyl_action(const Mat4& Lambda);

// W = L^{-1}(Lambda p) Lambda_{1/2} L(p)
Mat2c wigner_rotation(const Mat4& Lambda, const Vec4& p);

// b^I = (psi^dag psi, psi^dag sigma^i psi)
Vec4 bloch_vector(const WeylQubit& q);

// Rotation angle of an SU(2) element, in [0, 2 pi], ignoring the overall sign.
double su2_angle(const Mat2c& U);

}  // namespace rqi
