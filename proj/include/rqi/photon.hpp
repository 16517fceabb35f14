// Photon polarisation 4-vectors: gauge handling, Jones vectors and transport.
#pragma once

#include "rqi/geometry.hpp"
#include "rqi/ordered_exp.hpp"
#include "rqi/trajectories.hpp"

namespace rqi {

struct PolarisationQubit {
  Vec4 x = Vec4::Zero();
  Vec4 u = Vec4(1, 0, 0, 1);  // null frame velocity
  Vec4c psi = Vec4c(0, 1, 0, 0);
};

// Spatial rotation taking the photon direction to +z (Rodrigues form about u x z).
Mat4 adaption_rotation(const Vec4& u);

// Rows 1 and 2 of the adaption rotation: f^A_I. The same numbers give f_A^I.
Eigen::Matrix<double, 2, 4> diad(const Vec4& u);

Vec2c extract_jones(const PolarisationQubit& q);
// psi^I = f_A^I J^A, gauge part zero.
Vec4c jones_to_vector(const Vec4& u, const Vec2c& jones);

// Null partner w with u.w = 1 and no spatial part along the diad.
Vec4 null_partner(const Vec4& u);
// Remove the component that breaks u.psi = 0, along the null partner.
Vec4c refix_gauge(const Vec4& u, const Vec4c& psi);

struct PhotonTransportResult {
  PolarisationQubit qubit;
  Mat4 op = Mat4::Identity();  // frame-component propagator
};

PhotonTransportResult parallel_transport_polarisation(const PolarisationQubit& q,
                                                      const Trajectory& traj,
                                                      const Spacetime& st,
                                                      Scheme scheme = Scheme::Magnus4);

// Accumulated angle of the Jones rotation R_y(theta) = [[cos, sin], [-sin, cos]].
double wigner_angle(const Trajectory& traj, const Spacetime& st);
// Integrand u^m omega_{m12} for tetrads adapted to the ray.
double wigner_angle_adapted(const Trajectory& traj, const Spacetime& st);

Eigen::Matrix2d rotation_y(double theta);

cd polarisation_inner_product(const PolarisationQubit& a, const PolarisationQubit& b);

}  // namespace rqi
