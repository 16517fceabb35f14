// Covariant spin and polarisation measurements.
#pragma once

#include "rqi/fermion.hpp"
#include "rqi/photon.hpp"

namespace rqi {

struct SpinObservable {
  Vec4 N = Vec4(0, 0, 0, 1);
  Vec4 u = Vec4(1, 0, 0, 0);
  Mat2c op = Mat2c::Identity();  // -2i u_I N_J L^{IJ} + (u.N) 1
};

struct SternGerlachConfig {
  Vec4 m = Vec4(0, 0, 0, 1);  // apparatus orientation, m.m = -1
  Vec4 v = Vec4(1, 0, 0, 0);  // apparatus velocity
  Vec4 u = Vec4(1, 0, 0, 0);  // qubit velocity
};

// n = B / sqrt(-B.B), B^I = m^I (v.u) - v^I (m.u)
Vec4 stern_gerlach_axis(const SternGerlachConfig& cfg);

// General N; the identity term vanishes when N.u = 0.
SpinObservable make_observable(const Vec4& N, const Vec4& u);
// Unit spin observable along n with n.u = 0.
SpinObservable make_spin_observable(const Vec4& n, const Vec4& u);

// I_u op is Hermitian.
bool is_iu_hermitian(const Mat2c& op, const Vec4& u, double tol = 1e-12);

struct SpinEigensystem {
  Eigen::Vector2d values;  // ascending
  Mat2c vectors;           // columns, I_u-orthonormal
};
// Solved in the rest frame and boosted back.
SpinEigensystem spin_eigensystem(const SpinObservable& obs);

// P+- = (1 +- op) / 2 for a unit observable.
std::pair<Mat2c, Mat2c> spin_projectors(const SpinObservable& obs);

// psibar N_I sigmabar^I psi
double expectation(const WeylQubit& q, const SpinObservable& obs);

struct SpinOutcome {
  double p_plus = 0;
  double p_minus = 0;
  WeylQubit post_plus;
  WeylQubit post_minus;
  // False when the branch has zero probability; its post state is then zero.
  bool plus_defined = false;
  bool minus_defined = false;
};

SpinOutcome measure_spin(const WeylQubit& q, const SpinObservable& obs);
SpinOutcome measure_spin(const WeylQubit& q, const SternGerlachConfig& cfg);

struct PolariserVector {
  Vec4c P = Vec4c(0, 1, 0, 0);
  Vec4 u = Vec4(1, 0, 0, 1);
};

// Polariser transmitting the given Jones vector in the adapted diad of u.
PolariserVector make_polariser(const Vec4& u, const Vec2c& jones);
void validate_polariser(const PolariserVector& pol, double tol = 1e-9);

// |Pbar_I psi^I|^2
double polariser_probability(const PolarisationQubit& q, const PolariserVector& pol);

struct DiadFrame {
  Vec4 u = Vec4(1, 0, 0, 1);
  Eigen::Matrix<double, 2, 4> f;     // rows f_A^I
  Eigen::Matrix<double, 2, 4> dual;  // rows f^A_I = -eta_IJ f_A^J
};

// Checks f_A.u = 0 and f_A.f_B = -delta_AB.
DiadFrame make_diad_frame(const Vec4& u, const Eigen::Matrix<double, 2, 4>& f,
                          double tol = 1e-10);
DiadFrame adapted_diad_frame(const Vec4& u);

// o^I_J = a f1 f^1 + beta f1 f^2 + conj(beta) f2 f^1 + b f2 f^2
Mat4c make_photon_observable(double a, double b, cd beta, const DiadFrame& frame);
// eta o Hermitian and o u proportional to u.
bool is_photon_hermitian(const Mat4c& op, const Vec4& u, double tol = 1e-12);

}  // namespace rqi
