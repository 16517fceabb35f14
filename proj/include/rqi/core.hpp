// Shared types, index conventions and error kinds.
//
// Conventions: c = hbar = 1, signature (+,-,-,-), eps_{0123} = +1.
// Frame indices I, J run 0..3 and are moved with eta.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace rqi {

using cd = std::complex<double>;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;

inline const Mat4& eta() {
  static const Mat4 m = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
  return m;
}

inline Vec4 lower(const Vec4& v) { return eta() * v; }
inline double dot(const Vec4& a, const Vec4& b) { return a.dot(eta() * b); }

enum class Errc {
  SingularMetric,
  NonOrthonormalTetrad,
  ImproperTransform,
  StepTooLarge,
  NotNull,
  NotTimelike,
  NullTrajectory,
  NonOrthogonalAcceleration,
  VelocityMismatch,
  MomentumMismatch,
  AntipodalSingularity,
  MissingWavevector,
  WavevectorMismatch,
  OrthogonalStates,
  ImaginaryVelocity,
  NegativeRadicand,
  DegenerateConfiguration,
  NotOrthogonal,
  InvalidFrame,
  SubsystemOutOfRange,
  ZeroProbabilityBranch,
  NonCanonicalEntanglement,
  NotDensityMatrix,
  DimensionMismatch,
  NotInvariant,
  NonMLProjectors,
  UnsupportedStateKind,
  InvalidArgument,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Default tolerances for invariant checks.
inline constexpr double kTol = 1e-9;

}  // namespace rqi
