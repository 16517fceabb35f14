// Timelike and null worldlines sampled on a fixed parameter grid.
#pragma once

#include "rqi/geometry.hpp"

#include <iosfwd>
#include <vector>

namespace rqi {

struct Sample {
  double lambda = 0;
  Vec4 x = Vec4::Zero();   // coordinates x^m
  Vec4 u = Vec4::Zero();   // dx^m/dlambda
  Vec4 uI = Vec4::Zero();  // e^I_m u^m
  Vec4 aI = Vec4::Zero();  // proper acceleration, frame components
};

enum class TrajectoryKind { Timelike, Null };

struct Trajectory {
  std::vector<Sample> samples;
  TrajectoryKind kind = TrajectoryKind::Timelike;

  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
  std::size_t size() const { return samples.size(); }
  // Sub-trajectory over samples [first, last].
  Trajectory slice(std::size_t first, std::size_t last) const;
};

// Field strength in frame indices, F(I, J) = F_{IJ}; optional potential A_m.
struct EMField {
  std::function<Mat4(const Vec4&)> F;
  std::function<Vec4(const Vec4&)> A;

  Mat4 frame(const Vec4& x) const { return F ? F(x) : Mat4::Zero(); }
};

EMField no_field();
// Uniform frame-component field with electric part E and magnetic part B.
EMField uniform_field(const Eigen::Vector3d& E, const Eigen::Vector3d& B);

struct IntegrationOptions {
  bool renormalise = false;
  double drift_tolerance = 1e-6;
};

// RK4 in proper time for m a^m = e F^m_n u^n; u0 holds coordinate components.
Trajectory integrate_lorentz_force(const Spacetime& st, const EMField& field, double mass,
                                   double charge, const Vec4& x0, const Vec4& u0,
                                   double span, double step, IntegrationOptions opt = {});

// Affine RK4 for a null geodesic; k0 is rescaled so that e^0_m k^m = 1 at x0.
Trajectory integrate_null_geodesic(const Spacetime& st, const Vec4& x0, const Vec4& k0,
                                   double span, double step, IntegrationOptions opt = {});

// a^I = e^I_m (du^m/dtau + Gamma^m_ab u^a u^b) by differencing stored samples.
Vec4 proper_acceleration(const Spacetime& st, const Trajectory& traj, std::size_t index);

// Largest |u.u - 1| (timelike) or |u.u| (null) over samples, in frame components.
double normalisation_drift(const Trajectory& traj);

// Fill uI from u using the tetrad at each sample.
void attach_frame_velocity(const Spacetime& st, Trajectory& traj);
// Re-expresses uI and aI in another tetrad of the same metric.
void change_tetrad(Trajectory& traj, const TetradField& from, const TetradField& to);

// ─── analytic worldlines ───────────────────────────────────────────────────

// Flat circular orbit of radius R at speed beta in the xy-plane, proper-time samples.
Trajectory circular_orbit_flat(double beta, double radius, double revolutions, int steps);
// Static observer at height z in Rindler coordinates with the diagonal tetrad.
Trajectory rindler_hover(double g, double z, double duration, int steps);
// Circular geodesic at radius r in the Schwarzschild equatorial plane, diagonal tetrad.
Trajectory schwarzschild_circular(double M, double r, double duration, int steps);

// CSV with columns lambda, x0..x3, u0..u3, uI0..uI3, aI0..aI3 at 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_csv(std::istream& is, TrajectoryKind kind);

}  // namespace rqi
