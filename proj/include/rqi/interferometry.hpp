// Mach-Zehnder phases: internal, displacement and transport contributions.
#pragma once

#include "rqi/fermion.hpp"
#include "rqi/photon.hpp"

#include <variant>

namespace rqi {

struct InterferometerArm {
  Trajectory trajectory;
  std::vector<Vec4> k;  // wavevector k_m per sample, lowered coordinate components
  std::vector<Vec4> A;  // potential A_m per sample; empty means zero
  bool photon = false;
};

// Arm with k_m = mass * g_mn u^n along a timelike trajectory parametrised by proper time.
InterferometerArm fermion_arm(const Trajectory& traj, const MetricField& metric, double mass,
                              const EMField& em = {});

struct PhaseResult {
  double internal_1 = 0;
  double internal_2 = 0;
  double displacement = 0;
  double transport = 0;
  double total = 0;
};

// Integral of (k_m + e A_m) dx^m along the arm; zero for photons.
double internal_phase(const InterferometerArm& arm, double charge);

// (k_m + e A_m)(x1 - x2)^m; k1 and k2 must agree.
double displacement_phase(const Vec4& k1, const Vec4& k2, const Vec4& x1, const Vec4& x2,
                          const Vec4& A, double charge, double tol = 1e-9);

// arg <s1|s2>
double transport_phase(const WeylQubit& s1, const WeylQubit& s2);
double transport_phase(const PolarisationQubit& s1, const PolarisationQubit& s2);

// Phase difference at the ends of the two arms; transport term from the supplied states.
PhaseResult phase_difference(const InterferometerArm& arm1, const InterferometerArm& arm2,
                             double charge, double transport = 0.0);

// a psi1 + b e^{i dtheta} psi2
WeylQubit recombine(cd a, const WeylQubit& s1, cd b, const WeylQubit& s2, double delta_theta);
PolarisationQubit recombine(cd a, const PolarisationQubit& s1, cd b,
                            const PolarisationQubit& s2, double delta_theta);

}  // namespace rqi
