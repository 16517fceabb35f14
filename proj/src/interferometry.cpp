#include "rqi/interferometry.hpp"

#include <cmath>

namespace rqi {

namespace {

double arg_checked(cd ip, double scale) {
  if (std::abs(ip) <= 1e-12 * scale) throw Error(Errc::OrthogonalStates, "overlap vanishes");
  return std::arg(ip);
}

Vec4 potential_at(const InterferometerArm& arm, std::size_t i) {
  return arm.A.empty() ? Vec4::Zero() : arm.A[i];
}

}  // namespace

InterferometerArm fermion_arm(const Trajectory& traj, const MetricField& metric, double mass,
                              const EMField& em) {
  InterferometerArm arm;
  arm.trajectory = traj;
  arm.k.reserve(traj.size());
  for (const auto& s : traj.samples) {
    arm.k.push_back(mass * (metric.eval(s.x) * s.u));
    if (em.A) arm.A.push_back(em.A(s.x));
  }
  return arm;
}

double internal_phase(const InterferometerArm& arm, double charge) {
  if (arm.photon) return 0.0;
  const auto& smp = arm.trajectory.samples;
  if (arm.k.size() != smp.size() || smp.empty())
    throw Error(Errc::MissingWavevector, "arm has no wavevector on every sample");
  if (!arm.A.empty() && arm.A.size() != smp.size())
    throw Error(Errc::InvalidArgument, "potential must cover every sample");
  std::vector<double> ts(smp.size()), ys(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) {
    ts[i] = smp[i].lambda;
    ys[i] = (arm.k[i] + charge * potential_at(arm, i)).dot(smp[i].u);
  }
  return integrate_cubic(ts, ys);
}

double displacement_phase(const Vec4& k1, const Vec4& k2, const Vec4& x1, const Vec4& x2,
                          const Vec4& A, double charge, double tol) {
  if ((k1 - k2).cwiseAbs().maxCoeff() > tol * std::max(1.0, k1.cwiseAbs().maxCoeff()))
    throw Error(Errc::WavevectorMismatch, "wavevectors differ at recombination");
  return (k1 + charge * A).dot(x1 - x2);
}

double transport_phase(const WeylQubit& s1, const WeylQubit& s2) {
  return arg_checked(inner_product(s1, s2), std::sqrt(norm2(s1) * norm2(s2)));
}

double transport_phase(const PolarisationQubit& s1, const PolarisationQubit& s2) {
  const double n = std::sqrt(std::abs(polarisation_inner_product(s1, s1)) *
                             std::abs(polarisation_inner_product(s2, s2)));
  return arg_checked(polarisation_inner_product(s1, s2), n);
}

PhaseResult phase_difference(const InterferometerArm& arm1, const InterferometerArm& arm2,
                             double charge, double transport) {
  if (arm1.k.empty() || arm2.k.empty())
    throw Error(Errc::MissingWavevector, "arm has no wavevector");
  PhaseResult r;
  r.internal_1 = internal_phase(arm1, charge);
  r.internal_2 = internal_phase(arm2, charge);
  const std::size_t n1 = arm1.trajectory.size() - 1;
  const Vec4 A = arm1.photon ? Vec4::Zero() : potential_at(arm1, n1);
  r.displacement = displacement_phase(arm1.k.back(), arm2.k.back(), arm1.trajectory.back().x,
                                      arm2.trajectory.back().x, A, arm1.photon ? 0.0 : charge);
  r.transport = transport;
  r.total = (r.internal_2 - r.internal_1) + r.displacement + r.transport;
  return r;
}

WeylQubit recombine(cd a, const WeylQubit& s1, cd b, const WeylQubit& s2, double delta_theta) {
  inner_product(s1, s2);  // momentum check
  WeylQubit out = s1;
  out.psi = a * s1.psi + b * std::polar(1.0, delta_theta) * s2.psi;
  return out;
}

PolarisationQubit recombine(cd a, const PolarisationQubit& s1, cd b,
                            const PolarisationQubit& s2, double delta_theta) {
  polarisation_inner_product(s1, s2);
  PolarisationQubit out = s1;
  out.psi = a * s1.psi + b * std::polar(1.0, delta_theta) * s2.psi;
  return out;
}

}  // namespace rqi
