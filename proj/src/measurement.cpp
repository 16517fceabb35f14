#include "rqi/measurement.hpp"

#include <Eigen/Eigenvalues>

namespace rqi {

namespace {

constexpr double kZeroBranch = 1e-14;

void require_same_velocity(const Vec4& a, const Vec4& b) {
  if ((a - b).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw Error(Errc::MomentumMismatch, "state and observable carry different velocities");
}

void require_timelike(const Vec4& u) {
  if (std::abs(dot(u, u) - 1.0) > 1e-9 || u[0] <= 0)
    throw Error(Errc::NotTimelike, "velocity must be a future unit timelike vector");
}

}  // namespace

Vec4 stern_gerlach_axis(const SternGerlachConfig& cfg) {
  require_timelike(cfg.u);
  require_timelike(cfg.v);
  if (std::abs(dot(cfg.m, cfg.m) + 1.0) > 1e-9)
    throw Error(Errc::InvalidArgument, "orientation must satisfy m.m = -1");
  const Vec4 B = cfg.m * dot(cfg.v, cfg.u) - cfg.v * dot(cfg.m, cfg.u);
  const double BB = -dot(B, B);
  if (BB <= kTol) throw Error(Errc::DegenerateConfiguration, "rest-frame field vanishes");
  return B / std::sqrt(BB);
}

SpinObservable make_observable(const Vec4& N, const Vec4& u) {
  require_timelike(u);
  SpinObservable o;
  o.N = N;
  o.u = u;
  const Vec4 ul = lower(u), Nl = lower(N);
  o.op = cd(0, -2) * contract_generators(ul * Nl.transpose()) + dot(u, N) * Mat2c::Identity();
  return o;
}

SpinObservable make_spin_observable(const Vec4& n, const Vec4& u) {
  if (std::abs(dot(n, u)) > 1e-9) throw Error(Errc::NotOrthogonal, "n.u must vanish");
  return make_observable(n, u);
}

bool is_iu_hermitian(const Mat2c& op, const Vec4& u, double tol) {
  const Mat2c h = inner_product_form(u) * op;
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, h.cwiseAbs().maxCoeff());
}

SpinEigensystem spin_eigensystem(const SpinObservable& obs) {
  const Mat2c L = standard_boost_spinhalf(obs.u);
  const Mat2c rest = L.inverse() * obs.op * L;
  Eigen::SelfAdjointEigenSolver<Mat2c> es(0.5 * (rest + rest.adjoint()));
  return {es.eigenvalues(), L * es.eigenvectors()};
}

std::pair<Mat2c, Mat2c> spin_projectors(const SpinObservable& obs) {
  const Mat2c one = Mat2c::Identity();
  return {0.5 * (one + obs.op), 0.5 * (one - obs.op)};
}

double expectation(const WeylQubit& q, const SpinObservable& obs) {
  require_same_velocity(q.u, obs.u);
  const Vec4 Nl = lower(obs.N);
  Mat2c M = Mat2c::Zero();
  for (int I = 0; I < 4; ++I) M += Nl[I] * sigma_bar()[I];
  return q.psi.dot(M * q.psi).real();
}

SpinOutcome measure_spin(const WeylQubit& q, const SpinObservable& obs) {
  require_same_velocity(q.u, obs.u);
  if (std::abs(norm2(q) - 1.0) > 1e-9)
    throw Error(Errc::InvalidArgument, "state must be normalised");
  const auto [Pp, Pm] = spin_projectors(obs);
  SpinOutcome r;
  auto branch = [&](const Mat2c& P, double& p, WeylQubit& post, bool& defined) {
    const Vec2c v = P * q.psi;
    p = std::max(0.0, inner_product(q.u, q.psi, v).real());
    post = q;
    defined = p > kZeroBranch;
    post.psi = defined ? Vec2c(v / std::sqrt(p)) : Vec2c::Zero();
  };
  branch(Pp, r.p_plus, r.post_plus, r.plus_defined);
  branch(Pm, r.p_minus, r.post_minus, r.minus_defined);
  return r;
}

SpinOutcome measure_spin(const WeylQubit& q, const SternGerlachConfig& cfg) {
  require_same_velocity(q.u, cfg.u);
  return measure_spin(q, make_spin_observable(stern_gerlach_axis(cfg), cfg.u));
}

PolariserVector make_polariser(const Vec4& u, const Vec2c& jones) {
  return {jones_to_vector(u, jones.normalized()), u};
}

void validate_polariser(const PolariserVector& pol, double tol) {
  if (std::abs(lower(pol.u).cast<cd>().dot(pol.P)) > tol)
    throw Error(Errc::NotOrthogonal, "polariser must satisfy P.u = 0");
  const double n = -pol.P.dot(eta().cast<cd>() * pol.P).real();
  if (std::abs(n - 1.0) > tol) throw Error(Errc::InvalidArgument, "polariser must be unit");
}

double polariser_probability(const PolarisationQubit& q, const PolariserVector& pol) {
  PolarisationQubit p;
  p.x = q.x;
  p.u = pol.u;
  p.psi = pol.P;
  return std::norm(polarisation_inner_product(p, q));
}

DiadFrame make_diad_frame(const Vec4& u, const Eigen::Matrix<double, 2, 4>& f, double tol) {
  for (int A = 0; A < 2; ++A) {
    if (std::abs(dot(f.row(A).transpose(), u)) > tol)
      throw Error(Errc::InvalidFrame, "diad vector not orthogonal to u");
    for (int B = 0; B < 2; ++B)
      if (std::abs(dot(f.row(A).transpose(), f.row(B).transpose()) + (A == B ? 1.0 : 0.0)) > tol)
        throw Error(Errc::InvalidFrame, "diad vectors not orthonormal");
  }
  DiadFrame d;
  d.u = u;
  d.f = f;
  d.dual = -(f * eta());
  return d;
}

DiadFrame adapted_diad_frame(const Vec4& u) { return make_diad_frame(u, diad(u)); }

Mat4c make_photon_observable(double a, double b, cd beta, const DiadFrame& fr) {
  const Vec4c f1 = fr.f.row(0).transpose().cast<cd>(), f2 = fr.f.row(1).transpose().cast<cd>();
  const Vec4c d1 = fr.dual.row(0).transpose().cast<cd>(), d2 = fr.dual.row(1).transpose().cast<cd>();
  return a * f1 * d1.transpose() + beta * f1 * d2.transpose() +
         std::conj(beta) * f2 * d1.transpose() + b * f2 * d2.transpose();
}

bool is_photon_hermitian(const Mat4c& op, const Vec4& u, double tol) {
  const Mat4c low = eta().cast<cd>() * op;
  if ((low - low.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  // o u must be a multiple of u.
  const Vec4c ou = op * u.cast<cd>();
  const cd c = u.cast<cd>().dot(ou) / u.squaredNorm();
  return (ou - c * u.cast<cd>()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace rqi
