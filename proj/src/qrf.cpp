#include "rqi/qrf.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rqi::qrf {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

cd ipow(cd z, int n) {
  cd r = 1;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

double ipow(double x, int n) {
  double r = 1;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

int twice(double j) {
  const long t = std::lround(2 * j);
  if (std::abs(2 * j - static_cast<double>(t)) > 1e-9 || t < 0)
    throw Error(Errc::InvalidArgument, "spin must be a nonnegative half-integer");
  return static_cast<int>(t);
}

MatXc kron(const MatXc& a, const MatXc& b) {
  MatXc r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      r.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return r;
}

VecXc kron(const VecXc& a, const VecXc& b) {
  VecXc r(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) r.segment(i * b.size(), b.size()) = a(i) * b;
  return r;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Golub-Welsch.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Eigen::VectorXd x = es.eigenvalues();
  Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {x, w};
}

// Gauss-Legendre on [0, pi].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_angle(int n) {
  auto [x, w] = gauss_legendre(n);
  return {(x.array() + 1.0) * (kPi / 2), w * (kPi / 2)};
}

MatXc block_matrix(Group group, const std::vector<Block>& blocks, const GroupElement& g) {
  int d = 0;
  for (const auto& b : blocks)
    d += (group == Group::U1 ? 1 : twice(b.label) + 1) * b.multiplicity;
  MatXc r = MatXc::Zero(d, d);
  int off = 0;
  for (const auto& b : blocks) {
    if (group == Group::U1) {
      const cd ph = std::exp(cd(0, b.label * g.theta));
      for (int k = 0; k < b.multiplicity; ++k) r(off + k, off + k) = ph;
      off += b.multiplicity;
    } else {
      const MatXc D = wigner_d(b.label, g.su2);
      const int n = static_cast<int>(D.rows()) * b.multiplicity;
      r.block(off, off, n, n) = kron(D, MatXc::Identity(b.multiplicity, b.multiplicity));
      off += n;
    }
  }
  return r;
}

// Tr over the middle factor of a (dS, dA, dB) tensor product.
MatXc trace_middle(const MatXc& m, int dS, int dA, int dB) {
  MatXc r = MatXc::Zero(dS * dB, dS * dB);
  for (int s = 0; s < dS; ++s)
    for (int t = 0; t < dS; ++t)
      for (int a = 0; a < dA; ++a)
        r.block(s * dB, t * dB, dB, dB) +=
            m.block((s * dA + a) * dB, (t * dA + a) * dB, dB, dB);
  return r;
}

MatXc twirl_sum(const MatXc& rho, const RepSpace& rep, const Quadrature& q) {
  MatXc acc = MatXc::Zero(rho.rows(), rho.cols());
  for (std::size_t k = 0; k < q.g.size(); ++k) {
    const MatXc U = rep.matrix(q.g[k]);
    acc += q.w[k] * (U * rho * U.adjoint());
  }
  return acc;
}

MatXc twirl_exact_u1(const MatXc& rho, const RepSpace& rep) {
  const Eigen::VectorXd q = rep.charges();
  MatXc r = rho;
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index k = 0; k < r.cols(); ++k)
      if (std::abs(q(i) - q(k)) > 1e-9) r(i, k) = 0;
  return r;
}

// Exact for U(1), quadrature for SU(2); no density-matrix check.
MatXc twirl_auto(const MatXc& rho, const RepSpace& rep, const Quadrature& q) {
  if (rep.group == Group::U1) return twirl_exact_u1(rho, rep);
  return twirl_sum(rho, rep, q);
}

void check_group(Group a, Group b) {
  if (a != b) throw Error(Errc::InvalidArgument, "group mismatch");
}

}  // namespace

// ─── Group elements ────────────────────────────────────────────────────────

GroupElement GroupElement::u1(double theta) {
  GroupElement g;
  g.group = Group::U1;
  g.theta = wrap(theta, 2 * kPi);
  return g;
}

GroupElement GroupElement::polar(double omega, double theta, double phi) {
  const Eigen::Vector3d n(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                          std::cos(theta));
  const double c = std::cos(omega / 2), s = std::sin(omega / 2);
  GroupElement g;
  g.group = Group::SU2;
  g.su2 << cd(c, s * n.z()), cd(s * n.y(), s * n.x()), cd(-s * n.y(), s * n.x()),
      cd(c, -s * n.z());
  return g;
}

GroupElement GroupElement::euler(double alpha, double beta, double gamma) {
  const double c = std::cos(beta / 2), s = std::sin(beta / 2);
  const cd ep = std::exp(cd(0, -(alpha + gamma) / 2));
  const cd em = std::exp(cd(0, -(alpha - gamma) / 2));
  GroupElement g;
  g.group = Group::SU2;
  g.su2 << ep * c, -em * s, std::conj(em) * s, std::conj(ep) * c;
  return g;
}

GroupElement GroupElement::identity(Group grp) {
  GroupElement g;
  g.group = grp;
  return g;
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  check_group(group, o.group);
  if (group == Group::U1) return u1(theta + o.theta);
  GroupElement g;
  g.group = Group::SU2;
  g.su2 = su2 * o.su2;
  return g;
}

GroupElement GroupElement::inverse() const {
  if (group == Group::U1) return u1(-theta);
  GroupElement g;
  g.group = Group::SU2;
  g.su2 = su2.adjoint();
  return g;
}

std::array<double, 3> euler_angles(const GroupElement& g) {
  if (g.group != Group::SU2) throw Error(Errc::InvalidArgument, "euler_angles needs SU(2)");
  const cd u00 = g.su2(0, 0), u10 = g.su2(1, 0);
  const double beta = 2 * std::atan2(std::abs(u10), std::abs(u00));
  double alpha, gamma;
  if (std::abs(u10) < 1e-14) {
    alpha = -2 * std::arg(u00);
    gamma = 0;
  } else if (std::abs(u00) < 1e-14) {
    alpha = 2 * std::arg(u10);
    gamma = 0;
  } else {
    const double sum = -2 * std::arg(u00), diff = 2 * std::arg(u10);
    alpha = (sum + diff) / 2;
    gamma = (sum - diff) / 2;
  }
  // Shifting alpha and gamma together by 2pi leaves the matrix unchanged.
  const double k = std::floor(gamma / (2 * kPi));
  gamma -= 2 * kPi * k;
  alpha -= 2 * kPi * k;
  return {wrap(alpha, 4 * kPi), beta, gamma};
}

MatXc wigner_d(double j, const Mat2c& u) {
  const int tj = twice(j);
  const int n = tj + 1;
  const cd a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
  std::vector<double> lf(n + 1);
  for (int k = 0; k <= n; ++k) lf[k] = std::lgamma(k + 1.0);
  auto lbin = [&](int p, int k) { return lf[p] - lf[k] - lf[p - k]; };
  MatXc D = MatXc::Zero(n, n);
  // Column: e_m with p = j+m powers of x; row: e_m' with r = j+m'.
  for (int col = 0; col < n; ++col) {
    const int p = tj - col, q = col;
    for (int row = 0; row < n; ++row) {
      const int r = tj - row;
      cd sum = 0;
      for (int k = std::max(0, r - q); k <= std::min(p, r); ++k) {
        const int l = r - k;
        sum += std::exp(lbin(p, k) + lbin(q, l)) * ipow(a, k) * ipow(c, p - k) * ipow(b, l) *
               ipow(d, q - l);
      }
      D(row, col) = sum * std::exp(0.5 * (lf[r] + lf[tj - r] - lf[p] - lf[q]));
    }
  }
  return D;
}

std::array<MatXc, 3> spin_matrices(double j) {
  const int n = twice(j) + 1;
  MatXc Jz = MatXc::Zero(n, n), Jp = MatXc::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = j - i;
    Jz(i, i) = m;
    if (i > 0) Jp(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const MatXc Jm = Jp.adjoint();
  return {(Jp + Jm) / 2.0, (Jp - Jm) / cd(0, 2), Jz};
}

// ─── Representations ───────────────────────────────────────────────────────

int RepSpace::dim() const {
  int total = 1;
  for (const auto& f : factors) {
    int d = 0;
    for (const auto& b : f) d += (group == Group::U1 ? 1 : twice(b.label) + 1) * b.multiplicity;
    total *= d;
  }
  return total;
}

MatXc RepSpace::matrix(const GroupElement& g) const {
  check_group(group, g.group);
  MatXc r = MatXc::Identity(1, 1);
  for (const auto& f : factors) r = kron(r, block_matrix(group, f, g));
  return r;
}

Eigen::VectorXd RepSpace::charges() const {
  if (group != Group::U1) throw Error(Errc::InvalidArgument, "charges are defined for U(1)");
  Eigen::VectorXd q = Eigen::VectorXd::Zero(1);
  for (const auto& f : factors) {
    std::vector<double> c;
    for (const auto& b : f)
      for (int k = 0; k < b.multiplicity; ++k) c.push_back(b.label);
    Eigen::VectorXd next(q.size() * static_cast<Eigen::Index>(c.size()));
    for (Eigen::Index i = 0; i < q.size(); ++i)
      for (std::size_t k = 0; k < c.size(); ++k) next(i * c.size() + k) = q(i) + c[k];
    q = next;
  }
  return q;
}

RepSpace u1_fock(int s) {
  if (s < 0) throw Error(Errc::InvalidArgument, "cutoff must be nonnegative");
  std::vector<Block> f;
  for (int k = 0; k <= s; ++k) f.push_back({static_cast<double>(k), 1});
  return {Group::U1, {f}};
}

RepSpace u1_qubit() { return {Group::U1, {{{1, 1}, {0, 1}}}}; }

RepSpace u1_charges(const std::vector<double>& q) {
  std::vector<Block> f;
  for (double c : q) f.push_back({c, 1});
  return {Group::U1, {f}};
}

RepSpace su2_irrep(double j) {
  twice(j);
  return {Group::SU2, {{{j, 1}}}};
}

RepSpace su2_regular(int s) {
  if (s < 0) throw Error(Errc::InvalidArgument, "cutoff must be nonnegative");
  std::vector<Block> f;
  for (int j = 0; j <= s; ++j) f.push_back({static_cast<double>(j), 2 * j + 1});
  return {Group::SU2, {f}};
}

RepSpace su2_qubit() { return su2_irrep(0.5); }

RepSpace tensor(const RepSpace& a, const RepSpace& b) {
  check_group(a.group, b.group);
  RepSpace r = a;
  r.factors.insert(r.factors.end(), b.factors.begin(), b.factors.end());
  return r;
}

int su2_regular_dim(int s) { return (2 * s + 1) * (2 * s + 3) * (s + 1) / 3; }

// ─── Quadrature ────────────────────────────────────────────────────────────

Quadrature u1_quadrature(int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "quadrature size must be positive");
  Quadrature q;
  for (int k = 0; k < n; ++k) {
    q.g.push_back(GroupElement::u1(2 * kPi * k / n));
    q.w.push_back(1.0 / n);
  }
  return q;
}

Quadrature su2_euler_quadrature(int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "quadrature size must be positive");
  auto [x, wx] = gauss_legendre(n);
  Quadrature q;
  for (int ia = 0; ia < 2 * n; ++ia)
    for (int ib = 0; ib < n; ++ib)
      for (int ig = 0; ig < n; ++ig) {
        q.g.push_back(
            GroupElement::euler(4 * kPi * ia / (2 * n), std::acos(x(ib)), 2 * kPi * ig / n));
        q.w.push_back(wx(ib) / 2 / (2.0 * n * n));
      }
  return q;
}

Quadrature su2_polar_quadrature(int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "quadrature size must be positive");
  auto [x, wx] = gauss_legendre(n);
  Quadrature q;
  for (int io = 0; io < 2 * n; ++io)
    for (int it = 0; it < n; ++it)
      for (int ip = 0; ip < 2 * n; ++ip) {
        const double om = 2 * kPi * io / (2 * n);
        q.g.push_back(GroupElement::polar(om, std::acos(x(it)), 2 * kPi * ip / (2 * n)));
        const double s = std::sin(om / 2);
        // (1/pi) sin^2(omega/2) d omega x d cos(theta)/2 x d phi/(2 pi)
        q.w.push_back(2 * s * s / (2.0 * n) * wx(it) / 2 / (2.0 * n));
      }
  return q;
}

Quadrature default_quadrature(Group g, int n) {
  return g == Group::U1 ? u1_quadrature(n) : su2_euler_quadrature(n);
}

// ─── Frame states ──────────────────────────────────────────────────────────

const char* frame_kind_name(FrameKind k) {
  switch (k) {
    case FrameKind::U1Phase: return "u1-phase";
    case FrameKind::U1Coherent: return "u1-coherent";
    case FrameKind::SU2Fiducial: return "su2-fiducial";
    case FrameKind::SU2Coherent: return "su2-coherent";
  }
  return "?";
}

Group frame_group(FrameKind k) {
  return (k == FrameKind::U1Phase || k == FrameKind::U1Coherent) ? Group::U1 : Group::SU2;
}

bool is_maximum_likelihood(FrameKind k) {
  return k == FrameKind::U1Phase || k == FrameKind::SU2Fiducial;
}

int coherent_cutoff(double t, double tol) {
  if (t < 0) throw Error(Errc::InvalidArgument, "coherent amplitude must be nonnegative");
  if (t == 0) return 0;
  const double mu = t * t;
  const int kmax = static_cast<int>(mu + 40 * std::sqrt(mu) + 60);
  std::vector<double> p(kmax + 1);
  for (int k = 0; k <= kmax; ++k) p[k] = std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0));
  double tail = 0;
  int K = kmax;
  for (int k = kmax; k >= 0; --k) {
    if (tail + p[k] >= tol) {
      K = k;
      break;
    }
    tail += p[k];
    K = k - 1;
  }
  return std::max(K, 0);
}

FrameState make_frame(const FrameSpec& spec, const GroupElement& g) {
  check_group(frame_group(spec.kind), g.group);
  FrameState f;
  f.spec = spec;
  f.g = g;
  switch (spec.kind) {
    case FrameKind::U1Phase: {
      const int s = static_cast<int>(std::lround(spec.size));
      f.rep = u1_fock(s);
      f.vec = VecXc(s + 1);
      for (int k = 0; k <= s; ++k) f.vec(k) = std::exp(cd(0, k * g.theta)) / std::sqrt(s + 1.0);
      break;
    }
    case FrameKind::U1Coherent: {
      const double t = spec.size;
      const int K = spec.cutoff >= 0 ? spec.cutoff : coherent_cutoff(t, spec.tail_tol);
      f.spec.cutoff = K;
      f.rep = u1_fock(K);
      f.vec = VecXc(K + 1);
      for (int k = 0; k <= K; ++k) {
        const double mag =
            t == 0 ? (k == 0 ? 1.0 : 0.0)
                   : std::exp(-t * t / 2 + k * std::log(t) - 0.5 * std::lgamma(k + 1.0));
        f.vec(k) = mag * std::exp(cd(0, k * g.theta));
      }
      f.vec.normalize();
      break;
    }
    case FrameKind::SU2Fiducial: {
      const int s = static_cast<int>(std::lround(spec.size));
      f.rep = su2_regular(s);
      VecXc e = VecXc::Zero(su2_regular_dim(s));
      const double norm = std::sqrt(static_cast<double>(su2_regular_dim(s)));
      int off = 0;
      for (int j = 0; j <= s; ++j) {
        const int n = 2 * j + 1;
        for (int m = 0; m < n; ++m) e(off + m * n + m) = std::sqrt(double(n)) / norm;
        off += n * n;
      }
      f.vec = f.rep.matrix(g) * e;
      break;
    }
    case FrameKind::SU2Coherent: {
      f.rep = su2_irrep(spec.size);
      f.vec = wigner_d(spec.size, g.su2).col(0);
      break;
    }
  }
  return f;
}

FrameSpec projector_family(const FrameSpec& spec) {
  if (spec.kind != FrameKind::U1Coherent) return spec;
  FrameSpec p;
  p.kind = FrameKind::U1Phase;
  p.size = spec.cutoff >= 0 ? spec.cutoff : coherent_cutoff(spec.size, spec.tail_tol);
  return p;
}

double projector_dim(const FrameSpec& spec) {
  const FrameSpec p = projector_family(spec);
  switch (p.kind) {
    case FrameKind::U1Phase: return std::lround(p.size) + 1.0;
    case FrameKind::SU2Fiducial: return su2_regular_dim(static_cast<int>(std::lround(p.size)));
    case FrameKind::SU2Coherent: return 2 * p.size + 1;
    default: break;
  }
  return 1;
}

// ─── CP maps ───────────────────────────────────────────────────────────────

MatXc CPMap::apply(const MatXc& rho) const {
  if (rho.rows() != dim || rho.cols() != dim) throw Error(Errc::DimensionMismatch, "CPMap input");
  const VecXc v = L * Eigen::Map<const VecXc>(rho.data(), rho.size());
  return Eigen::Map<const MatXc>(v.data(), dim, dim);
}

CPMap CPMap::then(const CPMap& next) const {
  if (next.dim != dim) throw Error(Errc::DimensionMismatch, "CPMap composition");
  return {dim, next.L * L};
}

MatXc CPMap::choi() const {
  MatXc C = MatXc::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      MatXc E = MatXc::Zero(dim, dim);
      E(i, k) = 1;
      C.block(i * dim, k * dim, dim, dim) = apply(E);
    }
  return C;
}

double CPMap::trace_deviation() const {
  double worst = 0;
  for (int col = 0; col < dim * dim; ++col) {
    cd tr = 0;
    for (int k = 0; k < dim; ++k) tr += L(k * dim + k, col);
    const double expect = (col % dim == col / dim) ? 1.0 : 0.0;
    worst = std::max(worst, std::abs(tr - expect));
  }
  return worst;
}

double CPMap::min_choi_eigenvalue() const {
  const MatXc C = choi();
  const MatXc H = (C + C.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<MatXc> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CPMap identity_map(int dim) { return {dim, MatXc::Identity(dim * dim, dim * dim)}; }

CPMap unitary_map(const MatXc& U) {
  return {static_cast<int>(U.rows()), kron(MatXc(U.conjugate()), U)};
}

CPMap mixture_map(const std::vector<MatXc>& U, const std::vector<double>& w) {
  if (U.empty() || U.size() != w.size())
    throw Error(Errc::InvalidArgument, "mixture needs matching unitaries and weights");
  const int d = static_cast<int>(U[0].rows());
  CPMap m{d, MatXc::Zero(d * d, d * d)};
  for (std::size_t k = 0; k < U.size(); ++k) m.L += w[k] * kron(MatXc(U[k].conjugate()), U[k]);
  return m;
}

// ─── Twirl, encoding and recovery ──────────────────────────────────────────

void check_density_matrix(const MatXc& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw Error(Errc::NotDensityMatrix, "matrix is not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw Error(Errc::NotDensityMatrix, "matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw Error(Errc::NotDensityMatrix, "trace is not 1");
  const MatXc H = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<MatXc> es(H, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw Error(Errc::NotDensityMatrix, "matrix has a negative eigenvalue");
}

MatXc g_twirl(const MatXc& rho, const RepSpace& rep, int quadrature_n) {
  check_density_matrix(rho);
  if (rho.rows() != rep.dim()) throw Error(Errc::DimensionMismatch, "g_twirl");
  if (rep.group == Group::U1) return twirl_exact_u1(rho, rep);
  return twirl_sum(rho, rep, su2_euler_quadrature(quadrature_n));
}

MatXc g_twirl(const MatXc& rho, const RepSpace& rep, const Quadrature& q) {
  check_density_matrix(rho);
  if (rho.rows() != rep.dim()) throw Error(Errc::DimensionMismatch, "g_twirl");
  return twirl_sum(rho, rep, q);
}

double invariance_residual(const MatXc& sigma, const RepSpace& rep, const Quadrature& q) {
  double worst = 0;
  for (const auto& g : q.g) {
    const MatXc U = rep.matrix(g);
    worst = std::max(worst, (U * sigma - sigma * U).cwiseAbs().maxCoeff());
  }
  return worst;
}

MatXc encode(const MatXc& rho_S, const RepSpace& rep_S, const FrameState& frame,
             int quadrature_n) {
  if (rho_S.rows() != rep_S.dim()) throw Error(Errc::DimensionMismatch, "encode: system");
  check_group(rep_S.group, frame.rep.group);
  const MatXc joint = kron(rho_S, MatXc(frame.vec * frame.vec.adjoint()));
  return g_twirl(joint, tensor(rep_S, frame.rep), quadrature_n);
}

Recovery recover(const MatXc& sigma_SR, const RepSpace& rep_S, const FrameSpec& frame,
                 const Quadrature& q, double tol) {
  const FrameSpec P = projector_family(frame);
  const double D = projector_dim(P);
  const int dS = rep_S.dim();
  const FrameState e = make_frame(P, GroupElement::identity(frame_group(P.kind)));
  const int dR = e.rep.dim();
  if (sigma_SR.rows() != dS * dR) throw Error(Errc::DimensionMismatch, "recover");

  Recovery out;
  out.invariance_residual = invariance_residual(sigma_SR, tensor(rep_S, e.rep), q);
  if (out.invariance_residual > tol) {
    out.not_invariant = true;
    out.warning = "NotInvariant: input deviates from G-invariance by " +
                  std::to_string(out.invariance_residual);
  }
  out.rho = MatXc::Zero(dS, dS);
  for (std::size_t k = 0; k < q.g.size(); ++k) {
    const VecXc bra = make_frame(P, q.g[k]).vec.adjoint();
    const MatXc Ui = rep_S.matrix(q.g[k].inverse());
    // K = U_S(g^-1) (x) <g|
    MatXc K = kron(Ui, MatXc(bra.transpose()));
    out.rho += q.w[k] * D * (K * sigma_SR * K.adjoint());
  }
  return out;
}

// ─── Relational instrument and change of frame ─────────────────────────────

namespace {

void require_ml(const FrameSpec& s) {
  if (!is_maximum_likelihood(s.kind))
    throw Error(Errc::NonMLProjectors,
                std::string(frame_kind_name(s.kind)) + " states do not resolve the identity");
}

}  // namespace

MatXc relational_instrument(const MatXc& sigma, int dim_S, const FrameSpec& A,
                            const FrameSpec& B, const GroupElement& h, const Quadrature& q) {
  require_ml(A);
  require_ml(B);
  const Group grp = frame_group(A.kind);
  check_group(grp, frame_group(B.kind));
  const double DA = projector_dim(A), DB = projector_dim(B);
  const int dA = make_frame(A, GroupElement::identity(grp)).rep.dim();
  const int dB = make_frame(B, GroupElement::identity(grp)).rep.dim();
  const int dAB = dA * dB;
  if (sigma.rows() != dim_S * dAB) throw Error(Errc::DimensionMismatch, "relational_instrument");

  MatXc out = MatXc::Zero(sigma.rows(), sigma.cols());
  for (std::size_t k = 0; k < q.g.size(); ++k) {
    const VecXc v = kron(make_frame(A, q.g[k]).vec, make_frame(B, q.g[k] * h).vec);
    // V = I_S (x) v, so Pi = V V^dagger
    MatXc V = MatXc::Zero(dim_S * dAB, dim_S);
    for (int s = 0; s < dim_S; ++s) V.block(s * dAB, s, dAB, 1) = v;
    const MatXc M = V.adjoint() * sigma * V;
    out += (q.w[k] * DA * DB) * (V * M * V.adjoint());
  }
  return out;
}

MatXc relational_effect(const FrameSpec& A, const FrameSpec& B, const GroupElement& h,
                        const Quadrature& q) {
  require_ml(A);
  require_ml(B);
  const double DA = projector_dim(A), DB = projector_dim(B);
  MatXc E;
  for (std::size_t k = 0; k < q.g.size(); ++k) {
    const VecXc v = kron(make_frame(A, q.g[k]).vec, make_frame(B, q.g[k] * h).vec);
    const MatXc term = (q.w[k] * DA * DB) * (v * v.adjoint());
    if (E.size() == 0)
      E = term;
    else
      E += term;
  }
  return E;
}

double povm_completeness_residual(const FrameSpec& A, const FrameSpec& B, const Quadrature& q_g,
                                  const Quadrature& q_h) {
  require_ml(A);
  require_ml(B);
  const double DA = projector_dim(A), DB = projector_dim(B);
  const Group grp = frame_group(A.kind);
  const int dA = make_frame(A, GroupElement::identity(grp)).rep.dim();
  const int dB = make_frame(B, GroupElement::identity(grp)).rep.dim();
  MatXc total = MatXc::Zero(dA * dB, dA * dB);
  for (std::size_t k = 0; k < q_g.g.size(); ++k) {
    const VecXc a = make_frame(A, q_g.g[k]).vec;
    // sum_h w_h |gh><gh|
    MatXc SB = MatXc::Zero(dB, dB);
    for (std::size_t l = 0; l < q_h.g.size(); ++l) {
      const VecXc b = make_frame(B, q_g.g[k] * q_h.g[l]).vec;
      SB.noalias() += q_h.w[l] * (b * b.adjoint());
    }
    total += (q_g.w[k] * DA * DB) * kron(MatXc(a * a.adjoint()), SB);
  }
  total -= MatXc::Identity(dA * dB, dA * dB);
  Eigen::JacobiSVD<MatXc> svd(total);
  return svd.singularValues()(0);
}

MatXc uncorrelated_initial_state(const MatXc& rho_S, const RepSpace& rep_S,
                                 const FrameState& frame_A, const MatXc& rho_B,
                                 const RepSpace& rep_B, const Quadrature& q) {
  check_density_matrix(rho_S);
  check_density_matrix(rho_B);
  if (rho_S.rows() != rep_S.dim() || rho_B.rows() != rep_B.dim())
    throw Error(Errc::DimensionMismatch, "uncorrelated_initial_state");
  const MatXc sa = twirl_auto(kron(rho_S, MatXc(frame_A.vec * frame_A.vec.adjoint())),
                              tensor(rep_S, frame_A.rep), q);
  return kron(sa, twirl_auto(rho_B, rep_B, q));
}

MatXc change_frame_brute_force(const MatXc& sigma_SAB, int dim_S, const FrameSpec& A,
                               const FrameSpec& B, const GroupElement& h, const Quadrature& q) {
  const Group grp = frame_group(A.kind);
  const int dA = make_frame(A, GroupElement::identity(grp)).rep.dim();
  const int dB = make_frame(B, GroupElement::identity(grp)).rep.dim();
  return trace_middle(relational_instrument(sigma_SAB, dim_S, A, B, h, q), dim_S, dA, dB);
}

MatXc change_frame(const MatXc& rho_S, const RepSpace& rep_S, const FrameState& frame_A,
                   const FrameSpec& B, const GroupElement& h, const Quadrature& q) {
  check_density_matrix(rho_S);
  if (rho_S.rows() != rep_S.dim()) throw Error(Errc::DimensionMismatch, "change_frame");
  const MatXc Ua = rep_S.matrix(frame_A.g.inverse());
  const MatXc rotated = Ua * rho_S * Ua.adjoint();
  const MatXc rho_p = decoherence_map_A(frame_A.spec, rep_S, q).apply(rotated);
  const FrameState hb = make_frame(projector_family(B), h);
  const MatXc joint = kron(rho_p, MatXc(hb.vec * hb.vec.adjoint()));
  return twirl_auto(joint, tensor(rep_S, hb.rep), q);
}

double frame_kernel(const FrameSpec& A, const GroupElement& g) {
  const FrameSpec P = projector_family(A);
  const VecXc psi = make_frame(A, GroupElement::identity(g.group)).vec;
  const VecXc pg = make_frame(P, g).vec;
  return projector_dim(P) * std::norm(pg.dot(psi));
}

CPMap decoherence_map_A(const FrameSpec& A, const RepSpace& rep_S, const Quadrature& q) {
  check_group(frame_group(A.kind), rep_S.group);
  std::vector<MatXc> U;
  std::vector<double> w;
  U.reserve(q.g.size());
  for (std::size_t k = 0; k < q.g.size(); ++k) {
    U.push_back(rep_S.matrix(q.g[k].inverse()));
    w.push_back(q.w[k] * frame_kernel(A, q.g[k]));
  }
  return mixture_map(U, w);
}

CPMap net_decoherence(const FrameSpec& A, const FrameSpec& B, const GroupElement& a,
                      const GroupElement& h, const RepSpace& rep_S, const Quadrature& q) {
  const CPMap Fa = decoherence_map_A(A, rep_S, q);
  const CPMap Fb = decoherence_map_A(projector_family(B), rep_S, q);
  return unitary_map(rep_S.matrix(a.inverse()))
      .then(Fa)
      .then(unitary_map(rep_S.matrix(h.inverse())))
      .then(Fb);
}

// ─── Closed-form overlaps ──────────────────────────────────────────────────

double u1_overlap(int s, double delta) {
  if (s < 0) throw Error(Errc::InvalidArgument, "cutoff must be nonnegative");
  const double sh = std::sin(delta / 2);
  if (std::abs(sh) < 1e-300) return 1.0;
  const double sn = std::sin((s + 1) * delta / 2);
  // (1 - cos x) = 2 sin^2(x/2) keeps the small-delta ratio accurate.
  return (sn * sn) / (sh * sh) / ((s + 1.0) * (s + 1.0));
}

cd u1_coherent_overlap(double t, double g, int cutoff) {
  cd sum = 0;
  for (int k = 0; k <= cutoff; ++k) {
    const double mag = t == 0 ? (k == 0 ? 1.0 : 0.0)
                              : std::exp(-t * t / 2 + k * std::log(t) - 0.5 * std::lgamma(k + 1.0));
    sum += mag * std::exp(cd(0, -k * g));
  }
  return sum / std::sqrt(cutoff + 1.0);
}

cd su2_fiducial_overlap(int s, double omega) {
  if (s < 0) throw Error(Errc::InvalidArgument, "cutoff must be nonnegative");
  cd sum = 0;
  for (int m = -s; m <= s; ++m)
    sum += std::exp(cd(0, m * omega)) * double((1 + s) * (1 + s) - m * m);
  return sum / double(su2_regular_dim(s));
}

cd su2_coherent_overlap(double j, double alpha, double beta, double gamma) {
  const int tj = twice(j);
  return std::exp(cd(0, -(alpha + gamma) * j)) * ipow(std::cos(beta / 2), tj);
}

// ─── SU(2) coherent-state frames ───────────────────────────────────────────

CPMap z_dephasing(const RepSpace& rep_S, int n) {
  check_group(rep_S.group, Group::SU2);
  std::vector<MatXc> U;
  std::vector<double> w;
  for (int k = 0; k < n; ++k) {
    U.push_back(rep_S.matrix(GroupElement::euler(4 * kPi * k / n, 0, 0)));
    w.push_back(1.0 / n);
  }
  return mixture_map(U, w);
}

CPMap su2_cs_middle(double j, const RepSpace& rep_S, int quadrature_n) {
  check_group(rep_S.group, Group::SU2);
  const int tj = twice(j);
  if (tj == 0) throw Error(Errc::InvalidArgument, "j must be positive");
  auto [beta, wb] = gauss_angle(quadrature_n);
  std::vector<MatXc> U;
  std::vector<double> w;
  for (int k = 0; k < quadrature_n; ++k) {
    const double c = std::cos(beta(k) / 2);
    U.push_back(rep_S.matrix(GroupElement::euler(0, -beta(k), 0)));
    w.push_back((tj + 1) * wb(k) * std::sin(beta(k)) / 2 * ipow(c, 2 * tj));
  }
  return mixture_map(U, w);
}

CPMap su2_cs_decoherence(double j, const RepSpace& rep_S, int quadrature_n) {
  const CPMap D = z_dephasing(rep_S);
  return D.then(su2_cs_middle(j, rep_S, quadrature_n)).then(D);
}

double su2_cs_dephasing_deviation(double j, const RepSpace& rep_S, int quadrature_n) {
  const CPMap D = z_dephasing(rep_S);
  const CPMap M = su2_cs_middle(j, rep_S, quadrature_n);
  const MatXc dev = D.L * (M.L - MatXc::Identity(M.L.rows(), M.L.cols())) * D.L;
  Eigen::JacobiSVD<MatXc> svd(dev);
  return svd.singularValues()(0);
}

}  // namespace rqi::qrf
