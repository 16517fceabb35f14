#include "commands.hpp"

#include "rqi/cow.hpp"
#include "rqi/fermion.hpp"
#include "rqi/measurement.hpp"
#include "rqi/multiqubit.hpp"
#include "rqi/photon.hpp"
#include "rqi/qrf.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

namespace rqi::cli {

namespace {

using Vec3 = Eigen::Vector3d;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

// Shortest-safe double text: 17 significant digits.
std::string fmt(double x) {
  if (!std::isfinite(x)) throw NumericFailure("non-finite value in output");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double finite(double x) {
  if (!std::isfinite(x)) throw NumericFailure("non-finite value in output");
  return x;
}

// Converts a module validation error into a config error on `key`.
template <class F>
auto checked(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
}

class Args {
 public:
  explicit Args(const Params& p) : p_(p) {}

  const std::string& str(const std::string& k) const { return p_.at(k); }

  double num(const std::string& k) const { return parse(k, str(k)); }

  double positive(const std::string& k) const {
    const double v = num(k);
    if (!(v > 0)) throw ConfigError(k, "must be positive");
    return v;
  }

  double nonnegative(const std::string& k) const {
    const double v = num(k);
    if (!(v >= 0)) throw ConfigError(k, "must be non-negative");
    return v;
  }

  int integer(const std::string& k, int lo, int hi) const {
    const std::string& s = str(k);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError(k, "expected an integer, got '" + s + "'");
    if (v < lo || v > hi)
      throw ConfigError(k, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  bool flag(const std::string& k) const {
    const std::string& s = str(k);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(k, "expected true or false, got '" + s + "'");
  }

  std::string choice(const std::string& k, std::initializer_list<const char*> options) const {
    const std::string& s = str(k);
    std::string all;
    for (const char* o : options) {
      if (s == o) return s;
      all += all.empty() ? o : std::string("|") + o;
    }
    throw ConfigError(k, "expected one of " + all + ", got '" + s + "'");
  }

  std::vector<double> list(const std::string& k, std::size_t n = 0) const {
    return parse_list(k, str(k), n);
  }

  static std::vector<double> parse_list(const std::string& k, const std::string& s,
                                        std::size_t n) {
    std::vector<double> out;
    if (!trim(s).empty())
      for (const auto& t : split(s, ',')) out.push_back(parse(k, t));
    if (n != 0 && out.size() != n)
      throw ConfigError(k, "expected " + std::to_string(n) + " comma-separated numbers");
    return out;
  }

  Vec3 vec3(const std::string& k) const {
    const auto v = list(k, 3);
    return {v[0], v[1], v[2]};
  }

  Vec4 vec4(const std::string& k) const {
    const auto v = list(k, 4);
    return {v[0], v[1], v[2], v[3]};
  }

  // re, im pairs.
  static VecXc complex(const std::string& k, const std::string& s, std::size_t n) {
    const auto v = parse_list(k, s, 2 * n);
    VecXc out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = cd(v[2 * i], v[2 * i + 1]);
    return out;
  }

  VecXc complex(const std::string& k, std::size_t n) const { return complex(k, str(k), n); }

  VecXc unit(const std::string& k, std::size_t n) const {
    VecXc v = complex(k, n);
    if (!(v.norm() > 0)) throw ConfigError(k, "zero vector");
    return v / v.norm();
  }

  // Unit-speed frame velocity (gamma, gamma v) from a 3-velocity.
  Vec4 velocity(const std::string& k) const {
    const Vec3 v = vec3(k);
    if (!(v.norm() < 1)) throw ConfigError(k, "speed must be below 1");
    const double g = 1 / std::sqrt(1 - v.squaredNorm());
    return {g, g * v[0], g * v[1], g * v[2]};
  }

  Vec3 direction(const std::string& k) const {
    const Vec3 v = vec3(k);
    if (!(v.norm() > 0)) throw ConfigError(k, "zero direction");
    return v.normalized();
  }

 private:
  static double parse(const std::string& k, const std::string& s) {
    const std::string t = trim(s);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
      throw ConfigError(k, "expected a number, got '" + s + "'");
    return v;
  }

  const Params& p_;
};

// ─── shared worldline setup ────────────────────────────────────────────────

const Params kPathDefaults = {
    {"metric", "minkowski"}, {"g", "1"},
    {"M", "1"},              {"trajectory", "geodesic"},
    {"x0", "0,0,0,0"},       {"velocity", "0,0,0"},
    {"span", "10"},          {"step", "0.01"},
    {"speed", "0.5"},        {"radius", "1"},
    {"revolutions", "1"},    {"z", "0"},
    {"r", "10"},             {"duration", "10"},
    {"steps", "1000"},       {"charge", "0"},
    {"mass", "1"},           {"field-e", "0,0,0"},
    {"field-b", "0,0,0"},    {"scheme", "magnus4"},
};

MetricField metric_of(const Args& a) {
  const std::string name = a.choice("metric", {"minkowski", "rindler", "schwarzschild"});
  if (name == "rindler") return rindler(a.num("g"));
  if (name == "schwarzschild") return schwarzschild(a.positive("M"));
  return minkowski();
}

Spacetime spacetime_of(const Args& a) {
  const MetricField m = metric_of(a);
  return {m, diagonal_tetrad(m)};
}

void require_metric(const Args& a, const std::string& trajectory, const char* metric) {
  if (a.str("metric") != metric)
    throw ConfigError("metric", "trajectory " + trajectory + " needs metric " + metric);
}

// Checks the tetrad at x0 and returns the coordinate components of the frame vector v.
Vec4 coordinate_vector(const Spacetime& st, const Vec4& x0, const Vec4& v_frame) {
  return checked("x0", [&] {
    const double dev = check_tetrad(st.metric, st.tetrad, x0);
    if (!(dev < 1e-9)) throw Error(Errc::SingularMetric, "no orthonormal tetrad at x0");
    return Vec4(st.tetrad.eval(x0) * v_frame);
  });
}

struct Path {
  Spacetime st;
  Trajectory traj;
  EMField em;
  double charge = 0;
  double mass = 1;
};

Path path_of(const Args& a) {
  const std::string kind = a.choice("trajectory", {"geodesic", "lorentz", "circular", "hover", "orbit"});
  Path p{spacetime_of(a), {}, no_field(), 0, 1};
  const int steps = a.integer("steps", 1, 10000000);
  if (kind == "circular") {
    require_metric(a, kind, "minkowski");
    const double speed = a.positive("speed"), radius = a.positive("radius");
    const double revs = a.nonnegative("revolutions");
    p.traj = checked("speed", [&] { return circular_orbit_flat(speed, radius, revs, steps); });
  } else if (kind == "hover") {
    require_metric(a, kind, "rindler");
    const double g = a.num("g"), z = a.num("z"), dur = a.nonnegative("duration");
    p.traj = checked("z", [&] { return rindler_hover(g, z, dur, steps); });
  } else if (kind == "orbit") {
    require_metric(a, kind, "schwarzschild");
    const double M = a.positive("M"), r = a.positive("r"), dur = a.nonnegative("duration");
    p.traj = checked("r", [&] { return schwarzschild_circular(M, r, dur, steps); });
  } else {
    const Vec4 x0 = a.vec4("x0");
    const Vec4 u0 = coordinate_vector(p.st, x0, a.velocity("velocity"));
    const double span = a.nonnegative("span"), step = a.positive("step");
    if (kind == "lorentz") {
      p.em = uniform_field(a.vec3("field-e"), a.vec3("field-b"));
      p.charge = a.num("charge");
      p.mass = a.positive("mass");
    }
    p.traj = integrate_lorentz_force(p.st, p.em, p.mass, p.charge, x0, u0, span, step);
  }
  return p;
}

Scheme scheme_of(const Args& a) {
  return a.choice("scheme", {"magnus4", "midpoint"}) == "midpoint" ? Scheme::Midpoint
                                                                    : Scheme::Magnus4;
}

// ─── CSV helpers ───────────────────────────────────────────────────────────

void complex_row(std::ostream& os, const std::string& label, cd z) {
  os << label << ',' << fmt(z.real()) << ',' << fmt(z.imag()) << '\n';
}

void real_row(std::ostream& os, const std::string& label, double x) {
  complex_row(os, label, cd(x, 0));
}

template <class V>
void vector_rows(std::ostream& os, const std::string& label, const V& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    complex_row(os, label + "_" + std::to_string(i), cd(v[i]));
}

template <class M>
void matrix_rows(std::ostream& os, const std::string& label, const M& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      complex_row(os, label + "_" + std::to_string(i) + std::to_string(j), cd(m(i, j)));
}

nlohmann::json to_json(const Vec4& v) {
  return {finite(v[0]), finite(v[1]), finite(v[2]), finite(v[3])};
}

// ─── commands ──────────────────────────────────────────────────────────────

void cow_table(const Args& a, std::ostream& os) {
  cow::Config cfg;
  auto positive_text = [&](const char* k) {
    a.positive(k);
    return trim(a.str(k));
  };
  cfg.mass = positive_text("mass");
  cfg.speed_v1 = positive_text("v1");
  if (!(a.num("v1") < 299792458.0)) throw ConfigError("v1", "must be below c");
  a.nonnegative("delta-z");
  cfg.delta_z = trim(a.str("delta-z"));
  cfg.ell = positive_text("ell");
  cfg.g = positive_text("g");
  cfg.precision_digits = static_cast<unsigned>(a.integer("precision", 40, 10000));
  std::vector<cow::Row> rows;
  try {
    rows = cow::table(cfg);
  } catch (const Error& e) {
    if (e.code() == Errc::ImaginaryVelocity) throw ConfigError("v1", e.what());
    throw;
  }
  os << "label,delta_theta_rad,diff_from_cow,diff_from_exact\n";
  for (const auto& r : rows)
    os << r.label << ',' << cow::format(r.delta_theta, 30) << ','
       << cow::format(r.diff_from_cow, 30) << ',' << cow::format(r.diff_from_exact, 30) << '\n';
}

void transport_fermion(const Args& a, std::ostream& os) {
  const Path p = path_of(a);
  const Vec2c rest = a.unit("psi", 2);
  const Scheme scheme = scheme_of(a);
  const Sample& s0 = p.traj.front();
  const WeylQubit q = wigner_to_weyl(s0.x, s0.uI, rest);
  const auto r = transport(q, p.traj, p.st, p.em, p.charge, p.mass, {scheme});
  const Mat2c Tw = standard_boost_spinhalf(r.op.u_end).inverse() * r.op.T *
                   standard_boost_spinhalf(r.op.u_start);
  os << "quantity,re,im\n";
  vector_rows(os, "psi_initial", q.psi);
  vector_rows(os, "psi_final", r.qubit.psi);
  vector_rows(os, "rest_initial", rest);
  vector_rows(os, "rest_final", weyl_to_wigner(r.qubit));
  vector_rows(os, "u_initial", r.op.u_start);
  vector_rows(os, "u_final", r.op.u_end);
  real_row(os, "norm_initial", norm2(q));
  real_row(os, "norm_final", norm2(r.qubit));
  matrix_rows(os, "T", r.op.T);
  matrix_rows(os, "T_rest", Tw);
  real_row(os, "rest_rotation_angle", su2_angle(Tw));
}

void transport_photon(const Args& a, std::ostream& os) {
  const Spacetime st = spacetime_of(a);
  const Vec4 x0 = a.vec4("x0");
  const Vec3 n = a.direction("direction");
  const Vec4 k0 = coordinate_vector(st, x0, Vec4(1, n[0], n[1], n[2]));
  const Vec2c jones = a.unit("jones", 2);
  const double span = a.nonnegative("span"), step = a.positive("step");
  const Scheme scheme = scheme_of(a);
  const Trajectory traj = integrate_null_geodesic(st, x0, k0, span, step);
  PolarisationQubit q;
  q.x = traj.front().x;
  q.u = traj.front().uI;
  q.psi = jones_to_vector(q.u, jones);
  const auto r = parallel_transport_polarisation(q, traj, st, scheme);
  const double theta = wigner_angle(traj, st);
  os << "quantity,re,im\n";
  vector_rows(os, "jones_initial", jones);
  vector_rows(os, "jones_final", extract_jones(r.qubit));
  vector_rows(os, "psi_initial", q.psi);
  vector_rows(os, "psi_final", r.qubit.psi);
  vector_rows(os, "u_initial", q.u);
  vector_rows(os, "u_final", r.qubit.u);
  complex_row(os, "gauge_final", r.qubit.psi.dot(eta().cast<cd>() * r.qubit.u.cast<cd>()));
  real_row(os, "wigner_angle", theta);
  matrix_rows(os, "jones_rotation", rotation_y(theta));
}

const std::set<std::string> kStateKeys = {"velocity", "psi", "direction", "jones"};

void measure(const Args& a, std::ostream& os) {
  const std::string species = a.choice("species", {"fermion", "photon"});
  if (species == "fermion") {
    WeylQubit q = checked("psi", [&] {
      return wigner_to_weyl(Vec4::Zero(), a.velocity("velocity"), a.unit("psi", 2));
    });
    SternGerlachConfig cfg;
    cfg.u = q.u;
    cfg.v = a.velocity("apparatus-velocity");
    const Mat4 lift = spin1_boost(cfg.v);
    const auto axes = split(a.str("axes"), ';');
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const auto m = Args::parse_list("axes", axes[i], 3);
      const Vec3 mh(m[0], m[1], m[2]);
      if (!(mh.norm() > 0)) throw ConfigError("axes", "zero axis");
      cfg.m = lift * Vec4(0, mh[0] / mh.norm(), mh[1] / mh.norm(), mh[2] / mh.norm());
      const Vec4 nax = checked("axes", [&] { return stern_gerlach_axis(cfg); });
      const SpinOutcome out = measure_spin(q, cfg);
      nlohmann::json line = {{"index", i},
                             {"axis", {mh[0], mh[1], mh[2]}},
                             {"n", to_json(nax)},
                             {"p_plus", finite(out.p_plus)},
                             {"p_minus", finite(out.p_minus)}};
      os << line.dump() << '\n';
    }
  } else {
    const Vec3 n = a.direction("direction");
    PolarisationQubit q;
    q.u = Vec4(1, n[0], n[1], n[2]);
    q.psi = jones_to_vector(q.u, a.unit("jones", 2));
    const auto pols = split(a.str("polarisers"), ';');
    for (std::size_t i = 0; i < pols.size(); ++i) {
      const VecXc j = Args::complex("polarisers", pols[i], 2);
      if (!(j.norm() > 0)) throw ConfigError("polarisers", "zero Jones vector");
      const auto pol = make_polariser(q.u, Vec2c(j / j.norm()));
      nlohmann::json line = {{"index", i},
                             {"polariser", {j[0].real(), j[0].imag(), j[1].real(), j[1].imag()}},
                             {"probability", finite(polariser_probability(q, pol))}};
      os << line.dump() << '\n';
    }
  }
}

void teleport_cmd(const Args& a, std::ostream& os) {
  const Path p = path_of(a);
  const Vec2c ab = a.unit("alpha-beta", 2);
  const bool carry = a.flag("carry-basis");
  const int shots = a.integer("shots", 0, 100000000);
  const auto seed = static_cast<std::uint64_t>(a.integer("seed", 0, 2147483647));
  const Sample& s0 = p.traj.front();
  std::array<BasisPair, 3> basis;
  basis[0] = basis[1] = basis_from_rest_frame(Vec4::Zero(), Vec4(1, 0, 0, 0), Mat2c::Identity());
  basis[2] = basis_from_rest_frame(s0.x, s0.uI, Mat2c::Identity());
  auto session = make_session(basis, ab[0], ab[1]);
  WeylQubit carrier;
  carrier.x = s0.x;
  carrier.u = s0.uI;
  const auto op = transport(carrier, p.traj, p.st, p.em, p.charge, p.mass, {scheme_of(a)}).op;
  transport_particle(session, 2, op, carry);
  const auto branches = teleport_all(session);
  std::array<long, 4> counts{};
  std::mt19937_64 rng(seed);
  for (int k = 0; k < shots; ++k) ++counts[static_cast<int>(teleport(session, rng).outcome)];
  os << "outcome,probability,fidelity,bob0_re,bob0_im,bob1_re,bob1_im,count\n";
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& b = branches[i];
    os << bell_name(b.outcome) << ',' << fmt(b.probability) << ',' << fmt(b.fidelity) << ','
       << fmt(b.bob_state[0].real()) << ',' << fmt(b.bob_state[0].imag()) << ','
       << fmt(b.bob_state[1].real()) << ',' << fmt(b.bob_state[1].imag()) << ',' << counts[i]
       << '\n';
  }
}

qrf::FrameKind frame_kind(const Args& a, const std::string& key, qrf::Group group) {
  using qrf::FrameKind;
  if (group == qrf::Group::U1)
    return a.choice(key, {"phase", "coherent"}) == "phase" ? FrameKind::U1Phase
                                                           : FrameKind::U1Coherent;
  return a.choice(key, {"fiducial", "coherent"}) == "fiducial" ? FrameKind::SU2Fiducial
                                                               : FrameKind::SU2Coherent;
}

qrf::FrameSpec frame_spec(qrf::FrameKind kind, double size, const std::string& key) {
  const qrf::FrameSpec spec{kind, size};
  checked(key, [&] { return qrf::make_frame(spec, qrf::GroupElement::identity(qrf::frame_group(kind))); });
  return spec;
}

// Highest charge (U(1)) or twice the highest spin (SU(2)) carried by a frame.
int frame_degree(const qrf::FrameSpec& spec) {
  const auto f = qrf::make_frame(spec, qrf::GroupElement::identity(qrf::frame_group(spec.kind)));
  if (spec.kind == qrf::FrameKind::U1Phase || spec.kind == qrf::FrameKind::U1Coherent)
    return static_cast<int>(f.vec.size()) - 1;
  return static_cast<int>(std::lround(2 * spec.size));
}

// Kernel argument: phase, rotation angle about z, or polar angle of a y rotation.
struct Grid {
  const char* name;
  double lo, hi;
  std::function<qrf::GroupElement(double)> element;
};

Grid kernel_grid(qrf::FrameKind kind, bool centred) {
  using qrf::GroupElement;
  switch (kind) {
    case qrf::FrameKind::U1Phase:
    case qrf::FrameKind::U1Coherent:
      return {"theta", centred ? -M_PI : 0.0, centred ? M_PI : 2 * M_PI,
              [](double t) { return GroupElement::u1(t); }};
    case qrf::FrameKind::SU2Fiducial:
      return {"omega", 0.0, 2 * M_PI, [](double w) { return GroupElement::polar(w, 0, 0); }};
    case qrf::FrameKind::SU2Coherent:
      break;
  }
  return {"beta", 0.0, M_PI, [](double b) { return GroupElement::euler(0, b, 0); }};
}

double grid_point(const Grid& g, int k, int points, bool closed) {
  const int den = closed ? std::max(points - 1, 1) : points;
  return g.lo + (g.hi - g.lo) * k / den;
}

void qrf_decohere(const Args& a, std::ostream& os) {
  const qrf::Group group =
      a.choice("group", {"u1", "su2"}) == "u1" ? qrf::Group::U1 : qrf::Group::SU2;
  const auto kind = frame_kind(a, "frame", group);
  const qrf::FrameSpec A = frame_spec(kind, a.nonnegative("size"), "size");
  const int d = a.integer("system-dim", 1, 64);
  const int points = a.integer("points", 1, 1000000);
  int n = a.integer("quadrature", 0, 4096);
  const qrf::RepSpace rep = [&] {
    if (group == qrf::Group::SU2) return qrf::su2_irrep((d - 1) / 2.0);
    std::vector<double> q(d);
    for (int i = 0; i < d; ++i) q[i] = i;
    return qrf::u1_charges(q);
  }();
  VecXc psi = a.str("psi").empty() ? VecXc(VecXc::Ones(d)) : a.complex("psi", d);
  if (!(psi.norm() > 0)) throw ConfigError("psi", "zero vector");
  psi /= psi.norm();
  // Exact for the conjugation integrands at these degrees.
  if (n == 0) n = group == qrf::Group::U1 ? 2 * (frame_degree(A) + d) + 2
                                          : 2 * frame_degree(A) + d + 4;
  const auto quad = qrf::default_quadrature(group, n);
  const MatXc before = psi * psi.adjoint();
  const MatXc after = qrf::decoherence_map_A(A, rep, quad).apply(before);

  const Grid grid = kernel_grid(kind, false);
  os << grid.name << ",kernel\n";
  for (int k = 0; k < points; ++k) {
    const double x = grid_point(grid, k, points, false);
    os << fmt(x) << ',' << fmt(qrf::frame_kernel(A, grid.element(x))) << '\n';
  }
  os << "\nentry,before_re,before_im,after_re,after_im\n";
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      os << "rho_" << i << '_' << j << ',' << fmt(before(i, j).real()) << ','
         << fmt(before(i, j).imag()) << ',' << fmt(after(i, j).real()) << ','
         << fmt(after(i, j).imag()) << '\n';
}

std::string size_label(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "size_%g", s);
  return buf;
}

void qrf_overlap(const Args& a, std::ostream& os) {
  using qrf::FrameKind;
  const std::string curve =
      a.choice("curve", {"u1-phase", "u1-coherent", "su2-fiducial", "su2-coherent"});
  const FrameKind kind = curve == "u1-phase"       ? FrameKind::U1Phase
                         : curve == "u1-coherent"  ? FrameKind::U1Coherent
                         : curve == "su2-fiducial" ? FrameKind::SU2Fiducial
                                                   : FrameKind::SU2Coherent;
  const auto sizes = a.list("sizes");
  if (sizes.empty()) throw ConfigError("sizes", "empty list");
  std::vector<qrf::FrameSpec> specs;
  for (double s : sizes) specs.push_back(frame_spec(kind, s, "sizes"));
  const int points = a.integer("points", 2, 1000000);
  const Grid grid = kernel_grid(kind, true);
  os << grid.name;
  for (double s : sizes) os << ',' << size_label(s);
  os << '\n';
  for (int k = 0; k < points; ++k) {
    const double x = grid_point(grid, k, points, true);
    os << fmt(x);
    for (const auto& spec : specs) os << ',' << fmt(qrf::frame_kernel(spec, grid.element(x)));
    os << '\n';
  }
}

void bhd(const Args& a, std::ostream& os) {
  auto frame = [&](const std::string& side) {
    const auto kind = frame_kind(a, "frame-" + side, qrf::Group::U1);
    const auto spec = frame_spec(kind, a.nonnegative("size-" + side), "size-" + side);
    return qrf::make_frame(spec, qrf::GroupElement::u1(a.num("phase-" + side)));
  };
  const auto A = frame("a"), B = frame("b");
  const double tol = a.positive("tail-tol");
  if (!(tol < 1)) throw ConfigError("tail-tol", "must be below 1");
  os << "j,m,p\n";
  for (const auto& e : qrf::bhd_distribution(A, B, tol))
    os << fmt(e.j) << ',' << fmt(e.m) << ',' << fmt(e.p) << '\n';
}

struct Command {
  Params defaults;
  std::function<void(const Args&, std::ostream&)> run;
};

Params with_path(Params extra) {
  Params p = kPathDefaults;
  for (auto& [k, v] : extra) p[k] = v;
  return p;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = [] {
    std::map<std::string, Command> t;
    t["cow-table"] = {{{"mass", "1.67e-27"},
                       {"v1", "2794"},
                       {"delta-z", "0.0316"},
                       {"ell", "0.0316"},
                       {"g", "9.81"},
                       {"precision", "50"}},
                      cow_table};
    t["transport-fermion"] = {with_path({{"psi", "1,0,0,0"}}), transport_fermion};
    t["transport-photon"] = {{{"metric", "minkowski"},
                              {"g", "1"},
                              {"M", "1"},
                              {"x0", "0,0,0,0"},
                              {"direction", "0,0,1"},
                              {"span", "10"},
                              {"step", "0.01"},
                              {"jones", "1,0,0,0"},
                              {"scheme", "magnus4"}},
                             transport_photon};
    t["measure"] = {{{"species", "fermion"},
                     {"state", ""},
                     {"velocity", "0,0,0"},
                     {"psi", "1,0,0,0"},
                     {"apparatus-velocity", "0,0,0"},
                     {"axes", "0,0,1"},
                     {"direction", "0,0,1"},
                     {"jones", "1,0,0,0"},
                     {"polarisers", "1,0,0,0"}},
                    measure};
    t["teleport"] = {with_path({{"metric", "rindler"},
                                {"g", "0.2"},
                                {"trajectory", "hover"},
                                {"alpha-beta", "1,0,0,0"},
                                {"carry-basis", "true"},
                                {"shots", "0"},
                                {"seed", "1"}}),
                     teleport_cmd};
    t["qrf-decohere"] = {{{"group", "u1"},
                          {"frame", "phase"},
                          {"size", "4"},
                          {"system-dim", "2"},
                          {"psi", ""},
                          {"points", "64"},
                          {"quadrature", "0"}},
                         qrf_decohere};
    t["qrf-overlap"] = {{{"curve", "u1-phase"}, {"sizes", "1,2,4,8,16"}, {"points", "201"}},
                        qrf_overlap};
    t["bhd"] = {{{"frame-a", "coherent"},
                 {"size-a", "1"},
                 {"phase-a", "0"},
                 {"frame-b", "coherent"},
                 {"size-b", "1"},
                 {"phase-b", "0"},
                 {"tail-tol", "1e-10"}},
                bhd};
    for (auto& [name, c] : t) {
      c.defaults["out"] = "-";
      c.defaults["manifest"] = "";
    }
    return t;
  }();
  return table;
}

const Command& command(const std::string& name) {
  const auto it = commands().find(name);
  if (it == commands().end()) throw ConfigError("command", "unknown command '" + name + "'");
  return it->second;
}

void write_file(const std::string& path, const std::string& key, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError(key, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ConfigError(key, "cannot write '" + path + "'");
}

}  // namespace

Params parse_config(std::istream& is, const std::string& source) {
  Params out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw ConfigError(line, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", where + ": empty key");
    if (out.count(key)) throw ConfigError(key, where + ": duplicate key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Params read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot read '" + path + "'");
  return parse_config(f, path);
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : commands()) n.push_back(k);
    return n;
  }();
  return names;
}

Params command_defaults(const std::string& name) { return command(name).defaults; }

int run(const std::string& name, const Params& given, std::ostream& stdout_sink,
        std::ostream& diag) {
  try {
    const Command& cmd = command(name);
    Params p = cmd.defaults;
    for (const auto& [k, v] : given) {
      if (!p.count(k)) throw ConfigError(k, "unknown key '" + k + "' for " + name);
      p[k] = v;
    }
    if (p.count("state") && !p.at("state").empty()) {
      for (const auto& [k, v] : read_config_file(p.at("state"))) {
        if (!kStateKeys.count(k)) throw ConfigError(k, "key '" + k + "' not allowed in a state file");
        if (!given.count(k)) p[k] = v;
      }
    }
    std::ostringstream artifact;
    cmd.run(Args(p), artifact);

    const std::string& out = p.at("out");
    std::string manifest = p.at("manifest");
    if (manifest.empty() && out != "-") manifest = out + ".manifest";
    if (out == "-")
      stdout_sink << artifact.str();
    else
      write_file(out, "out", artifact.str());
    if (!manifest.empty()) {
      std::ostringstream m;
      m << "command = " << name << '\n';
      for (const auto& [k, v] : p) m << k << " = " << v << '\n';
      write_file(manifest, "manifest", m.str());
    }
    return kOk;
  } catch (const ConfigError& e) {
    diag << "config error: key '" << e.key() << "': " << one_line(e.what()) << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    diag << "numeric failure: " << one_line(e.what()) << '\n';
    return kNumericFailure;
  }
}

int main(const std::vector<std::string>& args, std::ostream& stdout_sink, std::ostream& diag) {
  CLI::App app{"Relativistic quantum information pipelines"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  static const std::map<std::string, std::string> about = {
      {"bhd", "balanced-homodyne statistics of two frames"},
      {"cow-table", "gravity-induced interferometer phase table"},
      {"measure", "Stern-Gerlach and polariser transcripts"},
      {"qrf-decohere", "frame kernel and decohered system state"},
      {"qrf-overlap", "frame overlap curves over sizes"},
      {"teleport", "teleportation along transported worldlines"},
      {"transport-fermion", "spin-1/2 transport along a worldline"},
      {"transport-photon", "polarisation transport along a null ray"}};
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->allow_extras();
    sub->add_option("--config", config_path, "key = value file");
    for (const auto& [k, def] : command_defaults(name))
      options[name][k] = sub->add_option("--" + k, values[name][k], "default: " + def);
  }
  if (!args.empty() && args[0].rfind('-', 0) != 0 && !commands().count(args[0])) {
    diag << "config error: key 'command': unknown command '" << args[0] << "'\n";
    return kConfigError;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    stdout_sink << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kOk;
    diag << "config error: " << one_line(e.what()) << '\n';
    return kConfigError;
  }
  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  for (const auto& extra : sub->remaining()) {
    std::string key = extra;
    key.erase(0, key.find_first_not_of('-'));
    diag << "config error: key '" << key << "': unknown key for " << name << '\n';
    return kConfigError;
  }
  Params given;
  try {
    if (!config_path.empty()) given = read_config_file(config_path);
  } catch (const ConfigError& e) {
    diag << "config error: key '" << e.key() << "': " << one_line(e.what()) << '\n';
    return kConfigError;
  }
  for (const auto& [k, opt] : options[name])
    if (opt->count() > 0) given[k] = values[name][k];
  return run(name, given, stdout_sink, diag);
}

}  // namespace rqi::cli
