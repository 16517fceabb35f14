#include "rqi/cow.hpp"

#include "rqi/core.hpp"

#include <iomanip>
#include <sstream>

namespace rqi::cow {

PrecisionScope::PrecisionScope(unsigned digits) : saved_(Real::default_precision()) {
  Real::default_precision(digits);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

namespace {

Real parse(const std::string& s, const char* name, bool allow_zero = false) {
  try {
    Real v(s);
    if (!(v > 0) && !(allow_zero && v == 0))
      throw Error(Errc::InvalidArgument, std::string(name) + " must be positive");
    return v;
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(Errc::InvalidArgument, std::string(name) + " is not a number: " + s);
  }
}

// Runs f at the configured precision and rounds nothing on the way out.
template <class F>
Real at_precision(const Config& cfg, F f) {
  PrecisionScope scope(cfg.precision_digits);
  return f(Params(cfg));
}

// 1 - sqrt(1 - 2x) without cancellation.
Real weak_root(const Params& p) {
  const Real x = p.dz * p.g / (p.v1 * p.v1);
  const Real r = 1 - 2 * x;
  if (r < 0) throw Error(Errc::NegativeRadicand, "particle cannot reach the upper path");
  return 2 * x / (1 + sqrt(r));
}

}  // namespace

Params::Params(const Config& cfg)
    : m(parse(cfg.mass, "mass")),
      v1(parse(cfg.speed_v1, "speed_v1")),
      dz(parse(cfg.delta_z, "delta_z", true)),
      ell(parse(cfg.ell, "ell")),
      g(parse(cfg.g, "g")),
      c(kSpeedOfLight),
      hbar(kHbar) {
  if (cfg.precision_digits < 10) throw Error(Errc::InvalidArgument, "precision_digits < 10");
  if (!(v1 < c)) throw Error(Errc::InvalidArgument, "speed_v1 must be below c");
  gamma1 = 1 / sqrt(1 - (v1 * v1) / (c * c));
}

Real exact(const Config& cfg) {
  return at_precision(cfg, [](const Params& p) {
    // With d = 1 - 1/g00 and beta^2 = 1 - 1/gamma^2:
    // v1 - v2 / g00 = c d / (beta + sqrt(beta^2 - d))
    const Real a = p.dz * p.g / (p.c * p.c);
    const Real d = a * (2 + a) / ((1 + a) * (1 + a));
    const Real beta = p.v1 / p.c;
    const Real r = beta * beta - d;
    if (r < 0) throw Error(Errc::ImaginaryVelocity, "particle cannot reach the upper path");
    const Real dv = p.c * d / (beta + sqrt(r));
    return Real(p.m * p.ell * p.gamma1 / p.hbar * dv);
  });
}

Real weak_field(const Config& cfg) {
  return at_precision(cfg, [](const Params& p) {
    return Real(p.m * p.ell * p.v1 * p.gamma1 / p.hbar * weak_root(p));
  });
}

Real small_dv(const Config& cfg) {
  return at_precision(cfg, [](const Params& p) {
    return Real(p.m * p.ell * p.gamma1 * p.dz * p.g / (p.hbar * p.v1));
  });
}

Real nonrelativistic(const Config& cfg) {
  return at_precision(
      cfg, [](const Params& p) { return Real(p.m * p.ell * p.v1 / p.hbar * weak_root(p)); });
}

Real g2_correction(const Config& cfg) {
  return at_precision(cfg, [](const Params& p) {
    const Real x = p.dz * p.g;
    return Real(p.m * p.ell / p.hbar * (x / p.v1 + x * x / (4 * p.v1 * p.v1 * p.v1)));
  });
}

Real standard(const Config& cfg) {
  return at_precision(cfg, [](const Params& p) {
    return Real(p.m * p.dz * p.ell * p.g / (p.hbar * p.v1));
  });
}

Real internal_lower(const Config& cfg) {
  return at_precision(cfg, [](const Params& p) {
    return Real(p.m * p.c * p.c / p.hbar * p.ell / (p.gamma1 * p.v1));
  });
}

std::vector<Row> table(const Config& cfg) {
  if (cfg.precision_digits < 40)
    throw Error(Errc::InvalidArgument, "the table needs precision_digits >= 40");
  PrecisionScope scope(cfg.precision_digits);
  const Real ex = exact(cfg), cw = standard(cfg);
  std::vector<Row> rows;
  auto add = [&](const char* label, const Real& v) {
    rows.push_back({label, v, Real(v - cw), Real(v - ex)});
  };
  add("exact", ex);
  add("weak_field", weak_field(cfg));
  add("small_dv", small_dv(cfg));
  add("nonrelativistic", nonrelativistic(cfg));
  add("g2_correction", g2_correction(cfg));
  add("cow_standard", cw);
  return rows;
}

std::string format(const Real& x, int significant_digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(significant_digits - 1) << x;
  return os.str();
}

}  // namespace rqi::cow
