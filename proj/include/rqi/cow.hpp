// Gravitational neutron interferometry in extended precision, SI units.
#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

namespace rqi::cow {

using Real = boost::multiprecision::mpfr_float;

// CODATA exact / recommended values.
inline constexpr const char* kSpeedOfLight = "299792458";
inline constexpr const char* kHbar = "1.054571817e-34";

// Decimal strings so inputs enter the working precision without binary rounding.
struct Config {
  std::string mass = "1.67e-27";     // kg
  std::string speed_v1 = "2794";     // m/s
  std::string delta_z = "0.0316";    // m
  std::string ell = "0.0316";        // m
  std::string g = "9.81";            // m/s^2
  unsigned precision_digits = 50;
};

// Sets the working precision for the lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

// Parsed, validated parameters. Construct inside a PrecisionScope.
struct Params {
  Real m, v1, dz, ell, g, c, hbar, gamma1;
  explicit Params(const Config& cfg);
};

Real exact(const Config& cfg);
Real weak_field(const Config& cfg);
Real small_dv(const Config& cfg);
Real nonrelativistic(const Config& cfg);
Real g2_correction(const Config& cfg);
Real standard(const Config& cfg);

// (m c^2 / hbar) tau for the lower leg, tau = ell / (gamma1 v1).
Real internal_lower(const Config& cfg);

struct Row {
  std::string label;
  Real delta_theta;
  Real diff_from_cow;
  Real diff_from_exact;
};

std::vector<Row> table(const Config& cfg);

std::string format(const Real& x, int significant_digits);

}  // namespace rqi::cow
