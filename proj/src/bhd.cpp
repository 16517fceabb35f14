#include "rqi/qrf.hpp"

#include <algorithm>
#include <cmath>

namespace rqi::qrf {

namespace {

void require_u1(const FrameState& s) {
  if (frame_group(s.spec.kind) != Group::U1)
    throw Error(Errc::UnsupportedStateKind,
                std::string(frame_kind_name(s.spec.kind)) + " is not a U(1) state");
}

// (n_c, n_d) from (j, m).
std::pair<int, int> ports(double j, double m) {
  const long tj = std::lround(2 * j), tm = std::lround(2 * m);
  if (std::abs(2 * j - tj) > 1e-9 || std::abs(2 * m - tm) > 1e-9 || tj < 0 ||
      std::abs(tm) > tj || (tj - tm) % 2 != 0)
    throw Error(Errc::InvalidArgument, "need 2j, 2m integers with |m| <= j and j - m integer");
  return {static_cast<int>((tj + tm) / 2), static_cast<int>((tj - tm) / 2)};
}

// log |z|^(2n), with 0^0 = 1.
double log_pow2(double abs2, int n) {
  if (n == 0) return 0;
  if (abs2 == 0) return -INFINITY;
  return n * std::log(abs2);
}

}  // namespace

double bhd_probability_beamsplitter(double j, double m, const FrameState& A,
                                    const FrameState& B) {
  require_u1(A);
  require_u1(B);
  const auto [nc, nd] = ports(j, m);
  const int N = nc + nd;
  const int dA = static_cast<int>(A.vec.size()), dB = static_cast<int>(B.vec.size());
  using ld = long double;
  auto lf = [](int k) { return std::lgamma(static_cast<ld>(k) + 1); };
  std::complex<ld> amp = 0;
  // a^dag -> (c^dag + d^dag)/sqrt2, b^dag -> (-c^dag + d^dag)/sqrt2
  for (int kA = std::max(0, N - (dB - 1)); kA <= std::min(N, dA - 1); ++kA) {
    const int kB = N - kA;
    ld t = 0;
    for (int p = std::max(0, nc - kB); p <= std::min(kA, nc); ++p) {
      const int q = nc - p;
      const ld mag = std::exp(lf(kA) - lf(p) - lf(kA - p) + lf(kB) - lf(q) - lf(kB - q));
      t += (q % 2 ? -mag : mag);
    }
    t *= std::exp(0.5L * (lf(nc) + lf(nd) - lf(kA) - lf(kB)) - 0.5L * N * std::log(2.0L));
    amp += std::complex<ld>(A.vec(kA)) * std::complex<ld>(B.vec(kB)) * t;
  }
  return static_cast<double>(std::norm(amp));
}

double bhd_probability(double j, double m, const FrameState& A, const FrameState& B) {
  require_u1(A);
  require_u1(B);
  if (A.spec.kind != FrameKind::U1Coherent || B.spec.kind != FrameKind::U1Coherent)
    return bhd_probability_beamsplitter(j, m, A, B);
  const auto [nc, nd] = ports(j, m);
  const cd a = std::polar(A.spec.size, A.g.theta);
  const cd b = std::polar(B.spec.size, B.g.theta);
  const double lp = -std::norm(a) - std::norm(b) - std::lgamma(nc + 1.0) - std::lgamma(nd + 1.0) -
                    (nc + nd) * std::log(2.0) + log_pow2(std::norm(a - b), nc) +
                    log_pow2(std::norm(a + b), nd);
  return std::exp(lp);
}

double bhd_phase_total(double j, int s_A, int s_B) {
  const long N = std::lround(2 * j);
  if (std::abs(2 * j - N) > 1e-9) throw Error(Errc::InvalidArgument, "2j must be an integer");
  if (N < 0 || N > s_A + s_B) return 0;
  const long count = std::min({N, long(s_A), long(s_B), long(s_A + s_B) - N}) + 1;
  return double(count) / ((s_A + 1.0) * (s_B + 1.0));
}

std::vector<BhdEntry> bhd_distribution(const FrameState& A, const FrameState& B,
                                       double tail_tol) {
  require_u1(A);
  require_u1(B);
  int nmax;
  if (A.spec.kind == FrameKind::U1Coherent && B.spec.kind == FrameKind::U1Coherent) {
    const double t = std::hypot(A.spec.size, B.spec.size);
    nmax = coherent_cutoff(t, tail_tol);
  } else {
    nmax = static_cast<int>(A.vec.size() + B.vec.size()) - 2;
  }
  std::vector<BhdEntry> out;
  for (int N = 0; N <= nmax; ++N) {
    const double j = N / 2.0;
    for (int nc = N; nc >= 0; --nc) {
      const double m = nc - j;
      out.push_back({j, m, bhd_probability(j, m, A, B)});
    }
  }
  return out;
}

}  // namespace rqi::qrf
