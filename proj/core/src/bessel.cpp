#include "nsbf/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

constexpr double kSeriesRadius = 1e-4;

void series(cplx z, int N, std::span<cplx> out) {
  // j_n(z) = z^n / (2n+1)!! * (1 - z^2 / (2 (2n+3)) + z^4 / (8 (2n+3)(2n+5)) - ...)
  const cplx z2 = z * z;
  cplx lead = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) lead *= z / (2.0 * n + 1.0);
    const double a = 2.0 * n + 3.0;
    const cplx corr = 1.0 - z2 / (2.0 * a) + z2 * z2 / (8.0 * a * (a + 2.0)) -
                      z2 * z2 * z2 / (48.0 * a * (a + 2.0) * (a + 4.0));
    out[n] = lead * corr;
  }
}

cplx j0_closed(cplx z) { return std::sin(z) / z; }
cplx j1_closed(cplx z) { return (std::sin(z) / z - std::cos(z)) / z; }

void upward(cplx z, int N, std::span<cplx> out) {
  out[0] = j0_closed(z);
  if (N >= 1) out[1] = j1_closed(z);
  for (int n = 1; n < N; ++n) out[n + 1] = (2.0 * n + 1.0) / z * out[n] - out[n - 1];
}

void downward(cplx z, int N, std::span<cplx> out) {
  const int start = N + std::max(15, static_cast<int>(std::ceil(std::abs(z))));
  constexpr double kRescale = 1e200;
  cplx above = 0.0;    // j_{n+1}
  cplx current = 1e-30;  // j_n, arbitrary scale
  for (int n = start; n > 0; --n) {
    const cplx below = (2.0 * n + 1.0) / z * current - above;
    above = current;
    current = below;
    if (std::abs(current) > kRescale) {
      above /= kRescale;
      current /= kRescale;
      for (int k = n; k <= N; ++k) out[k] /= kRescale;
    }
    if (n - 1 <= N) out[n - 1] = current;
  }
  const cplx j0 = j0_closed(z);
  const cplx j1 = j1_closed(z);
  const cplx scale = (std::abs(j0) >= std::abs(j1) || N == 0) ? j0 / out[0] : j1 / out[1];
  for (int n = 0; n <= N; ++n) out[n] *= scale;
}

}  // namespace

void j_batch_into(cplx z, int N, std::span<cplx> out, BesselMethod method) {
  if (N < 0) throw DomainError("spherical Bessel batch needs N >= 0");
  if (N > kBesselOrderCap) {
    std::ostringstream os;
    os << "spherical Bessel order " << N << " exceeds the cap " << kBesselOrderCap;
    throw RangeError(os.str());
  }
  if (out.size() < static_cast<std::size_t>(N) + 1)
    throw DomainError("spherical Bessel output span too short");

  const double az = std::abs(z);
  if (az == 0.0) {
    std::fill(out.begin(), out.begin() + N + 1, cplx(0.0));
    out[0] = 1.0;
    return;
  }
  if (az < kSeriesRadius) {
    series(z, N, out);
    return;
  }
  const bool up = method == BesselMethod::upward ||
                  (method == BesselMethod::automatic && az >= static_cast<double>(N));
  if (up) {
    upward(z, N, out);
  } else {
    downward(z, N, out);
  }
}

std::vector<cplx> j_batch(cplx z, int N, BesselMethod method) {
  if (N < 0) throw DomainError("spherical Bessel batch needs N >= 0");
  std::vector<cplx> out(static_cast<std::size_t>(N) + 1);
  j_batch_into(z, N, out, method);
  return out;
}

double j_magnitude_bound(cplx z, int n) {
  const double log_bound = 0.5 * std::log(std::numbers::pi) + n * std::log(std::abs(z) / 2.0) +
                           std::abs(z.imag()) - std::lgamma(n + 1.5);
  return std::exp(log_bound);
}

}  // namespace nsbf
