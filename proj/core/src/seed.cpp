#include "nsbf/seed.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

namespace odeint = boost::numeric::odeint;
// (g, p g'), integrated in long double so that the step-size-controlled error
// of g sits well below double rounding.
using State = std::array<long double, 2>;

// Fundamental solution of (p g')' = q g with the given data at A, sampled at
// every grid node. Returns g and g'.
std::pair<std::vector<long double>, std::vector<long double>> integrate_homogeneous(
    const SLProblem& problem, const Grid& grid, State start, double tol) {
  auto rhs = [&](const State& s, State& ds, long double y) {
    const double yd = static_cast<double>(y);
    ds[0] = s[1] / problem.p(yd);
    ds[1] = problem.q(yd) * s[0];
  };
  std::vector<long double> g(grid.size()), gp(grid.size());
  std::size_t k = 0;
  auto observe = [&](const State& s, long double y) {
    g[k] = s[0];
    gp[k] = s[1] / problem.p(static_cast<double>(y));
    ++k;
  };
  using Stepper = odeint::runge_kutta_fehlberg78<State, long double>;
  auto stepper = odeint::make_controlled<Stepper>(static_cast<long double>(tol),
                                                  static_cast<long double>(tol));
  const std::vector<long double> pts(grid.points().begin(), grid.points().end());
  odeint::integrate_times(stepper, rhs, start, pts.begin(), pts.end(),
                          static_cast<long double>(grid.step()), observe);
  if (k != grid.size()) throw NumericalError("seed integration did not reach every node");
  return {std::move(g), std::move(gp)};
}

bool keeps_sign(const std::vector<long double>& v) {
  long double lo = v[0], hi = v[0], amax = 0.0L;
  for (long double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    amax = std::max(amax, std::abs(x));
  }
  const long double margin = 1e-6L * amax;
  return lo > margin || hi < -margin;
}

}  // namespace

SeedSolution compute_seed(const SLProblem& problem, const LiouvilleData& data,
                          const SeedOptions& options) {
  const Grid& grid = data.y();
  const double rho_a = data.rho[0].real();
  using lc = std::complex<long double>;
  const long double rho_a_ext = data.rho_ext.empty() ? rho_a : data.rho_ext[0];

  auto [g1, g1p] = integrate_homogeneous(problem, grid, {1.0L, 0.0L}, options.tolerance);

  SeedSolution seed;
  const std::size_t m = grid.size();
  seed.g_ext.resize(m);
  seed.g_prime_ext.resize(m);
  if (options.prefer_real && keeps_sign(g1)) {
    for (std::size_t i = 0; i < m; ++i) {
      seed.g_ext[i] = g1[i] / rho_a_ext;
      seed.g_prime_ext[i] = g1p[i] / rho_a_ext;
    }
    seed.real = true;
  } else {
    auto [g2, g2p] = integrate_homogeneous(problem, grid, {0.0L, 1.0L}, options.tolerance);
    for (std::size_t i = 0; i < m; ++i) {
      seed.g_ext[i] = lc(g1[i], g2[i]) / rho_a_ext;
      seed.g_prime_ext[i] = lc(g1p[i], g2p[i]) / rho_a_ext;
    }
  }
  std::vector<cplx> g(m), gp(m);
  for (std::size_t i = 0; i < m; ++i) {
    g[i] = cplx(static_cast<double>(seed.g_ext[i].real()), static_cast<double>(seed.g_ext[i].imag()));
    gp[i] = cplx(static_cast<double>(seed.g_prime_ext[i].real()),
                 static_cast<double>(seed.g_prime_ext[i].imag()));
  }
  seed.g = SampledFn(data.grid, std::move(g), seed.real);
  seed.g_prime = SampledFn(data.grid, std::move(gp), seed.real);

  if (!seed.g.all_finite() || !seed.g_prime.all_finite())
    throw NumericalError("seed integration produced non-finite values");
  seed.min_abs_g = seed.g.min_abs();
  const double max_abs_g = seed.g.max_abs();
  if (!(seed.min_abs_g > 1e-12 * max_abs_g)) {
    std::ostringstream os;
    os << "seed solution nearly vanishes: min |g| = " << seed.min_abs_g
       << ", max |g| = " << max_abs_g;
    throw NumericalError(os.str());
  }

  seed.h = data.sqrt_p_over_r[0].real() *
           (seed.g_prime[0] / seed.g[0] + data.rho_prime[0].real() / rho_a);
  return seed;
}

FormalPowers formal_powers(const SeedSolution& seed, const LiouvilleData& data, int K) {
  if (K < 0) throw DomainError("formal powers need K >= 0");
  const auto g2 = seed.g * seed.g;
  const auto w_inv = reciprocal(g2 * data.p);  // 1 / (g^2 p)
  const auto w_dir = g2 * data.r;              // g^2 r
  const auto inv_g = reciprocal(seed.g);

  FormalPowers fp;
  // The ladders are carried as Y^(n) / n! and scaled back on exposure.
  SampledFn y_norm = SampledFn::constant(data.grid, 1.0);
  SampledFn yt_norm = y_norm;
  for (int n = 0; n <= K; ++n) {
    if (n > 0) {
      const bool odd = (n % 2) == 1;
      y_norm = cumulative_integral(y_norm * (odd ? w_inv : w_dir));
      yt_norm = cumulative_integral(yt_norm * (odd ? w_dir : w_inv));
    }
    // n! overflows before the ladders do, so scale by sqrt(n!) twice.
    const double log_fact = std::lgamma(n + 1.0);
    const double limit = std::log(1e300);
    const double half = std::exp(0.5 * log_fact);
    if (!(std::log(y_norm.max_abs()) + log_fact <= limit) || !(std::log(yt_norm.max_abs()) + log_fact <= limit)) {
      std::ostringstream os;
      os << "formal power ladder overflows at n = " << n << "; use a smaller K";
      throw RangeError(os.str());
    }
    auto Y = y_norm * half * half;
    auto Yt = yt_norm * half * half;
    const bool odd = (n % 2) == 1;
    fp.Phi.push_back(seed.g * (odd ? Y : Yt));
    fp.Psi.push_back(inv_g * (odd ? Yt : Y));
    fp.Y.push_back(std::move(Y));
    fp.Y_tilde.push_back(std::move(Yt));
  }
  return fp;
}

}  // namespace nsbf
