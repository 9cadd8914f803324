#pragma once

#include <complex>
#include <vector>

#include "nsbf/grid.hpp"
#include "nsbf/liouville.hpp"

namespace nsbf {

/// Zero-free solution g of (p g')' - q g = 0 with g(A) = 1/rho(A).
struct SeedSolution {
  SampledFn g;
  SampledFn g_prime;
  cplx h;            // f'(0) of the Schroedinger-side seed f = rho g
  double min_abs_g;  // non-vanishing certificate
  bool real = false;
  // g and g' before rounding to double, used by the coefficient recurrence.
  std::vector<std::complex<long double>> g_ext, g_prime_ext;
};

struct SeedOptions {
  bool prefer_real = true;
  double tolerance = 1e-17;  // absolute and relative, long double integration
};

/// Integrates the lambda = 0 equation from A for the two real fundamental
/// solutions (g1(A) = 1, p g1'(A) = 0) and (g2(A) = 0, p g2'(A) = 1). The
/// seed is g1 / rho(A) when g1 keeps its sign on the grid (and prefer_real is
/// set), otherwise (g1 + i g2) / rho(A), which cannot vanish because the two
/// real solutions have a non-zero Wronskian.
SeedSolution compute_seed(const SLProblem& problem, const LiouvilleData& data,
                          const SeedOptions& options = {});

/// Recursive-integral ladders Y^(n), Y~^(n) and the formal powers built from
/// them. Phi_k reduces to (y - A)^k when p = r = 1 and q = 0.
struct FormalPowers {
  std::vector<SampledFn> Y;
  std::vector<SampledFn> Y_tilde;
  std::vector<SampledFn> Phi;
  std::vector<SampledFn> Psi;
};

/// Builds Phi_0..Phi_K and Psi_0..Psi_K. Throws RangeError when a ladder
/// exceeds 1e300.
FormalPowers formal_powers(const SeedSolution& seed, const LiouvilleData& data, int K);

}  // namespace nsbf
