#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsbf/grid.hpp"

namespace nsbf {

/// A real coefficient function with optional analytic first and second
/// derivatives. Missing derivatives are estimated numerically on the grid.
struct CoefficientFn {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;

  double operator()(double y) const { return value(y); }
  bool has_d1() const noexcept { return static_cast<bool>(d1); }
  bool has_d2() const noexcept { return static_cast<bool>(d2); }
};

/// -(p v')' + q v = lambda r v on [A, B], with p, r > 0.
struct SLProblem {
  CoefficientFn p;
  CoefficientFn q;
  CoefficientFn r;
  double A = 0.0;
  double B = 1.0;
  std::string name;
};

/// Change of variables x = l(y), u = rho v sampled on the y-grid.
struct LiouvilleData {
  GridPtr grid;
  SampledFn p, q, r;
  SampledFn p_prime, r_prime;
  SampledFn sqrt_r_over_p;  // l'(y)
  SampledFn sqrt_p_over_r;
  SampledFn l;
  SampledFn rho;
  SampledFn rho_prime;
  double b = 0.0;  // l(B)
  bool analytic_derivatives = false;
  // Extended-precision l, rho, rho' for the coefficient recurrence. With
  // analytic derivatives rho is exp of the integrated log-derivative, which
  // keeps node-to-node rounding out of rho.
  std::vector<long double> l_ext, rho_ext, rho_prime_ext, srp_ext;

  const Grid& y() const noexcept { return *grid; }
};

/// Samples p, q, r on the grid, checks positivity and builds l, rho, rho'.
/// Throws PositivityError naming the first offending node.
LiouvilleData build_liouville(const SLProblem& problem, GridPtr grid);

/// Q(l(y)) from the logarithmic-derivative form
///   q/r + p/(4r) [ (p'/p + r'/r)' + 3/4 (p'/p)^2 + 1/2 (p'/p)(r'/r) - 1/4 (r'/r)^2 ].
/// Second derivatives come from the problem when available.
SampledFn transformed_potential(const SLProblem& problem, const LiouvilleData& data);

/// Q(l(y)) = q/r - (rho/r) [p (1/rho)']' with both derivatives numerical.
/// Its distance from transformed_potential measures derivative quality.
SampledFn transformed_potential_alt(const LiouvilleData& data);

/// v(y) = u(l(y)) / rho(y) for u sampled on an x-grid covering [0, b].
SampledFn apply_L_inverse(const SampledFn& u, const LiouvilleData& data);

/// u(l(y)) = rho(y) v(y), returned on the y-grid.
SampledFn apply_L(const SampledFn& v, const LiouvilleData& data);

}  // namespace nsbf
