#pragma once

#include <cmath>
#include <complex>

#include "nsbf/coefficients.hpp"
#include "nsbf/liouville.hpp"
#include "nsbf/oracles.hpp"
#include "nsbf/seed.hpp"
#include "nsbf/solver.hpp"

namespace nsbf::test {

// Transform, seed and coefficients for one problem on the default grid.
struct Built {
  SLProblem problem;
  LiouvilleData data;
  SeedSolution seed;
  CoefficientSet coeffs;
};

inline Built build(const SLProblem& problem, std::size_t m = 2001, int N = 50) {
  Built b;
  b.problem = problem;
  b.data = build_liouville(problem, make_grid(problem.A, problem.B, m));
  b.seed = compute_seed(problem, b.data);
  CoefficientOptions co;
  co.N = N;
  b.coeffs = compute_coefficients(b.seed, b.data, co);
  return b;
}

// Built once per process.
inline const Built& kamke() {
  static const Built b = build(kamke_problem());
  return b;
}

inline const Built& degenerate() {
  static const Built b = build(degenerate_problem(), 2001, 10);
  return b;
}

// Closed forms for the exponential-weight problem on [0, 2].
inline cplx kamke_g(double y) { return (1.0 + cplx(-1.0, 1.0) * y) * std::exp(y); }
inline double kamke_rho(double y) { return std::pow(1.0 + y * y, 0.25) * std::exp(-y); }
inline double kamke_b() { return 0.5 * (2.0 * std::sqrt(5.0) + std::asinh(2.0)); }

inline double max_abs_diff(const SampledFn& f, const SampledFn& g, std::size_t from = 0) {
  double m = 0.0;
  for (std::size_t i = from; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

}  // namespace nsbf::test
