#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "nsbf/grid.hpp"
#include "nsbf/liouville.hpp"
#include "nsbf/solver.hpp"

namespace nsbf {

// Reference machinery for tests and the self-test. Nothing here is used by
// the coefficient or evaluation pipeline.

struct ReferenceSolution {
  std::vector<double> y;
  std::vector<cplx> u;
  std::vector<cplx> du;
  double tolerance = 0.0;
  double halving_change = 0.0;  // endpoint change when re-run at tolerance / 2
  std::string method;
};

struct ReferenceOptions {
  double tolerance = 1e-13;
  bool halving_check = true;
};

/// Integrates (v, p v')' = (p v', (q - lambda r) v) in long double with an
/// adaptive Bulirsch-Stoer stepper and samples it at the grid nodes.
/// Throws DomainError for tolerance < 1e-14 and NumericalError when the
/// halving check changes the endpoint by more than 10 x tolerance.
ReferenceSolution integrate_reference(const SLProblem& problem, const Grid& grid, cplx lambda,
                                      cplx u_a, cplx du_a, const ReferenceOptions& options = {});

/// (u(B), u'(B)) only, same integrator.
std::pair<cplx, cplx> integrate_reference_endpoint(const SLProblem& problem, cplx lambda, cplx u_a,
                                                   cplx du_a, double tolerance = 1e-13);

inline constexpr double kKummerArgumentCap = 200.0;

/// u(y) and u'(y) for the exponential-weight test problem with
/// u(0) = u'(0) = 1:
///   u = exp(y - i y^2 omega / 2) 1F1((1 + i omega)/4, 1/2, i omega y^2),
/// summed in 120-digit complex arithmetic. Throws RangeError when
/// |omega y^2| exceeds kKummerArgumentCap.
std::pair<cplx, cplx> exact_kamke_solution(double omega, double y);

/// 1F1(a, b, z) by the ascending series in 120-digit arithmetic, rounded to
/// double. Exposed for tests; |z| is capped like exact_kamke_solution.
cplx hypergeometric_1f1(cplx a, cplx b, cplx z);

struct ReferenceEigenOptions {
  double tolerance = 1e-13;  // integrator tolerance
  double lambda_floor = 0.0; // also search lambda in [lambda_floor, 0) when < 0
  double step_factor = 0.2;
};

/// The first count eigenvalues lambda_k in increasing order, from roots of the
/// shooting determinant built on integrate_reference. count <= 200.
std::vector<double> reference_eigenvalues(const SLProblem& problem, const BoundarySpec& bc,
                                          int count, const ReferenceEigenOptions& options = {});

/// l(B) = \int_A^B sqrt(r/p) by adaptive Gauss-Kronrod.
double reference_transformed_length(const SLProblem& problem);

// Built-in problems.

/// p = r = 1, q = 0 on [A, B].
SLProblem degenerate_problem(double A = 0.0, double B = 3.141592653589793238);

/// p = e^{-2y}, q = -e^{-2y}, r = (1 + y^2) e^{-2y} on [0, 2], with analytic
/// derivatives.
SLProblem kamke_problem();

/// u'(0) = u(0), u'(2) = -u(2) for kamke_problem.
BoundarySpec kamke_boundary();

/// Smooth random coefficients p, r = exp(trigonometric sum) and q a
/// trigonometric sum, on [A, B]; reproducible for a given seed.
SLProblem random_smooth_problem(std::uint64_t seed, double A = 0.0, double B = 1.0, int modes = 3);

}  // namespace nsbf
