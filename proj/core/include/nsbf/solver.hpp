#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsbf/coefficients.hpp"
#include "nsbf/grid.hpp"
#include "nsbf/liouville.hpp"
#include "nsbf/seed.hpp"

namespace nsbf {

/// a1 v(A) + a2 v'(A) = 0 and b1 v(B) + b2 v'(B) = 0.
struct BoundarySpec {
  double a1 = 1.0, a2 = 0.0;
  double b1 = 1.0, b2 = 0.0;

  /// Throws DomainError when either pair is (0, 0).
  void validate() const;
};

struct EigenResult {
  int index = 0;                // 1-based, in increasing lambda
  double omega = 0.0;           // sqrt(|lambda|)
  double lambda = 0.0;
  double char_residual = 0.0;   // |Delta(omega_k)| relative to the bracket scale
  int refinement_iterations = 0;
  bool imaginary = false;       // omega on the imaginary axis, lambda < 0
};

struct EigenOptions {
  double omega_max = 0.0;      // scan (0, omega_max]; 0 with count > 0 means "as needed"
  int count = 0;               // keep at most this many (0 = all found)
  double step_factor = 0.2;    // scan step = step_factor * pi / b
  double lambda_floor = 0.0;   // scan negative lambda down to this value when < 0
  unsigned threads = 1;
};

struct EigenSearch {
  std::vector<EigenResult> eigenvalues;
  std::vector<std::string> warnings;
  double scan_step = 0.0;
  int rescans = 0;
};

struct DenseSolution {
  std::vector<double> y;
  std::vector<cplx> u;
  std::vector<cplx> du;
};

/// Evaluates the truncated series for v1, v2 and their derivatives over the
/// precomputed coefficients. Copies share the immutable state.
class SolutionEvaluator {
 public:
  SolutionEvaluator(LiouvilleData data, SeedSolution seed, CoefficientSet coeffs, int N_used);

  int N() const noexcept;
  const LiouvilleData& data() const noexcept;
  const SeedSolution& seed() const noexcept;
  const CoefficientSet& coefficients() const noexcept;

  struct Pair {
    cplx v1;
    cplx v2;
  };
  struct Basis {
    std::vector<cplx> v1;
    std::vector<cplx> v2;
  };

  /// v1^N, v2^N at a grid node. omega = 0 is rejected with DomainError.
  Pair basis_at(cplx omega, std::size_t node) const;
  /// v1^N', v2^N' at a grid node.
  Pair basis_prime_at(cplx omega, std::size_t node) const;
  /// Both at once, sharing one Bessel batch.
  std::pair<Pair, Pair> basis_and_prime_at(cplx omega, std::size_t node) const;
  /// v1^N, v2^N at an arbitrary y in [A, B] via local interpolation of the
  /// coefficients.
  Pair basis_at_y(cplx omega, double y) const;

  Basis eval_basis(cplx omega) const;
  Basis eval_basis_prime(cplx omega) const;

  /// u = c1 v1 + c2 v2 matched to (u(A), u'(A)). omega = 0 uses the exact
  /// lambda = 0 basis g, g \int 1/(p g^2).
  DenseSolution solve_ivp(cplx omega, cplx u_a, cplx du_a) const;
  std::pair<cplx, cplx> solve_ivp_at(cplx omega, cplx u_a, cplx du_a, std::size_t node) const;

  /// b1 u(B) + b2 u'(B) for the solution with a1 u(A) + a2 u'(A) = 0 and
  /// |(u(A), u'(A))| = 1.
  cplx characteristic(cplx omega, const BoundarySpec& bc) const;

  /// Brackets sign changes of the characteristic function on a scan of step
  /// step_factor * pi / b and refines each by bisection followed by secant.
  EigenSearch find_eigenvalues(const BoundarySpec& bc, const EigenOptions& options) const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

}  // namespace nsbf
