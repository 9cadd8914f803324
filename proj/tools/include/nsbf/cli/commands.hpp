#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "nsbf/cli/config.hpp"
#include "nsbf/coefficients.hpp"
#include "nsbf/solver.hpp"

namespace nsbf::cli {

enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kInputError = 2 };

/// Problem, transform, seed, coefficients and their verification, with the
/// coefficient set loaded from the cache when it matches.
struct Pipeline {
  SLProblem problem;
  LiouvilleData data;
  SeedSolution seed;
  CoefficientSet coeffs;
  ResidualReport report;
  int N_used = 0;
  bool cache_hit = false;

  SolutionEvaluator evaluator() const { return SolutionEvaluator(data, seed, coeffs, N_used); }
};

/// Cache key of a configuration: FNV-1a of its canonical form and the cache
/// format version.
std::uint64_t cache_key(const ProblemConfig& config);

/// Builds the pipeline. Cache problems are reported on log and never fatal.
Pipeline build_pipeline(const ProblemConfig& config, std::ostream& log);

/// Same, for an already constructed problem (used by the self-test).
Pipeline build_pipeline(const SLProblem& problem, const ProblemConfig& config, std::ostream& log);

/// "%.17g".
std::string format_real(double x);

struct CoeffsOptions {
  std::optional<std::filesystem::path> out;  // residual table CSV
};
int cmd_coeffs(const ProblemConfig& config, const CoeffsOptions& options, std::ostream& out,
               std::ostream& log);

struct EigsOptions {
  std::optional<double> omega_max;
  std::optional<int> count;
  bool strict = false;
  double lambda_floor = 0.0;
  unsigned threads = 1;
  std::optional<std::filesystem::path> out;
};
/// CSV columns k, omega, lambda, residual.
int cmd_eigs(const ProblemConfig& config, const EigsOptions& options, std::ostream& out,
             std::ostream& log);

struct SolveOptions {
  cplx omega = 0.0;
  cplx u_a = 1.0;
  cplx du_a = 0.0;
  bool check = false;
  std::optional<std::filesystem::path> out;
};
/// CSV columns y, re u, im u, re u', im u' (and |u - oracle| with check).
int cmd_solve(const ProblemConfig& config, const SolveOptions& options, std::ostream& out,
              std::ostream& log);

struct SelftestOptions {
  bool quick = false;
  std::optional<std::filesystem::path> cache;
};
int cmd_selftest(const SelftestOptions& options, std::ostream& out, std::ostream& log);

/// Parses "a", "a+bi", "a-bi", "bi" (j is accepted for i). Throws ConfigError.
cplx parse_complex(const std::string& text);

}  // namespace nsbf::cli
