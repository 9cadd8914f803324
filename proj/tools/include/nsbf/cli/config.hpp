#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "nsbf/error.hpp"
#include "nsbf/liouville.hpp"
#include "nsbf/solver.hpp"

namespace nsbf::cli {

// Bad or missing configuration input; maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// One coefficient: an expression in y or a two-column table file.
struct CoefficientSource {
  std::string expression;
  std::filesystem::path table;
};

struct ProblemConfig {
  std::string builtin;  // "kamke", "degenerate" or empty
  CoefficientSource p, q, r;
  double A = 0.0;
  double B = 1.0;
  BoundarySpec bc;
  std::size_t grid = 2001;
  int N = -1;       // truncation used for evaluation; -1 picks N_opt
  int N_max = 50;   // coefficients computed
  bool cleanup = true;
  std::filesystem::path cache;
};

/// Reads the INI-style file. Relative table and cache paths resolve against
/// the file's directory.
///
///   [problem]   builtin | p, q, r (expressions) | p_file, q_file, r_file; A; B
///   [boundary]  a1, a2, b1, b2
///   [numerics]  grid, N (integer or auto), N_max, cleanup
///   [output]    cache
ProblemConfig load_config(const std::filesystem::path& path);

/// The configuration of a built-in problem with its default boundary data.
ProblemConfig builtin_config(const std::string& name);

/// Throws ConfigError on invariant violations (grid odd and >= 201, N range,
/// boundary pairs, interval).
void validate(const ProblemConfig& config);

/// Builds p, q, r with analytic derivatives: symbolic for expressions, from
/// the interpolant for tables. Throws cli::ParseError or ConfigError.
SLProblem make_problem(const ProblemConfig& config);

/// Everything the coefficients depend on, as text; hashed for the cache key.
std::string canonical_form(const ProblemConfig& config);

}  // namespace nsbf::cli
