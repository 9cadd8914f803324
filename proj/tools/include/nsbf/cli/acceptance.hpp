#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nsbf::cli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured values against the pinned bounds
};

struct AcceptanceOptions {
  bool quick = false;  // 20 eigenvalues instead of 100
  std::optional<std::filesystem::path> cache;
};

/// The ten acceptance criteria on the exponential-weight test problem and
/// the degenerate problem. Each criterion is evaluated even when an earlier
/// one fails; exceptions turn into failures carrying the message.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log);

/// "[PASS] 1 name: detail" per criterion; returns true when all pass.
bool print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace nsbf::cli
