#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nsbf/cli/commands.hpp"
#include "nsbf/cli/expression.hpp"

using namespace nsbf::cli;

namespace {

struct Common {
  std::string config;
  std::string builtin;
  std::optional<std::size_t> grid;
  std::optional<std::string> N;
  std::optional<std::string> out;

  void add(CLI::App* app) {
    auto* src = app->add_option("config", config, "problem configuration file");
    app->add_option("--builtin", builtin, "built-in problem instead of a file (kamke, degenerate)")->excludes(src);
    app->add_option("--grid", grid, "grid size (odd, >= 201)");
    app->add_option("--N", N, "truncation N, or auto");
    app->add_option("--out", out, "output file (stdout when absent)");
  }

  ProblemConfig resolve() const {
    if (config.empty() && builtin.empty()) throw ConfigError("give a configuration file or --builtin");
    ProblemConfig c = config.empty() ? builtin_config(builtin) : load_config(config);
    if (grid) c.grid = *grid;
    if (N) {
      if (*N == "auto") {
        c.N = -1;
      } else {
        try {
          c.N = std::stoi(*N);
        } catch (const std::exception&) {
          throw ConfigError("--N expects an integer or auto, got '" + *N + "'");
        }
        c.N_max = std::max(c.N_max, c.N);
      }
    }
    validate(c);
    return c;
  }

  std::optional<std::filesystem::path> out_path() const {
    if (!out) return std::nullopt;
    return std::filesystem::path(*out);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sturm-Liouville solutions and eigenvalues by truncated Neumann series of Bessel functions"};
  app.require_subcommand(1);

  Common coeffs_args, eigs_args, solve_args;

  auto* coeffs = app.add_subcommand("coeffs", "compute coefficients, print the residual report");
  coeffs_args.add(coeffs);

  auto* eigs = app.add_subcommand("eigs", "eigenvalues as CSV: k, omega, lambda, residual");
  eigs_args.add(eigs);
  EigsOptions eo;
  eigs->add_option("--omega-max", eo.omega_max, "scan omega in (0, omega-max]");
  eigs->add_option("--count", eo.count, "number of eigenvalues");
  eigs->add_option("--lambda-floor", eo.lambda_floor, "also search lambda in [floor, 0) when negative");
  eigs->add_option("--threads", eo.threads, "scan threads");
  eigs->add_flag("--strict", eo.strict, "exit 1 on count mismatch or scan warnings");

  auto* solve = app.add_subcommand("solve", "initial-value solution on the grid as CSV");
  solve_args.add(solve);
  std::string omega = "0", ua = "1", dua = "0";
  bool check = false;
  solve->add_option("--omega", omega, "spectral parameter, real or a+bi");
  solve->add_option("--ua", ua, "u(A)");
  solve->add_option("--dua", dua, "u'(A)");
  solve->add_flag("--check", check, "add |u - oracle| from a reference integration");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  SelftestOptions so;
  std::string cache;
  selftest->add_flag("--quick", so.quick, "20 eigenvalues instead of 100");
  selftest->add_option("--cache", cache, "coefficient cache file for the test problem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (*coeffs) {
      CoeffsOptions o;
      o.out = coeffs_args.out_path();
      return cmd_coeffs(coeffs_args.resolve(), o, std::cout, std::cerr);
    }
    if (*eigs) {
      eo.out = eigs_args.out_path();
      return cmd_eigs(eigs_args.resolve(), eo, std::cout, std::cerr);
    }
    if (*solve) {
      SolveOptions o;
      o.omega = parse_complex(omega);
      o.u_a = parse_complex(ua);
      o.du_a = parse_complex(dua);
      o.check = check;
      o.out = solve_args.out_path();
      return cmd_solve(solve_args.resolve(), o, std::cout, std::cerr);
    }
    if (*selftest) {
      if (!cache.empty()) so.cache = cache;
      return cmd_selftest(so, std::cout, std::cerr);
    }
  } catch (const nsbf::cli::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kInputError;
  } catch (const nsbf::PositivityError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const nsbf::DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const nsbf::InvalidGridError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}
