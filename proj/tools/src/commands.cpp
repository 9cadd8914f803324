#include "nsbf/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include "nsbf/cli/acceptance.hpp"
#include "nsbf/cli/cache.hpp"
#include "nsbf/oracles.hpp"

namespace nsbf::cli {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t cache_key(const ProblemConfig& config) {
  return fnv1a(canonical_form(config) + "format=" + std::to_string(kCacheVersion));
}

Pipeline build_pipeline(const ProblemConfig& config, std::ostream& log) {
  for (const auto* src : {&config.p, &config.q, &config.r}) {
    if (!src->table.empty()) {
      log << "warning: " << src->table.string()
          << " is tabulated; derivatives come from an interpolant and accuracy may be lower\n";
    }
  }
  return build_pipeline(make_problem(config), config, log);
}

Pipeline build_pipeline(const SLProblem& problem, const ProblemConfig& config, std::ostream& log) {
  validate(config);
  Pipeline pl;
  pl.problem = problem;
  const auto grid = make_grid(problem.A, problem.B, config.grid);
  pl.data = build_liouville(problem, grid);
  pl.seed = compute_seed(problem, pl.data);

  const std::uint64_t key = cache_key(config);
  if (!config.cache.empty()) {
    std::string why;
    if (auto cs = read_cache(config.cache, key, grid, &why); cs && cs->N == config.N_max) {
      pl.coeffs = std::move(*cs);
      pl.cache_hit = true;
    } else if (std::filesystem::exists(config.cache)) {
      log << "warning: ignoring cache " << config.cache.string() << ": "
          << (cs ? std::string("different N") : why) << '\n';
    }
  }
  if (!pl.cache_hit) {
    CoefficientOptions co;
    co.N = config.N_max;
    co.cleanup = config.cleanup;
    pl.coeffs = compute_coefficients(pl.seed, pl.data, co);
    if (!config.cache.empty()) {
      try {
        write_cache(config.cache, key, pl.coeffs);
      } catch (const std::exception& e) {
        log << "warning: " << e.what() << '\n';
      }
    }
  }
  pl.report = verify_coefficients(pl.coeffs, pl.data, transformed_potential(problem, pl.data));
  pl.N_used = config.N >= 0 ? config.N : pl.report.N_opt;
  return pl;
}

namespace {

// Writes to the file when given, to out otherwise.
template <class F>
void emit(const std::optional<std::filesystem::path>& path, std::ostream& out, F&& body) {
  if (!path) {
    body(out);
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot write " + path->string());
  body(file);
}

}  // namespace

int cmd_coeffs(const ProblemConfig& config, const CoeffsOptions& options, std::ostream& out,
               std::ostream& log) {
  const Pipeline pl = build_pipeline(config, log);
  const auto& rep = pl.report;
  out << "# problem " << pl.problem.name << " on [" << format_real(pl.problem.A) << ", "
      << format_real(pl.problem.B) << "], grid " << config.grid << ", N_max " << config.N_max
      << (pl.cache_hit ? " (cached)" : "") << '\n';
  out << "# b " << format_real(pl.data.b) << ", h " << format_real(pl.seed.h.real()) << ' '
      << format_real(pl.seed.h.imag()) << (pl.seed.real ? " (real seed)" : " (complex seed)") << '\n';
  out << "# residuals over y >= " << format_real(rep.trim_from) << '\n';
  out << "# N_opt " << rep.N_opt << '\n';
  emit(options.out, out, [&](std::ostream& os) {
    os << "M,alpha_sum,alpha_alt,mu_sum,mu_alt,max,cut_alpha,cut_mu\n";
    for (const auto& row : rep.rows) {
      os << row.M << ',' << format_real(row.alpha_sum) << ',' << format_real(row.alpha_alt) << ','
         << format_real(row.mu_sum) << ',' << format_real(row.mu_alt) << ',' << format_real(row.max())
         << ',' << format_real(pl.coeffs.cut_alpha[row.M]) << ',' << format_real(pl.coeffs.cut_mu[row.M])
         << '\n';
    }
  });
  return kOk;
}

int cmd_eigs(const ProblemConfig& config, const EigsOptions& options, std::ostream& out,
             std::ostream& log) {
  if (options.omega_max && *options.omega_max < 0) throw ConfigError("--omega-max must be >= 0");
  if (options.count && *options.count < 0) throw ConfigError("--count must be >= 0");
  if (!options.omega_max && !options.count) throw ConfigError("give --omega-max or --count");

  auto write = [&](const std::vector<EigenResult>& eig) {
    emit(options.out, out, [&](std::ostream& os) {
      os << "k,omega,lambda,residual\n";
      for (const auto& e : eig)
        os << e.index << ',' << format_real(e.omega) << ',' << format_real(e.lambda)
           << ',' << format_real(e.char_residual) << '\n';
    });
  };
  if ((options.omega_max && *options.omega_max == 0.0) || (options.count && *options.count == 0)) {
    write({});
    return kOk;
  }

  const Pipeline pl = build_pipeline(config, log);
  EigenOptions eo;
  eo.omega_max = options.omega_max.value_or(0.0);
  eo.count = options.count.value_or(0);
  eo.lambda_floor = options.lambda_floor;
  eo.threads = options.threads;
  const EigenSearch search = pl.evaluator().find_eigenvalues(config.bc, eo);
  for (const auto& w : search.warnings) log << "warning: " << w << '\n';
  bool short_count = options.count && static_cast<int>(search.eigenvalues.size()) < *options.count;
  if (short_count) log << "warning: found " << search.eigenvalues.size() << " of " << *options.count << '\n';
  write(search.eigenvalues);
  if (options.strict && (short_count || !search.warnings.empty())) return kNumericalFailure;
  return kOk;
}

int cmd_solve(const ProblemConfig& config, const SolveOptions& options, std::ostream& out,
              std::ostream& log) {
  const Pipeline pl = build_pipeline(config, log);
  const DenseSolution sol = pl.evaluator().solve_ivp(options.omega, options.u_a, options.du_a);
  std::optional<ReferenceSolution> ref;
  if (options.check) {
    ReferenceOptions ro;
    ro.halving_check = false;
    ref = integrate_reference(pl.problem, pl.data.y(), options.omega * options.omega, options.u_a,
                              options.du_a, ro);
  }
  double worst = 0.0;
  emit(options.out, out, [&](std::ostream& os) {
    os << "y,u_re,u_im,du_re,du_im" << (ref ? ",abs_err" : "") << '\n';
    for (std::size_t i = 0; i < sol.y.size(); ++i) {
      os << format_real(sol.y[i]) << ',' << format_real(sol.u[i].real()) << ','
         << format_real(sol.u[i].imag()) << ',' << format_real(sol.du[i].real()) << ','
         << format_real(sol.du[i].imag());
      if (ref) {
        const double e = std::abs(sol.u[i] - ref->u[i]);
        worst = std::max(worst, e);
        os << ',' << format_real(e);
      }
      os << '\n';
    }
  });
  if (ref) log << "max |u - oracle| = " << format_real(worst) << '\n';
  for (const cplx v : sol.u)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return kNumericalFailure;
  return kOk;
}

int cmd_selftest(const SelftestOptions& options, std::ostream& out, std::ostream& log) {
  AcceptanceOptions ao;
  ao.quick = options.quick;
  ao.cache = options.cache;
  return print_acceptance(run_acceptance(ao, log), out) ? kOk : kNumericalFailure;
}

cplx parse_complex(const std::string& text) {
  static const std::regex re(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij])?\s*$)");
  static const std::regex pure_imag(R"(^\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij]\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pure_imag)) {
    const double im = m[2].matched ? std::stod(m[2]) : 1.0;
    return {0.0, m[1] == "-" ? -im : im};
  }
  if (!text.empty() && std::regex_match(text, m, re) && (m[1].matched || m[2].matched)) {
    const double re_part = m[1].matched ? std::stod(m[1]) : 0.0;
    double im = 0.0;
    if (m[2].matched) {
      im = m[3].matched ? std::stod(m[3]) : 1.0;
      if (m[2] == "-") im = -im;
    }
    return {re_part, im};
  }
  throw ConfigError("cannot read complex number '" + text + "'");
}

}  // namespace nsbf::cli
