#include "nsbf/cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "nsbf/bessel.hpp"
#include "nsbf/cli/commands.hpp"
#include "nsbf/oracles.hpp"

namespace nsbf::cli {

namespace {

constexpr int kPaperN = 38;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Fixture {
  Pipeline kamke;
  SolutionEvaluator eval;
  BoundarySpec bc;

  explicit Fixture(Pipeline pl)
      : kamke(std::move(pl)), eval(kamke.data, kamke.seed, kamke.coeffs, kPaperN), bc(kamke_boundary()) {}
};

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<double>& y,
                    double y_from = -1e300, double y_to = 1e300) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (y[i] >= y_from && y[i] <= y_to) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

CriterionResult eigenvalues(const Fixture& f, bool quick) {
  const int count = quick ? 20 : 100;
  EigenOptions eo;
  eo.count = count;
  eo.lambda_floor = -50.0;
  const auto t0 = std::chrono::steady_clock::now();
  const EigenSearch search = f.eval.find_eigenvalues(f.bc, eo);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  ReferenceEigenOptions ro;
  ro.tolerance = 1e-14;
  ro.lambda_floor = -50.0;
  const auto ref = reference_eigenvalues(f.kamke.problem, f.bc, count, ro);

  CriterionResult r{1, "eigenvalue reproduction", false, {}};
  if (static_cast<int>(search.eigenvalues.size()) != count || static_cast<int>(ref.size()) != count) {
    r.detail = "found " + std::to_string(search.eigenvalues.size()) + " eigenvalues, reference " +
               std::to_string(ref.size()) + ", wanted " + std::to_string(count);
    return r;
  }
  double abs_err = 0.0, rel_err = 0.0;
  for (int k = 0; k < count; ++k) {
    const double e = std::abs(search.eigenvalues[k].lambda - ref[k]);
    abs_err = std::max(abs_err, e);
    rel_err = std::max(rel_err, e / std::abs(ref[k]));
  }
  r.passed = abs_err <= 1e-9 && rel_err <= 1e-12 && seconds <= 10.0;
  r.detail = std::to_string(count) + " eigenvalues, N=" + std::to_string(kPaperN) + ": max abs " + sci(abs_err) +
             " (<= 1e-09), max rel " + sci(rel_err) + " (<= 1e-12), sweep " + sci(seconds) + " s (<= 10)" +
             (abs_err <= 1.3e-11 && rel_err <= 2.5e-15 ? "; stretch target met" : "; stretch target 1.3e-11 / 2.5e-15 not met");
  return r;
}

CriterionResult optimal_n(const Fixture& f) {
  const int n = f.kamke.report.N_opt;
  return {2, "optimal-N selection", n >= 34 && n <= 42,
          "N_opt " + std::to_string(n) + " in [34, 42], residuals over y >= " + sci(f.kamke.report.trim_from)};
}

CriterionResult omega_uniform(const Fixture& f) {
  const auto& grid = f.kamke.data.y();
  const auto& y = grid.points();
  const std::vector<double> ys(y.begin(), y.end());
  auto error = [&](double omega, double y_from) {
    const DenseSolution s = f.eval.solve_ivp(omega, 1.0, 1.0);
    const ReferenceSolution ref = integrate_reference(f.kamke.problem, grid, omega * omega, 1.0, 1.0);
    return max_abs_diff(s.u, ref.u, ys, y_from);
  };
  const double e10 = error(10, -1), e52 = error(52, -1), e105 = error(105, -1);
  const double e210 = error(210, 0.3);
  const double spread = std::max({e10, e52, e105}) / std::min({e10, e52, e105});
  CriterionResult r{3, "omega-uniform accuracy", spread < 100.0 && e210 <= 100.0 * e52, {}};
  r.detail = "max|u_N - oracle| at omega 10, 52, 105: " + sci(e10) + ", " + sci(e52) + ", " + sci(e105) +
             " (spread " + sci(spread) + " < 100); omega 210 on [0.3, 2]: " + sci(e210) + " (<= " +
             sci(100.0 * e52) + ")";
  return r;
}

CriterionResult degenerate() {
  std::ostringstream sink;
  const SLProblem problem = degenerate_problem();
  ProblemConfig cfg = builtin_config("degenerate");
  cfg.builtin = "catalog:degenerate";
  cfg.N = 50;
  const Pipeline pl = build_pipeline(problem, cfg, sink);
  const SolutionEvaluator ev = pl.evaluator();
  const auto& y = pl.data.y();
  double basis_err = 0.0;
  for (double omega : {1.0, 10.0, 100.0}) {
    const auto b = ev.eval_basis(omega);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double t = omega * (y[i] - y.a());
      basis_err = std::max({basis_err, std::abs(b.v1[i] - std::cos(t)), std::abs(b.v2[i] - std::sin(t))});
    }
  }
  EigenOptions eo;
  eo.count = 10;
  const auto search = ev.find_eigenvalues({1.0, 0.0, 1.0, 0.0}, eo);
  double eig_err = search.eigenvalues.size() == 10 ? 0.0 : 1e300;
  for (const auto& e : search.eigenvalues) eig_err = std::max(eig_err, std::abs(e.lambda - e.index * e.index));
  return {4, "degenerate exactness", basis_err <= 1e-13 && eig_err <= 1e-10,
          "max |v - cos/sin| " + sci(basis_err) + " (<= 1e-13) at omega 1, 10, 100; Dirichlet |lambda_k - k^2| " +
              sci(eig_err) + " (<= 1e-10), k <= 10"};
}

CriterionResult identities(const Fixture& f) {
  const auto& rows = f.kamke.report.rows;
  const auto& at = rows.at(f.kamke.report.N_opt);
  const auto& five = rows.at(5);
  const double a[4] = {at.alpha_sum, at.alpha_alt, at.mu_sum, at.mu_alt};
  const double b[4] = {five.alpha_sum, five.alpha_alt, five.mu_sum, five.mu_alt};
  bool ok = at.max() <= 1e-5;
  double worst_ratio = 0.0;
  for (int k = 0; k < 4; ++k) {
    ok = ok && a[k] * 100.0 <= b[k];
    worst_ratio = std::max(worst_ratio, a[k] / b[k]);
  }
  return {5, "identity suite", ok,
          "max residual at N_opt " + sci(at.max()) + " (<= 1e-05); worst ratio to M=5 " + sci(worst_ratio) +
              " (<= 0.01)"};
}

CriterionResult cross_checks(const Fixture& f) {
  const auto& data = f.kamke.data;
  const auto& y = data.y();
  const FormalPowers powers = formal_powers(f.kamke.seed, data, 3);
  double formula = 0.0;
  for (int n = 0; n <= 3; ++n) {
    const SampledFn da = direct_alpha(n, powers, data);
    const SampledFn dm = direct_mu(n, powers, f.kamke.seed, data, f.kamke.coeffs.G2);
    double ea = 0, sa = 0, em = 0, sm = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] < 0.2) continue;
      ea = std::max(ea, std::abs(da[i] - f.kamke.coeffs.alpha[n][i]));
      sa = std::max(sa, std::abs(f.kamke.coeffs.alpha[n][i]));
      em = std::max(em, std::abs(dm[i] - f.kamke.coeffs.mu[n][i]));
      sm = std::max(sm, std::abs(f.kamke.coeffs.mu[n][i]));
    }
    formula = std::max({formula, ea / sa, em / sm});
  }

  const double omega = 52.0;
  const ReferenceSolution ref = integrate_reference(f.kamke.problem, y, omega * omega, 1.0, 1.0);
  double kummer = 0.0;
  // every tenth node; each series costs milliseconds in 120-digit arithmetic
  for (std::size_t i = 0; i < y.size(); i += 10) {
    if (omega * y[i] * y[i] > kKummerArgumentCap) break;
    kummer = std::max(kummer, std::abs(exact_kamke_solution(omega, y[i]).first - ref.u[i]));
  }
  return {6, "cross-oracle and cross-formula", formula <= 1e-6 && kummer <= 1e-8,
          "direct vs recurrent alpha, mu (n <= 3, y >= 0.2) rel " + sci(formula) +
              " (<= 1e-06); Kummer vs integrator at omega 52 " + sci(kummer) + " (<= 1e-08)"};
}

CriterionResult decay(const Fixture& f) {
  const auto& cs = f.kamke.coeffs;
  const auto& data = f.kamke.data;
  const auto& y = data.y();
  const double trim = f.kamke.report.trim_from;
  bool band = true;
  double worst_band = 0.0, running_min = 1e300;
  for (int n = 5; n <= cs.N; ++n) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] >= trim) s = std::max(s, std::abs(cs.alpha[n][i]));
    if (n > 5) {
      worst_band = std::max(worst_band, s / running_min);
      band = band && s <= 3.0 * running_min;
    }
    running_min = std::min(running_min, s);
  }
  // least-squares slope of log|alpha_n| against log l on (cut, 0.1]
  double min_excess = 1e300;
  for (int n = 1; n <= 3; ++n) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
    for (std::size_t i = cs.cut_alpha_index[n] + 1; i < y.size() && y[i] <= y.a() + 0.1; ++i) {
      const double lx = std::log(data.l[i].real()), ly = std::log(std::abs(cs.alpha[n][i]));
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly, k += 1;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    min_excess = std::min(min_excess, slope - n);
  }
  return {7, "decay properties", band && min_excess >= 0.5,
          "trimmed sup|alpha_n| over running minimum, n >= 5: " + sci(worst_band) +
              " (<= 3); min slope - n for n = 1..3 near y = 0: " + sci(min_excess) + " (>= 0.5)"};
}

CriterionResult derivatives(const Fixture& f) {
  const double omega = 10.0, step = 1e-5;
  const auto& data = f.kamke.data;
  const auto& y = data.y();
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 50; i + 50 < y.size(); i += 50) {
    const auto plus = f.eval.basis_at_y(omega, y[i] + step), minus = f.eval.basis_at_y(omega, y[i] - step);
    const auto d = f.eval.basis_prime_at(omega, i);
    err = std::max({err, std::abs((plus.v1 - minus.v1) / (2 * step) - d.v1),
                    std::abs((plus.v2 - minus.v2) / (2 * step) - d.v2)});
    scale = std::max({scale, std::abs(d.v1), std::abs(d.v2)});
  }
  const auto b = f.eval.eval_basis(omega), bp = f.eval.eval_basis_prime(omega);
  double wmin = 1e300, wmax = -1e300, wmean = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = (data.p[i] * (b.v1[i] * bp.v2[i] - bp.v1[i] * b.v2[i])).real();
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
    wmean += w / static_cast<double>(y.size());
  }
  const double fd = err / scale, wr = (wmax - wmin) / std::abs(wmean);
  return {8, "derivative consistency", fd <= 1e-5 && wr <= 1e-6,
          "central difference vs v' at omega 10 rel " + sci(fd) + " (<= 1e-05); Wronskian variation rel " + sci(wr) +
              " (<= 1e-06)"};
}

CriterionResult bessel() {
  const double j1 = j_batch(1.0, 40).back().real(), j10 = j_batch(10.0, 40).back().real();
  auto two_digits = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", x);
    return std::string(buf);
  };
  const bool paper = two_digits(j1) == "1.5e-61" && two_digits(j10) == "8.4e-22";
  double cross = 0.0;
  const int N = 40;
  for (double z = N; z <= 2 * N; z += 0.5) {
    const auto up = j_batch(z, N, BesselMethod::upward), down = j_batch(z, N, BesselMethod::downward);
    double diff = 0.0, mag = 0.0;
    for (int n = 0; n <= N; ++n) {
      diff = std::max(diff, std::abs(up[n] - down[n]));
      mag = std::max(mag, std::abs(down[n]));
    }
    cross = std::max(cross, diff / mag);
  }
  return {9, "Bessel module", paper && cross <= 1e-10,
          "j_40(1) = " + two_digits(j1) + " (1.5e-61), j_40(10) = " + two_digits(j10) +
              " (8.4e-22); up/down agreement on [40, 80] " + sci(cross) + " (<= 1e-10)"};
}

CriterionResult complex_omega(const Fixture& f) {
  const cplx omega(5.0, 0.5);
  const auto& grid = f.kamke.data.y();
  const DenseSolution s = f.eval.solve_ivp(omega, 1.0, 1.0);
  const ReferenceSolution ref = integrate_reference(f.kamke.problem, grid, omega * omega, 1.0, 1.0);
  const double err = max_abs_diff(s.u, ref.u, s.y);
  return {10, "complex spectral parameter", err <= 1e-6,
          "omega 5+0.5i: max|u_N - oracle| " + sci(err) + " (<= 1e-06)"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log) {
  std::vector<CriterionResult> out;
  std::optional<Fixture> fixture;
  std::string fixture_error;
  try {
    ProblemConfig cfg = builtin_config("kamke");
    cfg.builtin = "catalog:kamke";  // distinct cache key from the expression-built problem
    if (options.cache) cfg.cache = *options.cache;
    fixture.emplace(build_pipeline(kamke_problem(), cfg, log));
  } catch (const std::exception& e) {
    fixture_error = e.what();
  }

  struct Entry {
    int id;
    const char* name;
    bool needs_fixture;
    std::function<CriterionResult()> run;
  };
  const std::vector<Entry> entries = {
      {1, "eigenvalue reproduction", true, [&] { return eigenvalues(*fixture, options.quick); }},
      {2, "optimal-N selection", true, [&] { return optimal_n(*fixture); }},
      {3, "omega-uniform accuracy", true, [&] { return omega_uniform(*fixture); }},
      {4, "degenerate exactness", false, [] { return degenerate(); }},
      {5, "identity suite", true, [&] { return identities(*fixture); }},
      {6, "cross-oracle and cross-formula", true, [&] { return cross_checks(*fixture); }},
      {7, "decay properties", true, [&] { return decay(*fixture); }},
      {8, "derivative consistency", true, [&] { return derivatives(*fixture); }},
      {9, "Bessel module", false, [] { return bessel(); }},
      {10, "complex spectral parameter", true, [&] { return complex_omega(*fixture); }},
  };
  for (const auto& e : entries) {
    if (e.needs_fixture && !fixture) {
      out.push_back({e.id, e.name, false, "setup failed: " + fixture_error});
      continue;
    }
    try {
      out.push_back(e.run());
    } catch (const std::exception& ex) {
      out.push_back({e.id, e.name, false, std::string("exception: ") + ex.what()});
    }
  }
  return out;
}

bool print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  out << (all ? "all criteria passed" : "some criteria failed") << '\n';
  return all;
}

}  // namespace nsbf::cli
