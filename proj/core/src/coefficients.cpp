#include "nsbf/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

// (g rho)' = g' rho + g rho'
SampledFn seed_flux(const SeedSolution& seed, const LiouvilleData& data) {
  return seed.g_prime * data.rho + seed.g * data.rho_prime;
}

}  // namespace

GFunctions compute_G(const SeedSolution& seed, const LiouvilleData& data) {
  const auto boundary = data.rho * data.rho_prime / (2.0 * data.r);
  const auto integrand = data.q / (data.rho * data.rho) + data.rho_prime * data.rho_prime / data.r;
  auto G2 = boundary - boundary.front() + 0.5 * cumulative_integral(integrand);
  auto G1 = G2 + seed.h;
  return {std::move(G1), std::move(G2)};
}

SeedCoefficients seed_coefficients(const SeedSolution& seed, const LiouvilleData& data,
                                   const GFunctions& G) {
  const auto inv_rho = reciprocal(data.rho);
  SeedCoefficients s;
  s.alpha_m1 = 0.5 * inv_rho;
  s.alpha_0 = 0.5 * (seed.g - inv_rho);
  s.mu_m1 = 0.5 * G.G2 * inv_rho;
  s.mu_0 = 0.5 * inv_rho * (data.sqrt_p_over_r * seed_flux(seed, data) - G.G1);
  return s;
}

SampledFn mu1_from_alpha1(const SampledFn& alpha_1, const LiouvilleData& data,
                          const GFunctions& G) {
  const auto d_alpha = differentiate(alpha_1);
  auto out = data.sqrt_p_over_r * (d_alpha + data.rho_prime / data.rho * alpha_1) -
             1.5 * G.G2 / data.rho;
  return out.map_indexed([&](std::size_t i, cplx v) {
    return i == 0 ? cplx(0.0) : v + alpha_1[i] / data.l[i];
  });
}

namespace {

// The recurrence runs in extended precision: each level cancels terms of
// size c_n alpha_{n-2} / l against each other, so rounding in alpha feeds mu
// amplified by roughly 4n / l.
using ld = long double;
using lc = std::complex<ld>;
using Arr = std::vector<lc>;

Arr widen(const SampledFn& f) {
  Arr out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lc(f[i].real(), f[i].imag());
  return out;
}

SampledFn narrow(const Arr& a, const GridPtr& grid) {
  std::vector<cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = cplx(static_cast<double>(a[i].real()), static_cast<double>(a[i].imag()));
  return SampledFn(grid, std::move(out));
}

struct Inputs {
  std::size_t m = 0;
  ld h = 0;
  Arr l, rho, g, flux, srp, spr, G2;
};

template <class T>
Arr widen_or(const std::vector<T>& ext, const SampledFn& fallback) {
  if (ext.size() != fallback.size()) return widen(fallback);
  Arr out(ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) out[i] = lc(ext[i]);
  return out;
}

Inputs make_inputs(const SeedSolution& seed, const LiouvilleData& data, const SampledFn& G2) {
  Inputs in;
  in.m = data.y().size();
  in.h = (static_cast<ld>(data.y().b()) - data.y().a()) / static_cast<ld>(in.m - 1);
  in.l = widen_or(data.l_ext, data.l);
  in.rho = widen_or(data.rho_ext, data.rho);
  in.g = widen_or(seed.g_ext, seed.g);
  const Arr dg = widen_or(seed.g_prime_ext, seed.g_prime);
  const Arr drho = widen_or(data.rho_prime_ext, data.rho_prime);
  in.flux.resize(in.m);
  in.srp.resize(in.m);
  in.spr.resize(in.m);
  for (std::size_t i = 0; i < in.m; ++i) {
    in.flux[i] = dg[i] * in.rho[i] + in.g[i] * drho[i];
    const ld p = data.p[i].real(), r = data.r[i].real();
    in.srp[i] = data.srp_ext.size() == in.m ? data.srp_ext[i] : std::sqrt(r / p);
    in.spr[i] = ld(1) / in.srp[i];
  }
  in.G2 = widen(G2);
  return in;
}

// alpha_0 = (g - 1/rho)/2 and mu_0 = sqrt(p/r) (g rho)'/(2 rho) - G1/(2 rho).
std::pair<Arr, Arr> level_zero(const Inputs& in, cplx h) {
  Arr a(in.m), mu(in.m);
  const lc hh(h.real(), h.imag());
  for (std::size_t i = 0; i < in.m; ++i) {
    a[i] = (in.g[i] - ld(1) / in.rho[i]) / ld(2);
    mu[i] = (in.spr[i] * in.flux[i] - (in.G2[i] + hh)) / (ld(2) * in.rho[i]);
  }
  return {std::move(a), std::move(mu)};
}

struct Level {
  Arr eta, theta, Sigma, Upsilon;
};

Arr integrate(const Arr& f, ld h) {
  Arr out(f.size());
  cumulative_integral(f, h, out);
  return out;
}

void check_level(const Level& lvl, int n) {
  auto finite = [](const Arr& a) {
    return std::all_of(a.begin(), a.end(), [](lc z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  };
  if (!finite(lvl.Sigma)) throw NumericalError("Sigma became non-finite at n = " + std::to_string(n));
  if (!finite(lvl.Upsilon))
    throw NumericalError("Upsilon became non-finite at n = " + std::to_string(n));
}

// n = 1. Sigma_{-1} = alpha_{-1} / l is singular at A but only enters as
// l Sigma_{-1} = 1/(2 rho), l^2 Sigma_{-1} = l/(2 rho), l^2 Upsilon_{-1} = l G2/(2 rho),
// and eta~_1 = (g rho - 1)/2 in closed form.
Level base_level(const Inputs& in) {
  const std::size_t m = in.m;
  Level lvl;
  lvl.eta.resize(m);
  Arr integrand(m);
  for (std::size_t i = 0; i < m; ++i) {
    const lc rg = in.rho[i] * in.g[i];
    lvl.eta[i] = (rg - ld(1)) / ld(2);
    integrand[i] = (lvl.eta[i] / (rg * rg) - ld(1) / (ld(2) * in.rho[i] * in.g[i])) * in.srp[i];
  }
  lvl.theta = integrate(integrand, in.h);
  const ld k = -3;
  const ld c = recurrence_constant(1);
  lvl.Sigma.resize(m);
  lvl.Upsilon.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const lc rho = in.rho[i], g = in.g[i], l = in.l[i];
    lvl.Sigma[i] = k * (l / (ld(2) * rho) + c * g * lvl.theta[i]);
    lvl.Upsilon[i] = k * (l * in.G2[i] / (ld(2) * rho) +
                          c * (in.spr[i] * in.flux[i] * lvl.theta[i] / rho +
                               lvl.eta[i] / (rho * rho * g)));
  }
  check_level(lvl, 1);
  return lvl;
}

Level step_level(int n, const Arr& sigma_prev, const Arr& upsilon_prev, const Inputs& in) {
  const std::size_t m = in.m;
  const ld n1 = static_cast<ld>(n - 1);
  Level lvl;
  Arr integrand(m);
  for (std::size_t i = 0; i < m; ++i)
    integrand[i] = (in.l[i] * in.flux[i] + n1 * in.rho[i] * in.g[i] * in.srp[i]) * in.rho[i] *
                   sigma_prev[i];
  lvl.eta = integrate(integrand, in.h);
  for (std::size_t i = 0; i < m; ++i) {
    const lc rg = in.rho[i] * in.g[i];
    integrand[i] = (lvl.eta[i] / (rg * rg) - in.l[i] * sigma_prev[i] / in.g[i]) * in.srp[i];
  }
  lvl.theta = integrate(integrand, in.h);

  const ld k = (ld(2) * n + 1) / (ld(2) * n - 3);
  const ld c = recurrence_constant(n);
  const ld d = c - ld(2) * n + 1;
  lvl.Sigma.resize(m);
  lvl.Upsilon.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const lc rho = in.rho[i], g = in.g[i], l = in.l[i];
    const lc l2 = l * l;
    lvl.Sigma[i] = k * (l2 * sigma_prev[i] + c * g * lvl.theta[i]);
    lvl.Upsilon[i] = k * (l2 * upsilon_prev[i] +
                          c * (in.spr[i] * in.flux[i] * lvl.theta[i] / rho +
                               lvl.eta[i] / (rho * rho * g)) -
                          d * l * sigma_prev[i]);
  }
  check_level(lvl, n);
  return lvl;
}

RecurrenceLevel narrow_level(const Level& lvl, const GridPtr& grid) {
  return {narrow(lvl.eta, grid), narrow(lvl.theta, grid), narrow(lvl.Sigma, grid),
          narrow(lvl.Upsilon, grid)};
}

// alpha_n = Sigma_n / l^n, mu_n = Upsilon_n / l^n, node 0 set to its limit.
std::pair<SampledFn, SampledFn> divide_by_power(int n, const Arr& Sigma, const Arr& Upsilon,
                                                const Inputs& in, const GridPtr& grid) {
  Arr a(in.m), mu(in.m);
  for (std::size_t i = 0; i < in.m; ++i) {
    if (n > 0 && i == 0) continue;
    const ld ln = std::pow(in.l[i].real(), n);
    a[i] = Sigma[i] / ln;
    mu[i] = Upsilon[i] / ln;
  }
  return {narrow(a, grid), narrow(mu, grid)};
}

}  // namespace

RecurrenceLevel recurrence_base(const SeedSolution& seed, const LiouvilleData& data,
                                const GFunctions& G) {
  return narrow_level(base_level(make_inputs(seed, data, G.G2)), data.grid);
}

RecurrenceLevel recurrence_step(int n, const SampledFn& sigma_prev, const SampledFn& upsilon_prev,
                                const SeedSolution& seed, const LiouvilleData& data) {
  if (n < 2) throw DomainError("recurrence_step handles n >= 2; use recurrence_base for n = 1");
  const auto zero = SampledFn::constant(data.grid, 0.0);
  const auto in = make_inputs(seed, data, zero);
  return narrow_level(step_level(n, widen(sigma_prev), widen(upsilon_prev), in), data.grid);
}

std::pair<SampledFn, SampledFn> extract_alpha_mu(int n, const SampledFn& Sigma,
                                                 const SampledFn& Upsilon,
                                                 const LiouvilleData& data) {
  if (n == 0) return {Sigma, Upsilon};
  std::vector<cplx> a(Sigma.size()), m(Sigma.size());
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double ln = std::pow(data.l[i].real(), n);
    a[i] = Sigma[i] / ln;
    m[i] = Upsilon[i] / ln;
  }
  return {SampledFn(data.grid, std::move(a)), SampledFn(data.grid, std::move(m))};
}

std::size_t local_minimum_cut(const SampledFn& c, double window) {
  const Grid& grid = c.grid();
  const double y_end = grid.a() + window * (grid.b() - grid.a());
  const std::size_t m = c.size();
  std::size_t end = 1;
  while (end < m && grid[end] < y_end) ++end;

  double ref = 0.0;
  for (std::size_t i = end; i < m; ++i) ref = std::max(ref, std::abs(c[i]));
  const double threshold = 1e-2 * ref;

  for (std::size_t i = 2; i + 1 < end; ++i) {
    const double v = std::abs(c[i]);
    if (v == 0.0) continue;
    if (v < std::abs(c[i - 1]) && v < std::abs(c[i + 1]) && v < threshold) return i;
  }
  return 0;
}

std::size_t plateau_cut(const std::vector<cplx>& before, const std::vector<cplx>& after,
                        const Grid& grid, double window) {
  const double y_end = grid.a() + window * (grid.b() - grid.a());
  std::size_t cut = 0;
  for (std::size_t i = 1; i < after.size() && grid[i] < y_end; ++i)
    if (std::abs(after[i]) > std::abs(before[i])) cut = i;
  return cut;
}

SampledFn apply_cut(const SampledFn& c, std::size_t cut) {
  return c.map_indexed([cut](std::size_t i, cplx v) { return i <= cut ? cplx(0.0) : v; });
}

CoefficientSet compute_coefficients(const SeedSolution& seed, const LiouvilleData& data,
                                    const CoefficientOptions& options) {
  if (options.N < 0) throw DomainError("truncation N must be >= 0");
  const int N = options.N;
  const auto G = compute_G(seed, data);
  const auto s = seed_coefficients(seed, data, G);

  CoefficientSet cs;
  cs.N = N;
  cs.h = seed.h;
  cs.G1 = G.G1;
  cs.G2 = G.G2;
  cs.alpha_m1 = s.alpha_m1;
  cs.mu_m1 = s.mu_m1;
  const auto in = make_inputs(seed, data, G.G2);
  auto [sigma0, upsilon0] = level_zero(in, seed.h);
  cs.alpha.push_back(narrow(sigma0, data.grid));
  cs.mu.push_back(narrow(upsilon0, data.grid));
  cs.cut_alpha.push_back(data.y().a());
  cs.cut_mu.push_back(data.y().a());
  cs.cut_alpha_index.push_back(0);
  cs.cut_mu_index.push_back(0);

  // Residuals of the alternating identities, sum (-1)^n c_n / l minus the
  // right side, for the plateau fallback. Q(A) = 2 G1'(A) / l'(A).
  const auto& grid = data.y();
  const std::size_t m = grid.size();
  const cplx QA = 2.0 * differentiate(G.G1)[0] / data.sqrt_r_over_p[0];
  std::vector<cplx> res_a(m), res_mu(m);
  for (std::size_t i = 1; i < m; ++i) {
    const double rho = data.rho[i].real(), l = data.l[i].real();
    res_a[i] = cs.alpha[0][i] / l - seed.h / (2.0 * rho);
    res_mu[i] = cs.mu[0][i] / l - QA / (4.0 * rho) - seed.h * G.G2[i] / (2.0 * rho);
  }
  auto advance = [&](std::vector<cplx>& res, const SampledFn& c, double sign) {
    auto next = res;
    for (std::size_t i = 1; i < m; ++i) next[i] += sign * c[i] / data.l[i].real();
    return next;
  };
  // Genuine coefficients vanish at A like a power of l, while amplified
  // rounding grows like l^-n; a cut is only taken where |c| on [A, cut] peaks
  // within its first few nodes.
  auto noise_shaped = [](const SampledFn& c, std::size_t cut) {
    double head = 0.0, peak = 0.0;
    for (std::size_t i = 1; i <= cut; ++i) {
      peak = std::max(peak, std::abs(c[i]));
      if (i <= 3) head = std::max(head, std::abs(c[i]));
    }
    return head >= 0.5 * peak;
  };
  auto choose_cut = [&](const SampledFn& c, std::vector<cplx>& res, double sign) {
    std::size_t cut = local_minimum_cut(c, options.cut_window);
    if (cut != 0 && noise_shaped(c, cut)) return cut;
    if (c.max_abs() == 0.0) return std::size_t{0};
    cut = plateau_cut(res, advance(res, c, sign), grid, options.cut_window);
    return cut != 0 && noise_shaped(c, cut) ? cut : std::size_t{0};
  };

  // Sigma_n / Upsilon_n for every level; level n reads level n - 2.
  std::vector<Arr> sigma{std::move(sigma0)}, upsilon{std::move(upsilon0)};
  for (int n = 1; n <= N; ++n) {
    Level lvl = n == 1 ? base_level(in) : step_level(n, sigma[n - 2], upsilon[n - 2], in);
    auto [alpha, mu] = divide_by_power(n, lvl.Sigma, lvl.Upsilon, in, data.grid);
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    std::size_t ca = 0, cm = 0;
    if (options.cleanup) {
      ca = choose_cut(alpha, res_a, sign);
      cm = choose_cut(mu, res_mu, sign);
      alpha = apply_cut(alpha, ca);
      mu = apply_cut(mu, cm);
      res_a = advance(res_a, alpha, sign);
      res_mu = advance(res_mu, mu, sign);
    }
    for (std::size_t i = 0; i <= ca; ++i) lvl.Sigma[i] = 0;
    for (std::size_t i = 0; i <= cm; ++i) lvl.Upsilon[i] = 0;
    cs.alpha.push_back(std::move(alpha));
    cs.mu.push_back(std::move(mu));
    cs.cut_alpha.push_back(grid[ca]);
    cs.cut_mu.push_back(grid[cm]);
    cs.cut_alpha_index.push_back(ca);
    cs.cut_mu_index.push_back(cm);
    sigma.push_back(std::move(lvl.Sigma));
    upsilon.push_back(std::move(lvl.Upsilon));
  }
  return cs;
}

double ResidualRow::max() const { return std::max({alpha_sum, alpha_alt, mu_sum, mu_alt}); }

ResidualReport verify_coefficients(const CoefficientSet& coeffs, const LiouvilleData& data,
                                   const SampledFn& Q, double trim) {
  const Grid& grid = data.y();
  const std::size_t m = grid.size();
  const double y0 = grid.a() + trim * (grid.b() - grid.a());
  std::size_t first = 1;
  while (first < m && grid[first] < y0) ++first;

  const cplx h = coeffs.h;
  std::vector<cplx> rhs_a(m), rhs_alt(m), rhs_mu(m), rhs_mu_alt(m);
  const cplx Q0 = Q[0];
  for (std::size_t i = 0; i < m; ++i) {
    const double rho = data.rho[i].real();
    const cplx G1 = coeffs.G1[i], G2 = coeffs.G2[i];
    rhs_a[i] = (G1 + G2) / (2.0 * rho);
    rhs_alt[i] = h / (2.0 * rho);
    rhs_mu[i] = Q[i] / (4.0 * rho) + (h * G2 + G2 * G2) / (2.0 * rho);
    rhs_mu_alt[i] = Q0 / (4.0 * rho) + h * G2 / (2.0 * rho);
  }

  std::vector<cplx> sa(m, 0.0), salt(m, 0.0), smu(m, 0.0), smualt(m, 0.0);
  ResidualReport report;
  report.trim_from = grid[std::min(first, m - 1)];
  for (int M = 0; M <= coeffs.N; ++M) {
    const double sign = (M % 2 == 0) ? 1.0 : -1.0;
    ResidualRow row;
    row.M = M;
    for (std::size_t i = first; i < m; ++i) {
      const double inv_l = 1.0 / data.l[i].real();
      sa[i] += coeffs.alpha[M][i] * inv_l;
      salt[i] += sign * coeffs.alpha[M][i] * inv_l;
      smu[i] += coeffs.mu[M][i] * inv_l;
      smualt[i] += sign * coeffs.mu[M][i] * inv_l;
      row.alpha_sum = std::max(row.alpha_sum, std::abs(sa[i] - rhs_a[i]));
      row.alpha_alt = std::max(row.alpha_alt, std::abs(salt[i] - rhs_alt[i]));
      row.mu_sum = std::max(row.mu_sum, std::abs(smu[i] - rhs_mu[i]));
      row.mu_alt = std::max(row.mu_alt, std::abs(smualt[i] - rhs_mu_alt[i]));
    }
    report.rows.push_back(row);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    if (row.max() < best) {
      best = row.max();
      report.N_opt = row.M;
    }
  }
  return report;
}

SampledFn direct_alpha(int n, const FormalPowers& powers, const LiouvilleData& data) {
  if (n < 0) throw DomainError("direct_alpha needs n >= 0");
  if (n > kDirectFormulaCap) {
    std::ostringstream os;
    os << "direct formula refused for n = " << n << " > " << kDirectFormulaCap
       << ": Legendre coefficients grow too fast for a meaningful cross-check";
    throw RangeError(os.str());
  }
  if (static_cast<int>(powers.Phi.size()) <= n)
    throw DomainError("direct_alpha needs formal powers through k = n");
  const LegendreTable table(n);
  const auto& row = table.row(n);
  const std::size_t m = data.y().size();
  std::vector<cplx> out(m, 0.0);
  for (std::size_t i = (n == 0 ? 0 : 1); i < m; ++i) {
    const double l = data.l[i].real();
    cplx sum = 0.0;
    double lk = 1.0;
    for (int k = 0; k <= n; ++k) {
      if (row[k] != 0.0) sum += row[k] * powers.Phi[k][i] / lk;
      lk *= l;
    }
    out[i] = 0.5 * (2.0 * n + 1.0) * (sum - 1.0 / data.rho[i].real());
  }
  return SampledFn(data.grid, std::move(out));
}

SampledFn direct_mu(int n, const FormalPowers& powers, const SeedSolution& seed,
                    const LiouvilleData& data, const SampledFn& G2) {
  if (n < 0) throw DomainError("direct_mu needs n >= 0");
  if (n > kDirectFormulaCap) {
    std::ostringstream os;
    os << "direct formula refused for n = " << n << " > " << kDirectFormulaCap;
    throw RangeError(os.str());
  }
  if (static_cast<int>(powers.Phi.size()) <= n)
    throw DomainError("direct_mu needs formal powers through k = n");
  const LegendreTable table(n);
  const auto& row = table.row(n);
  const std::size_t m = data.y().size();
  const cplx h = seed.h;
  const double parity = (n % 2 == 0) ? 2.0 : 0.0;  // 1 + (-1)^n
  std::vector<cplx> out(m, 0.0);
  for (std::size_t i = (n == 0 ? 0 : 1); i < m; ++i) {
    const double l = data.l[i].real();
    const double rho = data.rho[i].real();
    const cplx log_der = seed.g_prime[i] / seed.g[i] + data.rho_prime[i].real() / rho;
    const cplx phi_factor = rho * data.sqrt_p_over_r[i].real() * log_der;
    cplx sum = 0.0;
    double lk = 1.0;
    for (int k = 0; k <= n; ++k) {
      if (row[k] != 0.0) {
        cplx term = phi_factor * powers.Phi[k][i];
        if (k > 0) term += static_cast<double>(k) * powers.Psi[k - 1][i] / rho;
        sum += row[k] * term / lk;
      }
      lk *= l;
    }
    const double tail = n == 0 ? 0.0 : n * (n + 1.0) / (2.0 * l);
    out[i] = (2.0 * n + 1.0) / (2.0 * rho) * (sum - tail - G2[i] - 0.5 * h * parity);
  }
  return SampledFn(data.grid, std::move(out));
}

}  // namespace nsbf
