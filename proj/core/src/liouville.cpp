#include "nsbf/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

SampledFn sample_checked(const CoefficientFn& f, const GridPtr& grid, const char* name) {
  if (!f.value) throw Error(std::string("coefficient ") + name + " is not defined");
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = f.value((*grid)[i]);
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << "coefficient " << name << " is not finite at node " << i << " (y = " << (*grid)[i]
         << ")";
      throw NumericalError(os.str());
    }
  }
  return SampledFn(grid, v);
}

void require_positive(const SampledFn& f, const char* name) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i].real() > 0.0)) {
      std::ostringstream os;
      os << "coefficient " << name << " must be positive, got " << f[i].real() << " at node " << i
         << " (y = " << f.grid()[i] << ")";
      throw PositivityError(os.str(), i, f.grid()[i]);
    }
  }
}

SampledFn derivative_of(const CoefficientFn& f, const SampledFn& samples, const GridPtr& grid) {
  if (f.has_d1()) return SampledFn::sample(grid, f.d1);
  return differentiate(samples);
}

}  // namespace

LiouvilleData build_liouville(const SLProblem& problem, GridPtr grid) {
  if (!(problem.A < problem.B)) throw Error("problem interval must satisfy A < B");
  if (grid->a() != problem.A || grid->b() != problem.B)
    throw InvalidGridError("grid does not span the problem interval");

  LiouvilleData d;
  d.grid = grid;
  d.p = sample_checked(problem.p, grid, "p");
  d.q = sample_checked(problem.q, grid, "q");
  d.r = sample_checked(problem.r, grid, "r");
  require_positive(d.p, "p");
  require_positive(d.r, "r");

  d.analytic_derivatives = problem.p.has_d1() && problem.r.has_d1();
  d.p_prime = derivative_of(problem.p, d.p, grid);
  d.r_prime = derivative_of(problem.r, d.r, grid);

  using ld = long double;
  const std::size_t m = grid->size();
  const ld h = (static_cast<ld>(grid->b()) - grid->a()) / static_cast<ld>(m - 1);
  const auto p = d.p.real_values();
  const auto r = d.r.real_values();
  const auto pp = d.p_prime.real_values();
  const auto rp = d.r_prime.real_values();

  std::vector<double> srp(m), spr(m);
  std::vector<std::complex<ld>> srp_ext(m), log_der(m), ratio_der(m), acc(m);
  for (std::size_t i = 0; i < m; ++i) {
    srp[i] = std::sqrt(r[i] / p[i]);
    spr[i] = std::sqrt(p[i] / r[i]);
    srp_ext[i] = std::sqrt(static_cast<ld>(r[i]) / p[i]);
    log_der[i] = (static_cast<ld>(pp[i]) / p[i] + static_cast<ld>(rp[i]) / r[i]) / 4;
    ratio_der[i] = (static_cast<ld>(rp[i]) / r[i] - static_cast<ld>(pp[i]) / p[i]) / 2;
  }
  if (d.analytic_derivatives) {
    // sqrt(r/p) = sqrt(r/p)(A) exp(\int (r'/r - p'/p) / 2)
    cumulative_integral(ratio_der, h, acc);
    for (std::size_t i = 1; i < m; ++i) srp_ext[i] = srp_ext[0] * std::exp(acc[i].real());
  }
  d.srp_ext.resize(m);
  for (std::size_t i = 0; i < m; ++i) d.srp_ext[i] = srp_ext[i].real();
  d.sqrt_r_over_p = SampledFn(grid, srp);
  d.sqrt_p_over_r = SampledFn(grid, spr);

  cumulative_integral(srp_ext, h, acc);
  d.l_ext.resize(m);
  for (std::size_t i = 0; i < m; ++i) d.l_ext[i] = acc[i].real();

  d.rho_ext.resize(m);
  d.rho_prime_ext.resize(m);
  if (d.analytic_derivatives) {
    cumulative_integral(log_der, h, acc);
    const ld rho_a = std::sqrt(std::sqrt(static_cast<ld>(p[0]) * r[0]));
    for (std::size_t i = 0; i < m; ++i) {
      d.rho_ext[i] = rho_a * std::exp(acc[i].real());
      d.rho_prime_ext[i] = d.rho_ext[i] * log_der[i].real();
    }
  } else {
    for (std::size_t i = 0; i < m; ++i)
      d.rho_ext[i] = std::sqrt(std::sqrt(static_cast<ld>(p[i]) * r[i]));
  }

  std::vector<double> l(m), rho(m);
  for (std::size_t i = 0; i < m; ++i) {
    l[i] = static_cast<double>(d.l_ext[i]);
    rho[i] = static_cast<double>(d.rho_ext[i]);
  }
  d.l = SampledFn(grid, l);
  d.rho = SampledFn(grid, rho);
  d.b = l.back();

  if (d.analytic_derivatives) {
    std::vector<double> rhop(m);
    for (std::size_t i = 0; i < m; ++i) rhop[i] = static_cast<double>(d.rho_prime_ext[i]);
    d.rho_prime = SampledFn(grid, rhop);
  } else {
    d.rho_prime = differentiate(d.rho);
    for (std::size_t i = 0; i < m; ++i) d.rho_prime_ext[i] = d.rho_prime[i].real();
  }
  return d;
}

SampledFn transformed_potential(const SLProblem& problem, const LiouvilleData& data) {
  const auto& grid = data.grid;
  const std::size_t m = grid->size();
  std::vector<double> lp(m), lr(m);
  for (std::size_t i = 0; i < m; ++i) {
    lp[i] = data.p_prime[i].real() / data.p[i].real();
    lr[i] = data.r_prime[i].real() / data.r[i].real();
  }
  std::vector<double> sum_prime(m);
  if (problem.p.has_d2() && problem.r.has_d2() && data.analytic_derivatives) {
    for (std::size_t i = 0; i < m; ++i) {
      const double y = (*grid)[i];
      sum_prime[i] = problem.p.d2(y) / data.p[i].real() - lp[i] * lp[i] +
                     problem.r.d2(y) / data.r[i].real() - lr[i] * lr[i];
    }
  } else {
    std::vector<double> s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = lp[i] + lr[i];
    sum_prime = differentiate(SampledFn(grid, s)).real_values();
  }
  std::vector<double> Q(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = data.p[i].real(), q = data.q[i].real(), r = data.r[i].real();
    Q[i] = q / r + p / (4.0 * r) *
                       (sum_prime[i] + 0.75 * lp[i] * lp[i] + 0.5 * lp[i] * lr[i] -
                        0.25 * lr[i] * lr[i]);
    if (!std::isfinite(Q[i])) {
      std::ostringstream os;
      os << "transformed potential is not finite at node " << i << " (y = " << (*grid)[i] << ")";
      throw NumericalError(os.str());
    }
  }
  return SampledFn(grid, Q);
}

SampledFn transformed_potential_alt(const LiouvilleData& data) {
  const auto inv_rho_prime = differentiate(reciprocal(data.rho));
  const auto flux = differentiate(data.p * inv_rho_prime);
  auto Q = data.q / data.r - data.rho / data.r * flux;
  return SampledFn(data.grid, Q.real_values());
}

SampledFn apply_L_inverse(const SampledFn& u, const LiouvilleData& data) {
  const double x_max = u.grid().b();
  const double x_min = u.grid().a();
  return data.l.map_indexed([&](std::size_t i, cplx lv) {
    const double x = std::clamp(lv.real(), x_min, x_max);
    return interpolate(u, x) / data.rho[i].real();
  });
}

SampledFn apply_L(const SampledFn& v, const LiouvilleData& data) { return data.rho * v; }

}  // namespace nsbf
