#include "nsbf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "nsbf/bessel.hpp"
#include "nsbf/error.hpp"

namespace nsbf {

void BoundarySpec::validate() const {
  if (a1 == 0.0 && a2 == 0.0) throw DomainError("left boundary condition is (0, 0)");
  if (b1 == 0.0 && b2 == 0.0) throw DomainError("right boundary condition is (0, 0)");
}

struct SolutionEvaluator::State {
  LiouvilleData data;
  SeedSolution seed;
  CoefficientSet coeffs;
  int N = 0;
  std::size_t m = 0;
  // Coefficients transposed to node-major order: alpha[node * (N + 1) + n].
  std::vector<cplx> alpha;
  std::vector<cplx> mu;
  // Ingredients of the lambda = 0 basis.
  SampledFn g_Y1;        // g \int_A^y 1/(p g^2)
  SampledFn g_Y1_prime;  // (g Y1)' = g' Y1 + 1/(p g)
};

namespace {

void require_nonzero(cplx omega) {
  if (omega == cplx(0.0))
    throw DomainError("the series representation needs omega != 0; use the lambda = 0 basis");
}

}  // namespace

SolutionEvaluator::SolutionEvaluator(LiouvilleData data, SeedSolution seed, CoefficientSet coeffs,
                                     int N_used) {
  if (N_used < 0 || N_used > coeffs.N) {
    std::ostringstream os;
    os << "N_used = " << N_used << " outside [0, " << coeffs.N << "]";
    throw DomainError(os.str());
  }
  auto s = std::make_shared<State>();
  s->m = data.y().size();
  s->N = N_used;
  const std::size_t stride = static_cast<std::size_t>(N_used) + 1;
  s->alpha.resize(s->m * stride);
  s->mu.resize(s->m * stride);
  for (std::size_t i = 0; i < s->m; ++i) {
    for (int n = 0; n <= N_used; ++n) {
      s->alpha[i * stride + n] = coeffs.alpha[n][i];
      s->mu[i * stride + n] = coeffs.mu[n][i];
    }
  }
  const auto Y1 = cumulative_integral(reciprocal(data.p * seed.g * seed.g));
  s->g_Y1 = seed.g * Y1;
  s->g_Y1_prime = seed.g_prime * Y1 + reciprocal(data.p * seed.g);
  s->data = std::move(data);
  s->seed = std::move(seed);
  s->coeffs = std::move(coeffs);
  state_ = std::move(s);
}

int SolutionEvaluator::N() const noexcept { return state_->N; }
const LiouvilleData& SolutionEvaluator::data() const noexcept { return state_->data; }
const SeedSolution& SolutionEvaluator::seed() const noexcept { return state_->seed; }
const CoefficientSet& SolutionEvaluator::coefficients() const noexcept { return state_->coeffs; }

std::pair<SolutionEvaluator::Pair, SolutionEvaluator::Pair> SolutionEvaluator::basis_and_prime_at(
    cplx omega, std::size_t node) const {
  require_nonzero(omega);
  const State& s = *state_;
  const int N = s.N;
  const std::size_t stride = static_cast<std::size_t>(N) + 1;
  const cplx* a = &s.alpha[node * stride];
  const cplx* mu = &s.mu[node * stride];
  const double l = s.data.l[node].real();
  const double rho = s.data.rho[node].real();
  const double srp = s.data.sqrt_r_over_p[node].real();
  const double log_rho = s.data.rho_prime[node].real() / rho;

  const cplx z = omega * l;
  std::array<cplx, kBesselOrderCap + 1> j;
  j_batch_into(z, N, j);

  cplx sa_even = 0.0, sa_odd = 0.0, sm_even = 0.0, sm_odd = 0.0;
  for (int n = 0; n <= N; ++n) {
    // (-1)^{floor(n/2)}
    const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
    const cplx jn = sign * j[n];
    if (n % 2 == 0) {
      sa_even += a[n] * jn;
      sm_even += mu[n] * jn;
    } else {
      sa_odd += a[n] * jn;
      sm_odd += mu[n] * jn;
    }
  }
  const cplx c = std::cos(z), sn = std::sin(z);
  Pair v{c / rho + 2.0 * sa_even, sn / rho + 2.0 * sa_odd};
  Pair dv{srp * ((s.coeffs.G1[node] * c - omega * sn) / rho + 2.0 * sm_even) - log_rho * v.v1,
          srp * ((s.coeffs.G2[node] * sn + omega * c) / rho + 2.0 * sm_odd) - log_rho * v.v2};
  return {v, dv};
}

SolutionEvaluator::Pair SolutionEvaluator::basis_at(cplx omega, std::size_t node) const {
  return basis_and_prime_at(omega, node).first;
}

SolutionEvaluator::Pair SolutionEvaluator::basis_prime_at(cplx omega, std::size_t node) const {
  return basis_and_prime_at(omega, node).second;
}

SolutionEvaluator::Pair SolutionEvaluator::basis_at_y(cplx omega, double y) const {
  require_nonzero(omega);
  const State& s = *state_;
  const double l = interpolate(s.data.l, y).real();
  const double rho = interpolate(s.data.rho, y).real();
  const cplx z = omega * l;
  const auto j = j_batch(z, s.N);
  Pair v{std::cos(z) / rho, std::sin(z) / rho};
  for (int n = 0; n <= s.N; ++n) {
    const double sign = ((n / 2) % 2 == 0) ? 2.0 : -2.0;
    const cplx term = sign * interpolate(s.coeffs.alpha[n], y) * j[n];
    (n % 2 == 0 ? v.v1 : v.v2) += term;
  }
  return v;
}

SolutionEvaluator::Basis SolutionEvaluator::eval_basis(cplx omega) const {
  Basis b;
  b.v1.resize(state_->m);
  b.v2.resize(state_->m);
  for (std::size_t i = 0; i < state_->m; ++i) {
    const auto v = basis_at(omega, i);
    b.v1[i] = v.v1;
    b.v2[i] = v.v2;
  }
  return b;
}

SolutionEvaluator::Basis SolutionEvaluator::eval_basis_prime(cplx omega) const {
  Basis b;
  b.v1.resize(state_->m);
  b.v2.resize(state_->m);
  for (std::size_t i = 0; i < state_->m; ++i) {
    const auto v = basis_prime_at(omega, i);
    b.v1[i] = v.v1;
    b.v2[i] = v.v2;
  }
  return b;
}

std::pair<cplx, cplx> SolutionEvaluator::solve_ivp_at(cplx omega, cplx u_a, cplx du_a,
                                                      std::size_t node) const {
  const State& s = *state_;
  const double rho_a = s.data.rho[0].real();
  const cplx g_a = s.seed.g[0];
  const cplx dg_a = s.seed.g_prime[0];
  if (omega == cplx(0.0)) {
    const cplx c1 = u_a / g_a;
    const cplx c2 = (du_a - c1 * dg_a) * s.data.p[0].real() * g_a;
    return {c1 * s.seed.g[node] + c2 * s.g_Y1[node],
            c1 * s.seed.g_prime[node] + c2 * s.g_Y1_prime[node]};
  }
  const cplx c1 = rho_a * u_a;
  const cplx c2 = (du_a - c1 * dg_a) * rho_a * s.data.sqrt_p_over_r[0].real() / omega;
  const auto [v, dv] = basis_and_prime_at(omega, node);
  return {c1 * v.v1 + c2 * v.v2, c1 * dv.v1 + c2 * dv.v2};
}

DenseSolution SolutionEvaluator::solve_ivp(cplx omega, cplx u_a, cplx du_a) const {
  const State& s = *state_;
  DenseSolution out;
  out.y.assign(s.data.y().points().begin(), s.data.y().points().end());
  out.u.resize(s.m);
  out.du.resize(s.m);
  for (std::size_t i = 0; i < s.m; ++i) {
    const auto [u, du] = solve_ivp_at(omega, u_a, du_a, i);
    out.u[i] = u;
    out.du[i] = du;
  }
  return out;
}

cplx SolutionEvaluator::characteristic(cplx omega, const BoundarySpec& bc) const {
  const double norm = std::hypot(bc.a1, bc.a2);
  const auto [u, du] = solve_ivp_at(omega, bc.a2 / norm, -bc.a1 / norm, state_->m - 1);
  return bc.b1 * u + bc.b2 * du;
}

namespace {

struct Bracket {
  double lo, hi;
  double f_lo, f_hi;
};

template <class F>
std::vector<double> evaluate_parallel(const std::vector<double>& xs, F f, unsigned threads) {
  std::vector<double> out(xs.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(xs.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
    return out;
  }
  std::vector<std::future<void>> jobs;
  const std::size_t chunk = (xs.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(xs.size(), lo + chunk);
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = f(xs[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

// Bisection down to a relative width of 1e-6, then secant steps kept inside
// the bracket until a step falls below 1e-13 max(1, x); one further step is
// taken after that and the iterate with the smallest |f| is returned.
template <class F>
std::pair<double, int> refine_root(F f, Bracket br) {
  int iters = 0;
  double lo = br.lo, hi = br.hi, flo = br.f_lo, fhi = br.f_hi;
  if (flo == 0.0) return {lo, 0};
  if (fhi == 0.0) return {hi, 0};
  while (hi - lo > 1e-6 * std::max(1.0, std::abs(hi)) && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    ++iters;
    if (fm == 0.0) return {mid, iters};
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double f_best = std::min(std::abs(flo), std::abs(fhi));
  double xa = lo, fa = flo, xb = hi, fb = fhi;
  bool finishing = false;
  for (int k = 0; k < 60; ++k) {
    double next = xb - fb * (xb - xa) / (fb - fa);
    if (!std::isfinite(next) || next < lo || next > hi) next = 0.5 * (lo + hi);
    const double fn = f(next);
    ++iters;
    if (std::abs(fn) < f_best) {
      best = next;
      f_best = std::abs(fn);
    }
    if (fn == 0.0 || finishing) break;
    const double step = std::abs(next - xb);
    if ((fn < 0.0) == (flo < 0.0)) {
      lo = next;
      flo = fn;
    } else {
      hi = next;
      fhi = fn;
    }
    xa = xb;
    fa = fb;
    xb = next;
    fb = fn;
    const double tol = 1e-13 * std::max(1.0, std::abs(next));
    if (step <= tol || hi - lo <= tol) finishing = true;
  }
  return {best, iters};
}

}  // namespace

EigenSearch SolutionEvaluator::find_eigenvalues(const BoundarySpec& bc,
                                                const EigenOptions& options) const {
  bc.validate();
  const double b = state_->data.b;
  EigenSearch out;
  double step = options.step_factor * std::numbers::pi / b;
  if (!(step > 0.0)) throw DomainError("scan step must be positive");

  double omega_max = options.omega_max;
  // An explicit omega_max is a hard limit; a derived one grows until count is met.
  const bool grow = omega_max <= 0.0;
  if (grow && options.count > 0)
    omega_max = (options.count + 3) * std::numbers::pi / b;

  auto delta_real = [&](double w) { return characteristic(cplx(w), bc).real(); };
  auto delta_imag_axis = [&](double t) { return characteristic(cplx(0.0, t), bc).real(); };

  // Scan [lo, hi] with the given step; returns sign-change brackets.
  auto scan = [&](auto&& f, double lo, double hi, double h) {
    std::vector<double> xs;
    const auto K = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    for (std::size_t k = 0; k <= K; ++k) xs.push_back(std::min(hi, lo + k * h));
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    const auto fs = evaluate_parallel(xs, f, options.threads);
    std::vector<Bracket> brackets;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      if (fs[k] == 0.0) {
        brackets.push_back({xs[k], xs[k], 0.0, 0.0});
      } else if ((fs[k] < 0.0) != (fs[k + 1] < 0.0) && fs[k + 1] != 0.0) {
        brackets.push_back({xs[k], xs[k + 1], fs[k], fs[k + 1]});
      }
    }
    if (!fs.empty() && fs.back() == 0.0 && xs.size() > 1)
      brackets.push_back({xs.back(), xs.back(), 0.0, 0.0});
    return brackets;
  };

  auto refine_all = [&](auto&& f, const std::vector<Bracket>& brs) {
    std::vector<std::pair<double, int>> roots(brs.size());
    std::vector<double> idx(brs.size());
    for (std::size_t k = 0; k < brs.size(); ++k) idx[k] = static_cast<double>(k);
    std::vector<double> scale(brs.size());
    evaluate_parallel(
        idx,
        [&](double kd) {
          const auto k = static_cast<std::size_t>(kd);
          roots[k] = refine_root(f, brs[k]);
          scale[k] = std::max({std::abs(brs[k].f_lo), std::abs(brs[k].f_hi),
                               std::numeric_limits<double>::min()});
          return 0.0;
        },
        options.threads);
    std::vector<EigenResult> res;
    for (std::size_t k = 0; k < brs.size(); ++k) {
      EigenResult e;
      e.omega = roots[k].first;
      e.refinement_iterations = roots[k].second;
      e.char_residual = std::abs(f(e.omega)) / scale[k];
      res.push_back(e);
    }
    return res;
  };

  std::vector<EigenResult> negative;
  if (options.lambda_floor < 0.0) {
    const double t_max = std::sqrt(-options.lambda_floor);
    auto brs = scan(delta_imag_axis, step * 1e-3, t_max, step);
    for (auto& e : refine_all(delta_imag_axis, brs)) {
      e.imaginary = true;
      e.lambda = -e.omega * e.omega;
      negative.push_back(e);
    }
  }

  std::vector<EigenResult> positive;
  if (omega_max > 0.0) {
    for (int attempt = 0;; ++attempt) {
      auto brs = scan(delta_real, 0.0, omega_max, step);
      const int weyl = static_cast<int>(std::floor(omega_max * b / std::numbers::pi));
      const int found = static_cast<int>(brs.size());
      if (std::abs(found - weyl) > 2 && attempt < 3) {
        std::ostringstream os;
        os << "found " << found << " roots below omega = " << omega_max << " but the Weyl estimate is "
           << weyl << "; rescanning with step " << step / 2;
        out.warnings.push_back(os.str());
        step /= 2;
        ++out.rescans;
        continue;
      }
      if (std::abs(found - weyl) > 2) {
        std::ostringstream os;
        os << "eigenvalue count " << found << " still differs from Weyl estimate " << weyl;
        out.warnings.push_back(os.str());
      }
      positive = refine_all(delta_real, brs);
      if (grow && options.count > 0 &&
          static_cast<int>(positive.size() + negative.size()) < options.count && attempt < 8) {
        omega_max *= 1.25;
        continue;
      }
      break;
    }
    for (auto& e : positive) e.lambda = e.omega * e.omega;
  }

  std::sort(negative.begin(), negative.end(),
            [](const EigenResult& x, const EigenResult& y) { return x.lambda < y.lambda; });
  out.eigenvalues = std::move(negative);
  out.eigenvalues.insert(out.eigenvalues.end(), positive.begin(), positive.end());
  if (options.count > 0 && static_cast<int>(out.eigenvalues.size()) > options.count)
    out.eigenvalues.resize(options.count);
  for (std::size_t k = 0; k < out.eigenvalues.size(); ++k)
    out.eigenvalues[k].index = static_cast<int>(k) + 1;
  out.scan_step = step;
  return out;
}

}  // namespace nsbf
