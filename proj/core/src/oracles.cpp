#include "nsbf/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/numeric/odeint.hpp>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

namespace odeint = boost::numeric::odeint;
using ld = long double;
using lcplx = std::complex<ld>;
// (Re v, Im v, Re p v', Im p v')
using State = std::array<ld, 4>;

struct System {
  const SLProblem& problem;
  lcplx lambda;
  void operator()(const State& s, State& ds, ld y) const {
    const double yd = static_cast<double>(y);
    const ld p = problem.p(yd), q = problem.q(yd), r = problem.r(yd);
    const lcplx v(s[0], s[1]), w(s[2], s[3]);
    const lcplx dv = w / p;
    const lcplx dw = (q - lambda * r) * v;
    ds = {dv.real(), dv.imag(), dw.real(), dw.imag()};
  }
};

State initial_state(const SLProblem& problem, cplx u_a, cplx du_a) {
  const lcplx w = lcplx(du_a) * static_cast<ld>(problem.p(problem.A));
  return {static_cast<ld>(u_a.real()), static_cast<ld>(u_a.imag()), w.real(), w.imag()};
}

std::pair<cplx, cplx> unpack(const SLProblem& problem, const State& s, double y) {
  const double p = problem.p(y);
  return {cplx(static_cast<double>(s[0]), static_cast<double>(s[1])),
          cplx(static_cast<double>(s[2] / p), static_cast<double>(s[3] / p))};
}

// Initial data are scaled to unit size before integrating, which makes the
// step sequence independent of their magnitude.
double data_scale(cplx u_a, cplx du_a) {
  const double s = std::max(std::abs(u_a), std::abs(du_a));
  return s > 0.0 ? s : 1.0;
}

void check_tolerance(double tol) {
  if (!(tol >= 1e-14)) {
    std::ostringstream os;
    os << "reference tolerance " << tol << " below 1e-14";
    throw DomainError(os.str());
  }
}

std::vector<std::pair<cplx, cplx>> run_dense(const SLProblem& problem, const Grid& grid,
                                             cplx lambda, cplx u_a, cplx du_a, double tol) {
  System sys{problem, lcplx(lambda)};
  const double scale = data_scale(u_a, du_a);
  State s = initial_state(problem, u_a / scale, du_a / scale);
  std::vector<ld> times(grid.points().begin(), grid.points().end());
  std::vector<std::pair<cplx, cplx>> out;
  out.reserve(times.size());
  odeint::bulirsch_stoer<State, ld> stepper(tol, tol);
  odeint::integrate_times(stepper, sys, s, times.begin(), times.end(),
                          static_cast<ld>(grid.step()), [&](const State& x, ld y) {
                            const auto [u, du] = unpack(problem, x, static_cast<double>(y));
                            out.emplace_back(u * scale, du * scale);
                          });
  if (out.size() != times.size()) throw NumericalError("reference integration stopped early");
  return out;
}

}  // namespace

std::pair<cplx, cplx> integrate_reference_endpoint(const SLProblem& problem, cplx lambda, cplx u_a,
                                                   cplx du_a, double tolerance) {
  check_tolerance(tolerance);
  System sys{problem, lcplx(lambda)};
  const double scale = data_scale(u_a, du_a);
  State s = initial_state(problem, u_a / scale, du_a / scale);
  odeint::bulirsch_stoer<State, ld> stepper(tolerance, tolerance);
  const ld h0 = (static_cast<ld>(problem.B) - problem.A) / 1000;
  odeint::integrate_adaptive(stepper, sys, s, static_cast<ld>(problem.A),
                             static_cast<ld>(problem.B), h0);
  for (ld x : s)
    if (!std::isfinite(x)) throw NumericalError("reference integration produced non-finite values");
  const auto [u, du] = unpack(problem, s, problem.B);
  return {u * scale, du * scale};
}

ReferenceSolution integrate_reference(const SLProblem& problem, const Grid& grid, cplx lambda,
                                      cplx u_a, cplx du_a, const ReferenceOptions& options) {
  check_tolerance(options.tolerance);
  if (grid.a() != problem.A || grid.b() != problem.B)
    throw DomainError("reference grid does not span the problem interval");
  const auto samples = run_dense(problem, grid, lambda, u_a, du_a, options.tolerance);
  ReferenceSolution ref;
  ref.y.assign(grid.points().begin(), grid.points().end());
  ref.tolerance = options.tolerance;
  ref.method = "bulirsch-stoer/long double";
  for (const auto& [u, du] : samples) {
    ref.u.push_back(u);
    ref.du.push_back(du);
  }
  if (options.halving_check) {
    const auto half = integrate_reference_endpoint(problem, lambda, u_a, du_a,
                                                   std::max(1e-14, options.tolerance / 2));
    const double scale = std::max(1.0, std::abs(ref.u.back()));
    ref.halving_change = std::abs(half.first - ref.u.back()) / scale;
    if (ref.halving_change > 10 * options.tolerance * std::max(1.0, std::abs(lambda))) {
      std::ostringstream os;
      os << "reference solution moved by " << ref.halving_change << " under tolerance halving";
      throw NumericalError(os.str());
    }
  }
  return ref;
}

namespace {

namespace mp = boost::multiprecision;
using mp_real = mp::number<mp::cpp_bin_float<120>>;
using mp_cplx = mp::number<mp::complex_adaptor<mp::cpp_bin_float<120>>>;

mp_cplx to_mp(cplx z) { return mp_cplx(mp_real(z.real()), mp_real(z.imag())); }

cplx to_double(const mp_cplx& z) {
  return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
}

mp_cplx series_1f1(const mp_cplx& a, const mp_cplx& b, const mp_cplx& z) {
  mp_cplx term = 1, sum = 1;
  // Terms peak near k = |z| at about e^|z|, far inside the working
  // precision for |z| <= 200; the tail only has to fall below double rounding.
  const mp_real eps("1e-30");
  const mp_real z_abs = abs(z);
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
    if (k > z_abs && abs(term) < eps * abs(sum)) return sum;
  }
  throw NumericalError("1F1 series did not converge");
}

void check_argument(double z_abs) {
  if (!(z_abs <= kKummerArgumentCap)) {
    std::ostringstream os;
    os << "|z| = " << z_abs << " exceeds the 1F1 series cap " << kKummerArgumentCap
       << "; use integrate_reference instead";
    throw RangeError(os.str());
  }
}

}  // namespace

cplx hypergeometric_1f1(cplx a, cplx b, cplx z) {
  check_argument(std::abs(z));
  return to_double(series_1f1(to_mp(a), to_mp(b), to_mp(z)));
}

std::pair<cplx, cplx> exact_kamke_solution(double omega, double y) {
  check_argument(std::abs(omega * y * y));
  const mp_cplx i(0, 1);
  const mp_real w(omega), yy(y);
  const mp_cplx a = (mp_real(1) + i * w) / 4;
  const mp_real half = mp_real(1) / 2;
  const mp_cplx z = i * w * yy * yy;
  const mp_cplx F = series_1f1(a, mp_cplx(half), z);
  // d/dz 1F1(a, b, z) = (a / b) 1F1(a + 1, b + 1, z)
  const mp_cplx dF = a / half * series_1f1(a + 1, mp_cplx(half + 1), z);
  const mp_cplx E = exp(yy - i * yy * yy * w / 2);
  const mp_cplx u = E * F;
  const mp_cplx du = E * ((1 - i * w * yy) * F + dF * 2 * i * w * yy);
  return {to_double(u), to_double(du)};
}

double reference_transformed_length(const SLProblem& problem) {
  auto f = [&](double y) { return std::sqrt(problem.r(y) / problem.p(y)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, problem.A, problem.B, 15,
                                                                       1e-15);
}

std::vector<double> reference_eigenvalues(const SLProblem& problem, const BoundarySpec& bc,
                                          int count, const ReferenceEigenOptions& options) {
  bc.validate();
  if (count < 0 || count > 200) throw DomainError("reference eigenvalue count must be in [0, 200]");
  if (count == 0) return {};
  const double b = reference_transformed_length(problem);
  const double norm = std::hypot(bc.a1, bc.a2);
  const cplx u_a = bc.a2 / norm, du_a = -bc.a1 / norm;

  // Delta as a function of lambda; real for real lambda.
  auto delta = [&](double lambda) {
    const auto [u, du] = integrate_reference_endpoint(problem, lambda, u_a, du_a, options.tolerance);
    return (bc.b1 * u + bc.b2 * du).real();
  };

  std::vector<double> roots;
  auto refine = [&](double lo, double hi, double flo, double fhi) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    boost::uintmax_t iters = 200;
    auto tol = [](double x, double y) {
      return std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x));
    };
    const auto r = boost::math::tools::toms748_solve(delta, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
  };

  // Scan in t with lambda = sign * t^2 so the cell width follows the spacing
  // of sqrt(lambda).
  auto sweep = [&](double sign, double t_lo, double t_hi, double step) {
    std::vector<double> found;
    double t0 = t_lo, f0 = delta(sign * t0 * t0);
    for (double t1 = t_lo + step;; t1 += step) {
      t1 = std::min(t1, t_hi);
      const double f1 = delta(sign * t1 * t1);
      if ((f0 < 0.0) != (f1 < 0.0) || f1 == 0.0) {
        double lo = sign * t0 * t0, hi = sign * t1 * t1, flo = f0, fhi = f1;
        if (lo > hi) {
          std::swap(lo, hi);
          std::swap(flo, fhi);
        }
        found.push_back(refine(lo, hi, flo, fhi));
      }
      t0 = t1;
      f0 = f1;
      if (t1 >= t_hi || (sign > 0 && static_cast<int>(found.size() + roots.size()) >= count)) break;
    }
    return found;
  };

  const double step = options.step_factor * std::numbers::pi / b;
  if (options.lambda_floor < 0.0) {
    auto neg = sweep(-1.0, 0.0, std::sqrt(-options.lambda_floor), step);
    roots.insert(roots.end(), neg.begin(), neg.end());
    std::sort(roots.begin(), roots.end());
  }
  const double t_max = (count + 5) * std::numbers::pi / b * 1.5 + 10.0;
  auto pos = sweep(1.0, 0.0, t_max, step);
  roots.insert(roots.end(), pos.begin(), pos.end());
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) {
                            return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
                          }),
              roots.end());
  if (static_cast<int>(roots.size()) < count) {
    std::ostringstream os;
    os << "found " << roots.size() << " reference eigenvalues, wanted " << count;
    throw NumericalError(os.str());
  }
  roots.resize(count);
  return roots;
}

}  // namespace nsbf
