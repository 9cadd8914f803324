#include <cmath>

#include "doctest.h"
#include "nsbf/error.hpp"
#include "support.hpp"

using namespace nsbf;

namespace {

// Index of the first node with y >= y0.
std::size_t node_at(const Grid& g, double y0) {
  std::size_t i = 0;
  while (g[i] < y0) ++i;
  return i;
}

double max_rel_diff(const SampledFn& f, const SampledFn& ref, std::size_t from) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = from; i < f.size(); ++i) {
    scale = std::max(scale, std::abs(ref[i]));
    diff = std::max(diff, std::abs(f[i] - ref[i]));
  }
  return diff / scale;
}

const test::Built& kamke_raw() {
  static const test::Built b = [] {
    test::Built k = test::kamke();
    CoefficientOptions o;
    o.N = 20;
    o.cleanup = false;
    k.coeffs = compute_coefficients(k.seed, k.data, o);
    return k;
  }();
  return b;
}

}  // namespace

TEST_SUITE("nsbf_coefficients") {

TEST_CASE("Legendre table") {
  const LegendreTable t(20);
  CHECK(t(2, 2) == 1.5);
  CHECK(t(0, 2) == -0.5);
  CHECK(t(3, 3) == 2.5);
  CHECK(t(1, 3) == -1.5);
  for (int n = 0; n <= 20; ++n) {
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      sum += t(k, n);
      if ((k + n) % 2 == 1) REQUIRE(t(k, n) == 0.0);
    }
    CHECK_MESSAGE(sum == doctest::Approx(1.0).epsilon(1e-12), "n = " << n);
  }
  CHECK_THROWS_AS(LegendreTable(-1), DomainError);
}

TEST_CASE("recurrence constants") {
  CHECK(recurrence_constant(1) == 1.0);
  CHECK(recurrence_constant(2) == 6.0);
  CHECK(recurrence_constant(3) == 10.0);
  CHECK(recurrence_constant(10) == 38.0);
}

TEST_CASE("G functions") {
  {
    const auto& k = test::degenerate();
    const auto G = compute_G(k.seed, k.data);
    CHECK(G.G1.max_abs() <= 1e-15);
    CHECK(G.G2.max_abs() <= 1e-15);
  }
  const auto& k = test::kamke();
  const auto G = compute_G(k.seed, k.data);
  CHECK(std::abs(G.G1[0] - k.seed.h) <= 1e-15);
  CHECK(std::abs(G.G2[0]) <= 1e-15);
  CHECK(test::max_abs_diff(G.G2, G.G1 - k.seed.h) <= 1e-15);
  // h + (1/2) \int_0^{l(y)} Q(x) dx, integrated in y.
  const auto Q = transformed_potential(k.problem, k.data);
  const auto oracle = cumulative_integral(Q * k.data.sqrt_r_over_p) * 0.5 + k.seed.h;
  CHECK(test::max_abs_diff(G.G1, oracle) <= 1e-7);
}

TEST_CASE("seed coefficients") {
  {
    const auto& k = test::degenerate();
    const auto sc = seed_coefficients(k.seed, k.data, compute_G(k.seed, k.data));
    CHECK(sc.alpha_0.max_abs() <= 1e-15);
    CHECK(sc.mu_0.max_abs() <= 1e-15);
    CHECK(std::abs(sc.alpha_m1[5] - 0.5) <= 1e-15);
  }
  const auto& k = test::kamke();
  const auto G = compute_G(k.seed, k.data);
  const auto sc = seed_coefficients(k.seed, k.data, G);
  CHECK(std::abs(sc.alpha_0[0]) <= 1e-15);
  // (g rho)'(0) = g'(0) + g(0) rho'(0) = i - 1 = h = G1(0), so mu_0(0) = 0.
  CHECK(std::abs(sc.mu_0[0]) <= 1e-12);
  // alpha_0 and mu_0 from closed forms at y = 1.
  const std::size_t i = node_at(k.data.y(), 1.0);
  const double y = k.data.y()[i];
  CHECK(std::abs(sc.alpha_0[i] - 0.5 * (test::kamke_g(y) - 1.0 / test::kamke_rho(y))) <= 1e-14);
  CHECK(test::max_abs_diff(sc.alpha_0, k.coeffs.alpha[0]) <= 1e-15);
}

TEST_CASE("degenerate problem has no corrections") {
  const auto& c = test::degenerate().coeffs;
  for (int n = 0; n <= c.N; ++n) {
    CHECK(c.alpha[n].max_abs() <= 1e-14);
    CHECK(c.mu[n].max_abs() <= 1e-14);
  }
  const auto rep = verify_coefficients(c, test::degenerate().data,
                                       transformed_potential(test::degenerate().problem, test::degenerate().data));
  CHECK(rep.N_opt == 0);
  for (const auto& row : rep.rows) CHECK(row.max() <= 1e-14);
}

TEST_CASE("Sigma and Upsilon vanish at the left endpoint") {
  const auto& k = test::kamke();
  const auto G = compute_G(k.seed, k.data);
  const auto sc = seed_coefficients(k.seed, k.data, G);
  std::vector<RecurrenceLevel> lv;
  lv.push_back({{}, {}, sc.alpha_0, sc.mu_0});
  lv.push_back(recurrence_base(k.seed, k.data, G));
  for (int n = 2; n <= 8; ++n) lv.push_back(recurrence_step(n, lv[n - 2].Sigma, lv[n - 2].Upsilon, k.seed, k.data));
  for (int n = 1; n <= 8; ++n) {
    CHECK(std::abs(lv[n].Sigma[0]) <= 1e-12 * lv[n].Sigma.max_abs());
    CHECK(std::abs(lv[n].Upsilon[0]) <= 1e-12 * lv[n].Upsilon.max_abs());
  }
  CHECK_THROWS_AS(recurrence_step(1, lv[0].Sigma, lv[0].Upsilon, k.seed, k.data), DomainError);
}

TEST_CASE("recurrent and direct formulas agree for n <= 3") {
  const auto& k = kamke_raw();
  const auto fp = formal_powers(k.seed, k.data, 3);
  const auto G = compute_G(k.seed, k.data);
  const std::size_t from = node_at(k.data.y(), 0.2);
  const auto a0 = direct_alpha(0, fp, k.data);
  CHECK(test::max_abs_diff(a0, k.coeffs.alpha[0]) <= 1e-14);
  for (int n = 1; n <= 3; ++n) {
    CHECK_MESSAGE(max_rel_diff(direct_alpha(n, fp, k.data), k.coeffs.alpha[n], from) <= 1e-6, "alpha n = " << n);
    CHECK_MESSAGE(max_rel_diff(direct_mu(n, fp, k.seed, k.data, G.G2), k.coeffs.mu[n], from) <= 1e-6, "mu n = " << n);
  }
}

TEST_CASE("mu_1 from alpha_1") {
  const auto& k = kamke_raw();
  const auto G = compute_G(k.seed, k.data);
  const auto mu1 = mu1_from_alpha1(k.coeffs.alpha[1], k.data, G);
  CHECK(max_rel_diff(mu1, k.coeffs.mu[1], node_at(k.data.y(), 0.2)) <= 1e-6);
}

TEST_CASE("direct formulas are capped") {
  const auto& k = test::degenerate();
  const auto fp = formal_powers(k.seed, k.data, kDirectFormulaCap + 1);
  CHECK_NOTHROW(direct_alpha(kDirectFormulaCap, fp, k.data));
  CHECK_THROWS_AS(direct_alpha(kDirectFormulaCap + 1, fp, k.data), RangeError);
  CHECK_THROWS_AS(direct_mu(kDirectFormulaCap + 1, fp, k.seed, k.data, SampledFn::constant(k.data.grid, 0.0)),
                  RangeError);
}

TEST_CASE("cleanup bounds alpha_20 near the endpoint") {
  const auto& d = test::kamke().data;
  const std::size_t split = node_at(d.y(), 0.2);
  auto near = [&](const SampledFn& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < split; ++i) m = std::max(m, std::abs(f[i]));
    return m;
  };
  auto far = [&](const SampledFn& f) {
    double m = 0.0;
    for (std::size_t i = split; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
  };
  const auto& clean = test::kamke().coeffs.alpha[20];
  const auto& raw = kamke_raw().coeffs.alpha[20];
  CHECK(near(clean) <= far(clean));
  CHECK(near(raw) > 1e3 * far(raw));
}

TEST_CASE("cleanup only zeroes and is idempotent") {
  const auto& c = test::kamke().coeffs;
  for (int n = 1; n <= c.N; ++n) {
    const std::size_t cut = c.cut_alpha_index[n];
    const auto once = apply_cut(c.alpha[n], cut);
    CHECK(test::max_abs_diff(apply_cut(once, cut), once) == 0.0);
    for (std::size_t i = 0; i < once.size(); ++i)
      REQUIRE((once[i] == c.alpha[n][i] || once[i] == cplx(0.0)));
    for (std::size_t i = 0; i <= cut; ++i) REQUIRE(c.alpha[n][i] == cplx(0.0));
    CHECK(c.cut_alpha[n] == c.alpha[n].grid()[cut]);
    for (std::size_t i = 0; i <= c.cut_mu_index[n]; ++i) REQUIRE(c.mu[n][i] == cplx(0.0));
  }
}

TEST_CASE("zeros of a real coefficient are not cut") {
  // Real seeds give real coefficients whose sign changes are genuine minima
  // of |c|; only the rounding-dominated region next to A may be cut.
  const auto k = test::build(random_smooth_problem(3));
  REQUIRE(k.seed.real);
  // Beyond N_opt whole coefficients are rounding and may be cut anywhere.
  const int n_opt = verify_coefficients(k.coeffs, k.data, transformed_potential(k.problem, k.data)).N_opt;
  CHECK(n_opt >= 30);
  for (int n = 1; n <= n_opt; ++n) {
    CHECK_MESSAGE(k.coeffs.cut_alpha[n] <= 0.02, "n = " << n);
    CHECK_MESSAGE(k.coeffs.cut_mu[n] <= 0.02, "n = " << n);
  }
}

TEST_CASE("local minimum cut") {
  const auto g = make_grid(0.0, 1.0, 1001);
  // Falls to a dip at y = 0.05, then rises into the bulk.
  const auto f = SampledFn::sample(g, [](double y) { return y < 0.05 ? 0.02 * (0.05 - y) + 1e-6 : y - 0.05 + 1e-6; });
  const std::size_t cut = local_minimum_cut(f);
  CHECK(std::abs((*g)[cut] - 0.05) <= 0.01);
  // Monotone functions have no interior minimum.
  CHECK(local_minimum_cut(SampledFn::sample(g, [](double y) { return y; })) == 0);
}

TEST_CASE("plateau cut") {
  const Grid g(0.0, 1.0, 101);
  std::vector<cplx> before(101, 1.0), after(101, 0.5);
  for (std::size_t i = 0; i < 10; ++i) after[i] = 2.0;
  CHECK(plateau_cut(before, after, g) == 9);
  CHECK(plateau_cut(before, before, g) == 0);
}

TEST_CASE("verification of the exponential-weight problem") {
  const auto& k = test::kamke();
  const auto rep = verify_coefficients(k.coeffs, k.data, transformed_potential(k.problem, k.data));
  REQUIRE(rep.rows.size() == 51);
  CHECK(rep.trim_from == doctest::Approx(0.2));
  CHECK(rep.N_opt >= 34);
  CHECK(rep.N_opt <= 42);
  const auto& best = rep.rows[rep.N_opt];
  CHECK(best.alpha_alt <= 1e-6);
  CHECK(best.max() <= 1e-6);
  // Residuals fall by orders of magnitude before the plateau.
  CHECK(rep.rows[0].max() > 1e3 * best.max());
  for (const auto& row : rep.rows) CHECK(row.max() >= best.max());
}

TEST_CASE("alpha_n decays with n") {
  const auto& c = test::kamke().coeffs;
  const auto& d = test::kamke().data;
  const std::size_t from = node_at(d.y(), 0.2);
  auto sup = [&](const SampledFn& f) {
    double m = 0.0;
    for (std::size_t i = from; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
  };
  for (int n = 6; n <= 30; ++n) CHECK_MESSAGE(sup(c.alpha[n]) <= 3.0 * sup(c.alpha[n - 1]), "n = " << n);
  CHECK(sup(c.alpha[30]) < 1e-3 * sup(c.alpha[5]));
}

TEST_CASE("coefficients need N >= 0") {
  const auto& k = test::degenerate();
  CoefficientOptions o;
  o.N = -1;
  CHECK_THROWS_AS(compute_coefficients(k.seed, k.data, o), DomainError);
}

}
