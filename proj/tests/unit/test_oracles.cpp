#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nsbf/error.hpp"
#include "support.hpp"

using namespace nsbf;

TEST_SUITE("oracles") {

TEST_CASE("reference integration of the degenerate problem") {
  const auto pb = degenerate_problem();
  const Grid g(pb.A, pb.B, 201);
  const auto ref = integrate_reference(pb, g, 1.0, 1.0, 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    err = std::max({err, std::abs(ref.u[i] - std::cos(g[i])), std::abs(ref.du[i] + std::sin(g[i]))});
  CHECK(err <= 1e-12);
  CHECK(ref.halving_change <= 1e-12);
}

TEST_CASE("reference integration is linear") {
  const auto pb = kamke_problem();
  const Grid g(0.0, 2.0, 101);
  ReferenceOptions o;
  o.halving_check = false;
  const auto a = integrate_reference(pb, g, cplx(400.0, 3.0), 1.0, 1.0, o);
  const auto b = integrate_reference(pb, g, cplx(400.0, 3.0), 2.0, 2.0, o);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(b.u[i] - 2.0 * a.u[i]) / std::abs(a.u[i]));
  CHECK(err <= 1e-14);
}

TEST_CASE("reference integration is stable under tolerance halving") {
  const auto pb = kamke_problem();
  const auto ref = integrate_reference(pb, Grid(0.0, 2.0, 201), 52.0 * 52.0, 1.0, 1.0);
  CHECK(ref.halving_change <= 1e-10);
  const auto [uB, duB] = integrate_reference_endpoint(pb, 52.0 * 52.0, 1.0, 1.0);
  CHECK(std::abs(uB - ref.u.back()) <= 1e-10);
  CHECK_THROWS_AS(integrate_reference(pb, Grid(0.0, 2.0, 201), 1.0, 1.0, 1.0, {1e-15, false}), DomainError);
  CHECK_THROWS_AS(integrate_reference(pb, Grid(0.0, 1.0, 201), 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("confluent hypergeometric series") {
  CHECK(std::abs(hypergeometric_1f1(0.25, 0.5, 0.0) - 1.0) <= 1e-16);
  for (cplx z : {cplx(0.5), cplx(-3.0), cplx(0.0, 20.0), cplx(2.0, -7.0)}) {
    CHECK(std::abs(hypergeometric_1f1(1.3, 1.3, z) - std::exp(z)) <= 1e-14 * std::abs(std::exp(z)));
    const cplx expected = (std::exp(z) - 1.0) / z;
    CHECK(std::abs(hypergeometric_1f1(1.0, 2.0, z) - expected) <= 1e-14 * std::abs(expected));
  }
  CHECK_THROWS_AS(hypergeometric_1f1(1.0, 2.0, cplx(0.0, 250.0)), RangeError);
}

TEST_CASE("exact solution of the exponential-weight problem") {
  const auto [u0, du0] = exact_kamke_solution(52.0, 0.0);
  CHECK(std::abs(u0 - 1.0) <= 1e-15);
  CHECK(std::abs(du0 - 1.0) <= 1e-13);
  for (double y : {0.0, 0.5, 1.3, 2.0}) {
    const auto [u, du] = exact_kamke_solution(0.0, y);
    CHECK(std::abs(u - std::exp(y)) <= 1e-14 * std::exp(y));
    CHECK(std::abs(du - std::exp(y)) <= 1e-14 * std::exp(y));
  }
  CHECK_THROWS_AS(exact_kamke_solution(210.0, 2.0), RangeError);
}

TEST_CASE("the two oracles agree") {
  const auto pb = kamke_problem();
  const Grid g(0.0, 2.0, 41);
  for (double w : {10.0, 52.0}) {
    const auto ref = integrate_reference(pb, g, w * w, 1.0, 1.0);
    for (std::size_t i = 0; i < g.size() && w * g[i] * g[i] <= kKummerArgumentCap; ++i) {
      const auto [u, du] = exact_kamke_solution(w, g[i]);
      REQUIRE_MESSAGE(std::abs(u - ref.u[i]) <= 1e-8, "omega = " << w << " y = " << g[i]);
      REQUIRE(std::abs(du - ref.du[i]) <= 1e-8 * std::max(1.0, w));
    }
  }
}

TEST_CASE("reference eigenvalues of the degenerate problem") {
  const auto ev = reference_eigenvalues(degenerate_problem(), {1, 0, 1, 0}, 10);
  REQUIRE(ev.size() == 10);
  for (int k = 1; k <= 10; ++k) CHECK(std::abs(ev[k - 1] - k * k) <= 1e-10);
  CHECK_THROWS_AS(reference_eigenvalues(degenerate_problem(), {1, 0, 1, 0}, 201), DomainError);
}

TEST_CASE("reference eigenvalues of the exponential-weight problem") {
  const auto ev = reference_eigenvalues(kamke_problem(), kamke_boundary(), 100);
  REQUIRE(ev.size() == 100);
  CHECK(std::abs(std::sqrt(ev[49]) - 52.0) <= 1.0);
  CHECK(std::abs(std::sqrt(ev[99]) - 105.0) <= 1.0);
  const double b = reference_transformed_length(kamke_problem());
  for (std::size_t i = 1; i < ev.size(); ++i) REQUIRE(std::sqrt(ev[i]) - std::sqrt(ev[i - 1]) >= 0.5 * M_PI / b);
  // Frozen from this oracle; the series solver is checked against them.
  CHECK(std::abs(ev[0] - 0.22072511661951771) <= 1e-12);
  CHECK(std::abs(ev[49] - 2709.0964006088934) <= 1e-9);
  CHECK(std::abs(ev[99] - 11056.832058387081) <= 1e-8);
}

TEST_CASE("transformed length by quadrature") {
  CHECK(std::abs(reference_transformed_length(kamke_problem()) - test::kamke_b()) <= 1e-14);
  CHECK(std::abs(reference_transformed_length(degenerate_problem(1.0, 4.0)) - 3.0) <= 1e-14);
}

TEST_CASE("problem catalog") {
  const auto a = random_smooth_problem(7);
  const auto b = random_smooth_problem(7);
  const auto c = random_smooth_problem(8);
  for (double y : {0.0, 0.3, 1.0}) {
    CHECK(a.p(y) == b.p(y));
    CHECK(a.q(y) == b.q(y));
    CHECK(a.r(y) > 0.0);
    CHECK(a.p(y) > 0.0);
  }
  CHECK(a.p(0.5) != c.p(0.5));
  const auto bc = kamke_boundary();
  CHECK(bc.a1 * 1.0 + bc.a2 * 1.0 == 0.0);  // u'(0) = u(0)
  CHECK(bc.b1 * 1.0 + bc.b2 * (-1.0) == 0.0);  // u'(2) = -u(2)
}

TEST_CASE("random problems run through the pipeline") {
  for (std::uint64_t s : {1u, 2u, 3u}) {
    const auto pb = random_smooth_problem(s);
    const auto k = test::build(pb);
    const auto rep = verify_coefficients(k.coeffs, k.data, transformed_potential(pb, k.data));
    const SolutionEvaluator e(k.data, k.seed, k.coeffs, rep.N_opt);
    const auto sol = e.solve_ivp(8.0, 1.0, 0.0);
    ReferenceOptions o;
    o.halving_check = false;
    const auto ref = integrate_reference(pb, k.data.y(), 64.0, 1.0, 0.0, o);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.u.size(); ++i) err = std::max(err, std::abs(sol.u[i] - ref.u[i]));
    CHECK_MESSAGE(err <= 1e-12, "seed " << s);
    CHECK_MESSAGE(rep.rows[rep.N_opt].max() <= 1e-5, "seed " << s);
  }
}

}
