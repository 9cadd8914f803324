#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nsbf/error.hpp"
#include "support.hpp"

using namespace nsbf;

namespace {

CoefficientFn constant_fn(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

SLProblem constant_problem(double p, double q, double r, double A, double B) {
  SLProblem pb;
  pb.p = constant_fn(p);
  pb.q = constant_fn(q);
  pb.r = constant_fn(r);
  pb.A = A;
  pb.B = B;
  return pb;
}

}  // namespace

TEST_SUITE("liouville") {

TEST_CASE("identity transform") {
  const auto pb = degenerate_problem();
  const auto d = build_liouville(pb, make_grid(pb.A, pb.B, 2001));
  CHECK(d.b == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  for (std::size_t i = 0; i < d.y().size(); ++i) {
    REQUIRE(std::abs(d.l[i] - d.y()[i]) <= 1e-14);
    REQUIRE(std::abs(d.rho[i] - 1.0) <= 1e-15);
  }
}

TEST_CASE("exponential-weight problem") {
  const auto& d = test::kamke().data;
  CHECK(std::abs(d.b - test::kamke_b()) <= 1e-13);
  CHECK(std::abs(d.b - 2.9578857150891955) <= 1e-13);
  CHECK(std::abs(d.rho[0] - 1.0) <= 1e-15);
  CHECK(std::abs(d.rho_prime[0] - (-1.0)) <= 1e-12);
  double err = 0.0;
  for (std::size_t i = 0; i < d.y().size(); ++i) err = std::max(err, std::abs(d.rho[i] - test::kamke_rho(d.y()[i])));
  CHECK(err <= 1e-14);
  for (std::size_t i = 1; i < d.y().size(); ++i) REQUIRE(d.l[i].real() > d.l[i - 1].real());
  CHECK(d.l[0] == cplx(0.0));
}

TEST_CASE("constant ratio r = 4p") {
  SLProblem pb;
  pb.p = {[](double y) { return 1.0 + y * y; }, [](double y) { return 2.0 * y; }, {}};
  pb.r = {[](double y) { return 4.0 * (1.0 + y * y); }, [](double y) { return 8.0 * y; }, {}};
  pb.q = constant_fn(0.0);
  pb.A = 1.0;
  pb.B = 3.0;
  const auto d = build_liouville(pb, make_grid(pb.A, pb.B, 401));
  for (std::size_t i = 0; i < d.y().size(); ++i) REQUIRE(std::abs(d.l[i] - 2.0 * (d.y()[i] - 1.0)) <= 1e-13);
  CHECK(d.b == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("derivatives estimated when not supplied") {
  auto pb = kamke_problem();
  pb.p.d1 = pb.p.d2 = pb.r.d1 = pb.r.d2 = nullptr;
  const auto d = build_liouville(pb, make_grid(pb.A, pb.B, 2001));
  CHECK_FALSE(d.analytic_derivatives);
  CHECK(std::abs(d.rho_prime[0] - (-1.0)) <= 1e-8);
  CHECK(std::abs(d.b - test::kamke_b()) <= 1e-12);
}

TEST_CASE("positivity failure names the node") {
  SLProblem pb = constant_problem(1.0, 0.0, 1.0, 0.0, 1.0);
  pb.r = {[](double y) { return y - 0.5; }, {}, {}};
  try {
    build_liouville(pb, make_grid(0.0, 1.0, 11));
    FAIL("no exception");
  } catch (const PositivityError& e) {
    CHECK(e.node() == 0);
    CHECK(e.y() == 0.0);
  }
}

TEST_CASE("transformed potential of constant coefficients") {
  const auto g = make_grid(0.0, 1.0, 201);
  {
    SLProblem pb = constant_problem(1.0, 0.0, 1.0, 0.0, 1.0);
    pb.q = {[](double y) { return std::cos(y); }, {}, {}};
    const auto d = build_liouville(pb, g);
    const auto Q = transformed_potential(pb, d);
    for (std::size_t i = 0; i < g->size(); ++i) REQUIRE(std::abs(Q[i] - std::cos((*g)[i])) <= 1e-15);
  }
  {
    const SLProblem pb = constant_problem(2.5, 3.0, 2.5, 0.0, 1.0);
    const auto Q = transformed_potential(pb, build_liouville(pb, g));
    for (std::size_t i = 0; i < g->size(); ++i) REQUIRE(std::abs(Q[i] - 1.2) <= 1e-15);
  }
}

TEST_CASE("both forms of the transformed potential agree") {
  const auto& k = test::kamke();
  const auto Q = transformed_potential(k.problem, k.data);
  const auto Qa = transformed_potential_alt(k.data);
  CHECK(std::abs(Q[0] - Qa[0]) <= 1e-6);
  CHECK(test::max_abs_diff(Q, Qa) <= 1e-6);
  // Q = q/r + rho_xx / rho with dx = sqrt(r/p) dy; at y = 0 this is
  // -1 + (e^{-y}(1 + y^2/4))'' = -1 + 3/2.
  CHECK(std::abs(Q[0] - 0.5) <= 1e-10);
}

TEST_CASE("inverse transform") {
  const auto& d = test::kamke().data;
  const auto xg = make_grid(0.0, d.b, 4001);

  const auto x = SampledFn::sample(xg, [](double s) { return s; });
  const auto v = apply_L_inverse(x, d);
  for (std::size_t i = 0; i < d.y().size(); ++i) REQUIRE(std::abs(v[i] - d.l[i] / d.rho[i]) <= 1e-13);

  const auto u = SampledFn::sample(xg, [](double s) { return std::cos(3.0 * s) + s * s; });
  const auto back = apply_L(apply_L_inverse(u, d), d);
  double err = 0.0;
  for (std::size_t i = 0; i < d.y().size(); ++i) {
    const double s = d.l[i].real();
    err = std::max(err, std::abs(back[i] - (std::cos(3.0 * s) + s * s)));
  }
  CHECK(err <= 1e-10);

  // max|v| <= max|u| max(1/rho)
  CHECK(apply_L_inverse(u, d).max_abs() <= u.max_abs() * reciprocal(d.rho).max_abs() * (1 + 1e-14));
}

TEST_CASE("inverse transform of a constant with rho = 1") {
  const auto& d = test::degenerate().data;
  const auto xg = make_grid(0.0, d.b, 1001);
  const auto v = apply_L_inverse(SampledFn::constant(xg, 1.0), d);
  for (std::size_t i = 0; i < d.y().size(); ++i) REQUIRE(std::abs(v[i] - 1.0) <= 1e-14);
}

}
