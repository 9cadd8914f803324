#include <benchmark/benchmark.h>

#include "nsbf/bessel.hpp"
#include "nsbf/coefficients.hpp"
#include "nsbf/oracles.hpp"
#include "nsbf/solver.hpp"

using namespace nsbf;

namespace {

struct Kamke {
  SLProblem problem = kamke_problem();
  GridPtr grid = make_grid(problem.A, problem.B, 2001);
  LiouvilleData data = build_liouville(problem, grid);
  SeedSolution seed = compute_seed(problem, data);
  CoefficientSet coeffs = compute_coefficients(seed, data, {});
};

const Kamke& kamke() {
  static const Kamke k;
  return k;
}

void BM_BesselBatch(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0));
  std::vector<cplx> out(39);
  for (auto _ : state) {
    j_batch_into(z, 38, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_BesselBatch)->Arg(1)->Arg(30)->Arg(300);

void BM_Liouville(benchmark::State& state) {
  const auto& k = kamke();
  for (auto _ : state) benchmark::DoNotOptimize(build_liouville(k.problem, k.grid));
}
BENCHMARK(BM_Liouville)->Unit(benchmark::kMillisecond);

void BM_Seed(benchmark::State& state) {
  const auto& k = kamke();
  for (auto _ : state) benchmark::DoNotOptimize(compute_seed(k.problem, k.data));
}
BENCHMARK(BM_Seed)->Unit(benchmark::kMillisecond);

void BM_Coefficients(benchmark::State& state) {
  const auto& k = kamke();
  CoefficientOptions o;
  o.N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_coefficients(k.seed, k.data, o));
}
BENCHMARK(BM_Coefficients)->Arg(38)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_SolveIvp(benchmark::State& state) {
  const auto& k = kamke();
  const SolutionEvaluator ev(k.data, k.seed, k.coeffs, 38);
  const double omega = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ev.solve_ivp(omega, 1.0, 1.0));
}
BENCHMARK(BM_SolveIvp)->Arg(10)->Arg(105)->Unit(benchmark::kMillisecond);

void BM_Characteristic(benchmark::State& state) {
  const auto& k = kamke();
  const SolutionEvaluator ev(k.data, k.seed, k.coeffs, 38);
  const auto bc = kamke_boundary();
  double omega = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.characteristic(omega, bc));
    omega += 1e-3;
  }
}
BENCHMARK(BM_Characteristic);

void BM_Eigenvalues(benchmark::State& state) {
  const auto& k = kamke();
  const SolutionEvaluator ev(k.data, k.seed, k.coeffs, 38);
  EigenOptions o;
  o.count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ev.find_eigenvalues(kamke_boundary(), o));
}
BENCHMARK(BM_Eigenvalues)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ReferenceEndpoint(benchmark::State& state) {
  const auto& k = kamke();
  for (auto _ : state) benchmark::DoNotOptimize(integrate_reference_endpoint(k.problem, 52.0 * 52.0, 1.0, 1.0));
}
BENCHMARK(BM_ReferenceEndpoint)->Unit(benchmark::kMillisecond);

}  // namespace
