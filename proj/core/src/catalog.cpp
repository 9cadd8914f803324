#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nsbf/oracles.hpp"

namespace nsbf {

SLProblem degenerate_problem(double A, double B) {
  SLProblem pr;
  auto one = [](double) { return 1.0; };
  auto zero = [](double) { return 0.0; };
  pr.p = {one, zero, zero};
  pr.q = {zero, zero, zero};
  pr.r = {one, zero, zero};
  pr.A = A;
  pr.B = B;
  pr.name = "degenerate";
  return pr;
}

SLProblem kamke_problem() {
  SLProblem pr;
  pr.p = {[](double y) { return std::exp(-2 * y); }, [](double y) { return -2 * std::exp(-2 * y); },
          [](double y) { return 4 * std::exp(-2 * y); }};
  pr.q = {[](double y) { return -std::exp(-2 * y); }, [](double y) { return 2 * std::exp(-2 * y); },
          [](double y) { return -4 * std::exp(-2 * y); }};
  // r = (1 + y^2) e^{-2y}
  pr.r = {[](double y) { return (1 + y * y) * std::exp(-2 * y); },
          [](double y) { return (2 * y - 2 * (1 + y * y)) * std::exp(-2 * y); },
          [](double y) { return (2 - 8 * y + 4 * (1 + y * y)) * std::exp(-2 * y); }};
  pr.A = 0.0;
  pr.B = 2.0;
  pr.name = "kamke";
  return pr;
}

BoundarySpec kamke_boundary() { return BoundarySpec{1.0, -1.0, 1.0, 1.0}; }

namespace {

struct TrigSum {
  double c0 = 0.0;
  std::vector<double> amp, freq, phase;

  double value(double y) const {
    double s = c0;
    for (std::size_t k = 0; k < amp.size(); ++k) s += amp[k] * std::sin(freq[k] * y + phase[k]);
    return s;
  }
  double d1(double y) const {
    double s = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k)
      s += amp[k] * freq[k] * std::cos(freq[k] * y + phase[k]);
    return s;
  }
  double d2(double y) const {
    double s = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k)
      s -= amp[k] * freq[k] * freq[k] * std::sin(freq[k] * y + phase[k]);
    return s;
  }
};

TrigSum random_sum(std::mt19937_64& rng, int modes, double scale, double length) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), ph(0.0, 2 * std::numbers::pi);
  TrigSum t;
  t.c0 = scale * u(rng);
  for (int k = 1; k <= modes; ++k) {
    t.amp.push_back(scale * u(rng) / k);
    t.freq.push_back(k * std::numbers::pi / length);
    t.phase.push_back(ph(rng));
  }
  return t;
}

CoefficientFn exp_of(TrigSum t) {
  return {[t](double y) { return std::exp(t.value(y)); },
          [t](double y) { return t.d1(y) * std::exp(t.value(y)); },
          [t](double y) {
            const double d = t.d1(y);
            return (t.d2(y) + d * d) * std::exp(t.value(y));
          }};
}

}  // namespace

SLProblem random_smooth_problem(std::uint64_t seed, double A, double B, int modes) {
  std::mt19937_64 rng(seed);
  const double L = B - A;
  TrigSum lp = random_sum(rng, modes, 0.5, L);
  TrigSum lr = random_sum(rng, modes, 0.5, L);
  TrigSum q = random_sum(rng, modes, 2.0, L);
  for (auto* t : {&lp, &lr, &q})
    for (auto& ph : t->phase) ph -= t->freq[&ph - t->phase.data()] * A;
  SLProblem pr;
  pr.p = exp_of(lp);
  pr.r = exp_of(lr);
  pr.q = {[q](double y) { return q.value(y); }, [q](double y) { return q.d1(y); },
          [q](double y) { return q.d2(y); }};
  pr.A = A;
  pr.B = B;
  pr.name = "random-" + std::to_string(seed);
  return pr;
}

}  // namespace nsbf
