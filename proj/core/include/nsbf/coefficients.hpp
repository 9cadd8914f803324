#pragma once

#include <vector>

#include "nsbf/grid.hpp"
#include "nsbf/liouville.hpp"
#include "nsbf/seed.hpp"

namespace nsbf {

/// Coefficients l_{k,n} of x^k in the Legendre polynomial P_n, n <= n_max.
/// All entries are dyadic rationals and therefore exact in double.
class LegendreTable {
 public:
  explicit LegendreTable(int n_max);
  int n_max() const noexcept { return static_cast<int>(rows_.size()) - 1; }
  double operator()(int k, int n) const { return rows_.at(n).at(k); }
  const std::vector<double>& row(int n) const { return rows_.at(n); }

 private:
  std::vector<std::vector<double>> rows_;
};

/// c_n of the recurrent integration procedure: 1 for n = 1, 2(2n - 1) otherwise.
constexpr double recurrence_constant(int n) { return n == 1 ? 1.0 : 2.0 * (2 * n - 1); }

struct GFunctions {
  SampledFn G1;  // h + (1/2) \int_0^{l(y)} Q
  SampledFn G2;  // G1 - h
};

/// G1 through the integrated-by-parts form
///   h + [rho rho' / (2r)]_A^y + 1/2 \int_A^y (q / rho^2 + rho'^2 / r),
/// which avoids second derivatives of p and r.
GFunctions compute_G(const SeedSolution& seed, const LiouvilleData& data);

struct SeedCoefficients {
  SampledFn alpha_m1;  // 1 / (2 rho)
  SampledFn alpha_0;   // (g - 1/rho) / 2
  SampledFn mu_m1;     // G2 / (2 rho)
  SampledFn mu_0;      // sqrt(p/r) (g rho)' / (2 rho) - G1 / (2 rho)
};

SeedCoefficients seed_coefficients(const SeedSolution& seed, const LiouvilleData& data,
                                   const GFunctions& G);

/// mu_1 from alpha_1 and its numerical derivative; an independent check on
/// the recurrent Upsilon_1.
SampledFn mu1_from_alpha1(const SampledFn& alpha_1, const LiouvilleData& data,
                          const GFunctions& G);

/// One level of the recurrent integration. Sigma_n = l^n alpha_n and
/// Upsilon_n = l^n mu_n.
struct RecurrenceLevel {
  SampledFn eta;    // eta~_n
  SampledFn theta;  // theta~_n
  SampledFn Sigma;
  SampledFn Upsilon;
};

/// Level n = 1, seeded by alpha_{-1} = 1/(2 rho) and mu_{-1} = G2/(2 rho).
/// The singular Sigma_{-1} = alpha_{-1}/l only enters through the regular
/// products l Sigma_{-1} and l^2 Sigma_{-1}, and eta~_1 = (g rho - 1)/2 in
/// closed form.
RecurrenceLevel recurrence_base(const SeedSolution& seed, const LiouvilleData& data,
                                const GFunctions& G);

/// Level n >= 2 from Sigma_{n-2}, Upsilon_{n-2}. Throws NumericalError on
/// non-finite output.
RecurrenceLevel recurrence_step(int n, const SampledFn& sigma_prev, const SampledFn& upsilon_prev,
                                const SeedSolution& seed, const LiouvilleData& data);

/// alpha_n = Sigma_n / l^n and mu_n = Upsilon_n / l^n, with the value at
/// y = A (where l = 0) set to its limit 0 for n >= 1.
std::pair<SampledFn, SampledFn> extract_alpha_mu(int n, const SampledFn& Sigma,
                                                 const SampledFn& Upsilon,
                                                 const LiouvilleData& data);

/// Index of the cleanup cut for a coefficient: the first strict local
/// minimum of |c| in (A, A + window (B - A)) whose value is below
/// 1e-2 max|c| on the rest of the interval. Returns 0 when no such minimum
/// exists (only the node y = A is cut).
std::size_t local_minimum_cut(const SampledFn& c, double window = 0.25);

/// Fallback cut from an identity residual before and after adding a term:
/// the last node in (A, A + window (B - A)) where the term makes the
/// residual larger. Returns 0 when it never does.
std::size_t plateau_cut(const std::vector<cplx>& before, const std::vector<cplx>& after,
                        const Grid& grid, double window = 0.25);

/// Zeroes c on nodes 0..cut inclusive.
SampledFn apply_cut(const SampledFn& c, std::size_t cut);

struct CoefficientOptions {
  int N = 50;
  bool cleanup = true;
  double cut_window = 0.25;  // fraction of [A, B] searched for the cut point
};

/// The omega-independent payload of the truncated series.
struct CoefficientSet {
  int N = 0;
  std::vector<SampledFn> alpha;  // alpha_0 .. alpha_N
  std::vector<SampledFn> mu;     // mu_0 .. mu_N
  SampledFn alpha_m1;
  SampledFn mu_m1;
  SampledFn G1;
  SampledFn G2;
  cplx h;
  std::vector<double> cut_alpha;  // y_n
  std::vector<double> cut_mu;     // y~_n
  std::vector<std::size_t> cut_alpha_index;
  std::vector<std::size_t> cut_mu_index;
};

/// Runs the seed coefficients and the recurrence for n = 1..N, with the
/// near-A cleanup applied to each level before it feeds level n + 2. Levels
/// without a usable local minimum fall back to plateau_cut on the
/// alternating identities. Either cut is kept only when |c| on [A, cut]
/// peaks within its first three nodes, the signature of amplified rounding;
/// otherwise nothing is cut.
CoefficientSet compute_coefficients(const SeedSolution& seed, const LiouvilleData& data,
                                    const CoefficientOptions& options = {});

struct ResidualRow {
  int M = 0;
  double alpha_sum = 0.0;  // sum alpha_n / l   vs (G1 + G2) / (2 rho)
  double alpha_alt = 0.0;  // sum (-1)^n alpha_n / l   vs h / (2 rho)
  double mu_sum = 0.0;     // sum mu_n / l   vs Q/(4 rho) + (h G2 + G2^2) / (2 rho)
  double mu_alt = 0.0;     // sum (-1)^n mu_n / l   vs Q(0)/(4 rho) + h G2 / (2 rho)
  double max() const;
};

struct ResidualReport {
  std::vector<ResidualRow> rows;  // M = 0..N
  int N_opt = 0;
  double trim_from = 0.0;  // residuals are sup norms over y >= trim_from
};

/// Sup-norm residuals of the four series identities for every partial-sum
/// length M, over y >= A + trim (B - A). N_opt minimises the largest of the
/// four; ties go to the smaller M.
ResidualReport verify_coefficients(const CoefficientSet& coeffs, const LiouvilleData& data,
                                   const SampledFn& Q, double trim = 0.1);

inline constexpr int kDirectFormulaCap = 12;

/// alpha_n from the Legendre-coefficient formula over Phi_0..Phi_n. A
/// cross-check only; refused for n > kDirectFormulaCap.
SampledFn direct_alpha(int n, const FormalPowers& powers, const LiouvilleData& data);

/// mu_n from the Legendre-coefficient formula over Phi_k and Psi_{k-1}.
SampledFn direct_mu(int n, const FormalPowers& powers, const SeedSolution& seed,
                    const LiouvilleData& data, const SampledFn& G2);

}  // namespace nsbf
