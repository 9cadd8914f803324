#include "nsbf/coefficients.hpp"
#include "nsbf/error.hpp"

namespace nsbf {

LegendreTable::LegendreTable(int n_max) {
  if (n_max < 0) throw DomainError("Legendre table needs n_max >= 0");
  rows_.resize(n_max + 1);
  rows_[0] = {1.0};
  if (n_max >= 1) rows_[1] = {0.0, 1.0};
  // (n + 1) P_{n+1} = (2n + 1) x P_n - n P_{n-1}
  for (int n = 1; n < n_max; ++n) {
    std::vector<double> next(n + 2, 0.0);
    for (int k = 0; k <= n; ++k) next[k + 1] += (2.0 * n + 1.0) * rows_[n][k];
    for (int k = 0; k <= n - 1; ++k) next[k] -= n * rows_[n - 1][k];
    for (auto& c : next) c /= (n + 1.0);
    rows_[n + 1] = std::move(next);
  }
}

}  // namespace nsbf
