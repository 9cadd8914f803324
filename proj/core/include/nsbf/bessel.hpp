#pragma once

#include <span>
#include <vector>

#include "nsbf/grid.hpp"

namespace nsbf {

inline constexpr int kBesselOrderCap = 512;

enum class BesselMethod {
  automatic,  // upward for |z| >= N, downward (Miller) otherwise
  upward,
  downward,
};

/// j_0(z) .. j_N(z) for complex z. Values that underflow are flushed to 0.
/// Throws RangeError for N > kBesselOrderCap and DomainError for N < 0.
std::vector<cplx> j_batch(cplx z, int N, BesselMethod method = BesselMethod::automatic);

/// Same as j_batch, writing into out[0..N]; out.size() must be >= N + 1.
void j_batch_into(cplx z, int N, std::span<cplx> out,
                  BesselMethod method = BesselMethod::automatic);

/// sqrt(pi) |z/2|^n e^{|Im z|} / Gamma(n + 3/2), an upper bound for |j_n(z)|.
double j_magnitude_bound(cplx z, int n);

}  // namespace nsbf
