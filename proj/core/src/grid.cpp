#include "nsbf/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

namespace {

// Coefficients (ascending powers) of the Lagrange basis polynomial for node k
// of the integer stencil 0..S-1.
template <std::size_t S>
std::array<long double, S> lagrange_basis(std::size_t k) {
  std::array<long double, S> c{};
  c[0] = 1.0L;
  std::size_t deg = 0;
  long double denom = 1.0L;
  for (std::size_t j = 0; j < S; ++j) {
    if (j == k) continue;
    // multiply by (t - j)
    for (std::size_t d = deg + 2; d-- > 0;) {
      const long double up = (d > 0) ? c[d - 1] : 0.0L;
      c[d] = up - static_cast<long double>(j) * c[d];
    }
    ++deg;
    denom *= static_cast<long double>(k) - static_cast<long double>(j);
  }
  for (auto& x : c) x /= denom;
  return c;
}

template <std::size_t S>
struct QuadratureTable {
  // w[j][k]: weight of stencil node k for the integral over [j, j+1].
  std::array<std::array<long double, S>, S - 1> w{};
  QuadratureTable() {
    for (std::size_t k = 0; k < S; ++k) {
      const auto c = lagrange_basis<S>(k);
      for (std::size_t j = 0; j + 1 < S; ++j) {
        long double acc = 0.0L;
        for (std::size_t d = 0; d < S; ++d) {
          const long double p = static_cast<long double>(d + 1);
          acc += c[d] * (std::pow(static_cast<long double>(j + 1), p) -
                         std::pow(static_cast<long double>(j), p)) / p;
        }
        w[j][k] = acc;
      }
    }
  }
};

template <std::size_t S>
struct DifferenceTable {
  // d[j][k]: weight of stencil node k for the derivative at node j.
  std::array<std::array<double, S>, S> d{};
  DifferenceTable() {
    for (std::size_t k = 0; k < S; ++k) {
      const auto c = lagrange_basis<S>(k);
      for (std::size_t j = 0; j < S; ++j) {
        long double acc = 0.0L;
        long double tp = 1.0L;
        for (std::size_t p = 1; p < S; ++p) {
          acc += static_cast<long double>(p) * c[p] * tp;
          tp *= static_cast<long double>(j);
        }
        d[j][k] = static_cast<double>(acc);
      }
    }
  }
};

const QuadratureTable<kQuadratureStencil>& quadrature_table() {
  static const QuadratureTable<kQuadratureStencil> table;
  return table;
}

const DifferenceTable<kDifferenceStencil>& difference_table() {
  static const DifferenceTable<kDifferenceStencil> table;
  return table;
}

std::size_t stencil_start(std::size_t i, std::size_t half, std::size_t width, std::size_t m) {
  const std::size_t s = i > half ? i - half : 0;
  return std::min(s, m - width);
}

}  // namespace

Grid::Grid(double a, double b, std::size_t m) : a_(a), b_(b) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
    std::ostringstream os;
    os << "invalid grid: need finite a < b, got [" << a << ", " << b << "]";
    throw InvalidGridError(os.str());
  }
  if (m < 5 || m % 2 == 0) {
    std::ostringstream os;
    os << "invalid grid: point count must be odd and >= 5, got " << m;
    throw InvalidGridError(os.str());
  }
  h_ = (b - a) / static_cast<double>(m - 1);
  points_.resize(m);
  // nodes rounded once from extended precision
  const long double hl = (static_cast<long double>(b) - a) / static_cast<long double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) points_[i] = static_cast<double>(a + static_cast<long double>(i) * hl);
  points_.back() = b;
}

SampledFn::SampledFn(GridPtr grid, std::vector<cplx> values, bool real)
    : grid_(std::move(grid)), values_(std::move(values)), real_(real) {
  if (!grid_ || values_.size() != grid_->size())
    throw InvalidGridError("sampled function length does not match its grid");
}

SampledFn::SampledFn(GridPtr grid, const std::vector<double>& values)
    : SampledFn(std::move(grid), std::vector<cplx>(values.begin(), values.end()), true) {}

SampledFn SampledFn::constant(GridPtr grid, cplx c) {
  const auto m = grid->size();
  return SampledFn(std::move(grid), std::vector<cplx>(m, c), c.imag() == 0.0);
}

SampledFn SampledFn::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f((*grid)[i]);
  return SampledFn(std::move(grid), v);
}

SampledFn SampledFn::sample_complex(GridPtr grid, const std::function<cplx(double)>& f) {
  std::vector<cplx> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f((*grid)[i]);
  return SampledFn(std::move(grid), std::move(v), false);
}

std::vector<double> SampledFn::real_values() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

SampledFn SampledFn::map(const std::function<cplx(cplx)>& f) const {
  std::vector<cplx> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), f);
  return SampledFn(grid_, std::move(out), false);
}

SampledFn SampledFn::map_indexed(const std::function<cplx(std::size_t, cplx)>& f) const {
  std::vector<cplx> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(i, values_[i]);
  return SampledFn(grid_, std::move(out), false);
}

double SampledFn::max_abs() const noexcept {
  double m = 0.0;
  for (auto z : values_) m = std::max(m, std::abs(z));
  return m;
}

double SampledFn::min_abs() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (auto z : values_) m = std::min(m, std::abs(z));
  return m;
}

bool SampledFn::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

void SampledFn::require_same_grid(const SampledFn& o) const {
  if (!grid_ || !o.grid_ || !(grid_ == o.grid_ || *grid_ == *o.grid_))
    throw InvalidGridError("arithmetic between functions on different grids");
}

SampledFn& SampledFn::operator+=(const SampledFn& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  real_ = real_ && o.real_;
  return *this;
}

SampledFn& SampledFn::operator-=(const SampledFn& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  real_ = real_ && o.real_;
  return *this;
}

SampledFn& SampledFn::operator*=(const SampledFn& o) {
  require_same_grid(o);
  if (real_ && o.real_) {
    for (std::size_t i = 0; i < values_.size(); ++i)
      values_[i] = values_[i].real() * o.values_[i].real();
  } else {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  }
  real_ = real_ && o.real_;
  return *this;
}

SampledFn& SampledFn::operator/=(const SampledFn& o) {
  require_same_grid(o);
  if (real_ && o.real_) {
    for (std::size_t i = 0; i < values_.size(); ++i)
      values_[i] = values_[i].real() / o.values_[i].real();
  } else {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] /= o.values_[i];
  }
  real_ = real_ && o.real_;
  return *this;
}

SampledFn& SampledFn::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  real_ = real_ && s.imag() == 0.0;
  return *this;
}

SampledFn& SampledFn::operator+=(cplx s) {
  for (auto& v : values_) v += s;
  real_ = real_ && s.imag() == 0.0;
  return *this;
}

SampledFn reciprocal(const SampledFn& f) {
  auto out = f.map([](cplx z) { return 1.0 / z; });
  return f.is_real() ? SampledFn(f.grid_ptr(), out.real_values()) : out;
}

SampledFn sqrt(const SampledFn& f) {
  return f.map([](cplx z) { return std::sqrt(z); });
}

namespace {

template <class T>
void cumulative_integral_impl(std::span<const std::complex<T>> v, T h,
                              std::span<std::complex<T>> out) {
  constexpr std::size_t S = kQuadratureStencil;
  const std::size_t m = v.size();
  if (m < S) {
    std::ostringstream os;
    os << "invalid grid: cumulative quadrature needs at least " << S << " points, got " << m;
    throw InvalidGridError(os.str());
  }
  if (out.size() != m) throw InvalidGridError("cumulative quadrature output has the wrong length");
  const auto& w = quadrature_table().w;
  out[0] = 0;
  // Kahan-compensated running sum keeps the accumulated rounding at O(eps).
  std::complex<T> sum = 0, comp = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t s = stencil_start(i, S / 2 - 1, S, m);
    const auto& wi = w[i - s];
    std::complex<T> piece = 0;
    for (std::size_t k = 0; k < S; ++k) piece += static_cast<T>(wi[k]) * v[s + k];
    const std::complex<T> y = piece * h - comp;
    const std::complex<T> t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    out[i + 1] = sum;
  }
}

}  // namespace

SampledFn cumulative_integral(const SampledFn& f) {
  std::vector<cplx> out(f.size());
  cumulative_integral_impl<double>(f.values(), f.grid().step(), out);
  return SampledFn(f.grid_ptr(), std::move(out), f.is_real());
}

void cumulative_integral(std::span<const std::complex<long double>> f, long double h,
                         std::span<std::complex<long double>> out) {
  cumulative_integral_impl<long double>(f, h, out);
}

cplx definite_integral(const SampledFn& f) { return cumulative_integral(f).back(); }

SampledFn differentiate(const SampledFn& f) {
  constexpr std::size_t S = kDifferenceStencil;
  const std::size_t m = f.size();
  if (m < S) {
    std::ostringstream os;
    os << "invalid grid: differentiation needs at least " << S << " points, got " << m;
    throw InvalidGridError(os.str());
  }
  const auto& d = difference_table().d;
  const double inv_h = 1.0 / f.grid().step();
  const auto v = f.values();
  std::vector<cplx> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t s = stencil_start(i, S / 2, S, m);
    const auto& di = d[i - s];
    // Weights sum to zero; differencing against v[i] makes constants exact.
    cplx acc = 0.0;
    for (std::size_t k = 0; k < S; ++k) acc += di[k] * (v[s + k] - v[i]);
    out[i] = acc * inv_h;
  }
  return SampledFn(f.grid_ptr(), std::move(out), f.is_real());
}

cplx interpolate(const SampledFn& f, double y) {
  const Grid& g = f.grid();
  if (!(y >= g.a() && y <= g.b())) {
    std::ostringstream os;
    os << "interpolation point " << y << " outside [" << g.a() << ", " << g.b() << "]";
    throw DomainError(os.str());
  }
  const std::size_t m = g.size();
  const double t = (y - g.a()) / g.step();
  auto i = static_cast<std::size_t>(std::floor(t));
  if (i >= m) i = m - 1;
  if (g[i] == y) return f[i];
  if (i + 1 < m && g[i + 1] == y) return f[i + 1];

  constexpr std::size_t S = kQuadratureStencil;
  const std::size_t width = std::min(S, m);
  const std::size_t s = stencil_start(i, width / 2 - 1, width, m);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < width; ++k) {
    double basis = 1.0;
    const double tk = static_cast<double>(s + k);
    for (std::size_t j = 0; j < width; ++j) {
      if (j == k) continue;
      const double tj = static_cast<double>(s + j);
      basis *= (t - tj) / (tk - tj);
    }
    acc += basis * f[s + k];
  }
  return acc;
}

}  // namespace nsbf
