#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nsbf {

using cplx = std::complex<double>;

/// Uniform grid on [a, b] with an odd number of points (m >= 5).
class Grid {
 public:
  static constexpr std::size_t kDefaultSize = 2001;

  Grid(double a, double b, std::size_t m = kDefaultSize);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t size() const noexcept { return points_.size(); }
  double step() const noexcept { return h_; }
  double operator[](std::size_t i) const noexcept { return points_[i]; }
  std::span<const double> points() const noexcept { return points_; }

  friend bool operator==(const Grid& x, const Grid& y) noexcept {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.size() == y.size();
  }

 private:
  double a_;
  double b_;
  double h_;
  std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(double a, double b, std::size_t m = Grid::kDefaultSize) {
  return std::make_shared<const Grid>(a, b, m);
}

/// Complex samples of a function on a Grid. Real-valued data is flagged so
/// callers can skip imaginary parts; arithmetic keeps the flag when both
/// operands are real.
class SampledFn {
 public:
  SampledFn() = default;
  SampledFn(GridPtr grid, std::vector<cplx> values, bool real = false);
  SampledFn(GridPtr grid, const std::vector<double>& values);

  static SampledFn constant(GridPtr grid, cplx c);
  static SampledFn sample(GridPtr grid, const std::function<double(double)>& f);
  static SampledFn sample_complex(GridPtr grid, const std::function<cplx(double)>& f);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool is_real() const noexcept { return real_; }
  bool empty() const noexcept { return values_.empty(); }

  cplx operator[](std::size_t i) const noexcept { return values_[i]; }
  cplx front() const noexcept { return values_.front(); }
  cplx back() const noexcept { return values_.back(); }
  std::span<const cplx> values() const noexcept { return values_; }
  std::vector<double> real_values() const;

  /// Pointwise map; the result is flagged complex.
  SampledFn map(const std::function<cplx(cplx)>& f) const;
  /// Pointwise map that also receives the node abscissa.
  SampledFn map_indexed(const std::function<cplx(std::size_t, cplx)>& f) const;

  double max_abs() const noexcept;
  double min_abs() const noexcept;
  bool all_finite() const noexcept;

  SampledFn& operator+=(const SampledFn& o);
  SampledFn& operator-=(const SampledFn& o);
  SampledFn& operator*=(const SampledFn& o);
  SampledFn& operator/=(const SampledFn& o);
  SampledFn& operator*=(cplx s);
  SampledFn& operator+=(cplx s);

  friend SampledFn operator+(SampledFn x, const SampledFn& y) { return x += y; }
  friend SampledFn operator-(SampledFn x, const SampledFn& y) { return x -= y; }
  friend SampledFn operator*(SampledFn x, const SampledFn& y) { return x *= y; }
  friend SampledFn operator/(SampledFn x, const SampledFn& y) { return x /= y; }
  friend SampledFn operator*(SampledFn x, cplx s) { return x *= s; }
  friend SampledFn operator*(cplx s, SampledFn x) { return x *= s; }
  friend SampledFn operator*(SampledFn x, double s) { return x *= cplx(s); }
  friend SampledFn operator*(double s, SampledFn x) { return x *= cplx(s); }
  friend SampledFn operator+(SampledFn x, cplx s) { return x += s; }
  friend SampledFn operator-(SampledFn x, cplx s) { return x += -s; }
  friend SampledFn operator-(SampledFn x) { return x *= cplx(-1.0); }

 private:
  void require_same_grid(const SampledFn& o) const;

  GridPtr grid_;
  std::vector<cplx> values_;
  bool real_ = false;
};

SampledFn reciprocal(const SampledFn& f);
SampledFn sqrt(const SampledFn& f);

/// F(y) = \int_a^y f(s) ds by cumulative composite Newton-Cotes on sliding
/// 8-point stencils. Exact for polynomials of degree <= 7; global order 8.
/// Throws InvalidGridError when the grid has fewer points than the stencil.
SampledFn cumulative_integral(const SampledFn& f);

/// Extended-precision variant over raw samples with step h; out may not alias f.
void cumulative_integral(std::span<const std::complex<long double>> f, long double h,
                         std::span<std::complex<long double>> out);

/// Integral over the whole grid, i.e. cumulative_integral(f).back().
cplx definite_integral(const SampledFn& f);

/// First derivative by 7-point finite differences (order 6), centred in the
/// interior and shifted one-sided near the ends.
SampledFn differentiate(const SampledFn& f);

/// Local 8-point Lagrange interpolation. Returns the stored value at nodes.
/// Throws DomainError when y lies outside [a, b].
cplx interpolate(const SampledFn& f, double y);

inline constexpr std::size_t kQuadratureStencil = 8;
inline constexpr std::size_t kDifferenceStencil = 7;

}  // namespace nsbf
