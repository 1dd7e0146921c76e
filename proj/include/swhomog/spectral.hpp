#pragma once

// Fourier collocation on uniform periodic grids: differentiation, the
// (1 - c d^2/dx^2)^{-1} Helmholtz inverse and 2/3-rule dealiasing.

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "swhomog/array2d.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/fft.hpp"

namespace swhomog {

using Field1D = std::vector<double>;
using Spectrum = std::vector<std::complex<double>>;

/// Index j of the r2c half-spectrum is kept by the 2/3 rule iff |j| <= n/3.
inline bool dealias_keeps(std::size_t j_abs, std::size_t n) noexcept { return 3 * j_abs <= n; }

/// Uniform periodic grid x_i = x0 + i * length / n, i = 0..n-1.
class PeriodicGrid1D {
 public:
  PeriodicGrid1D(std::size_t n, double length, double x0) : n_(n), length_(length), x0_(x0) {
    require(n >= 8 && n % 2 == 0, ErrorKind::invalid_argument,
            "PeriodicGrid1D: n must be even and >= 8 (got " + std::to_string(n) + ")");
    require(length > 0.0 && std::isfinite(length) && std::isfinite(x0), ErrorKind::invalid_argument,
            "PeriodicGrid1D: length must be positive and finite");
    k_.resize(n / 2 + 1);
    for (std::size_t j = 0; j < k_.size(); ++j) k_[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / length;
    fft_ = std::make_shared<const RealFft>(n);
  }

  /// Grid on [-half_length, half_length).
  static PeriodicGrid1D symmetric(std::size_t n, double half_length) {
    return PeriodicGrid1D(n, 2.0 * half_length, -half_length);
  }

  std::size_t n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double x0() const noexcept { return x0_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_); }
  double x(std::size_t i) const noexcept { return x0_ + static_cast<double>(i) * dx(); }

  Field1D coordinates() const {
    Field1D xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
  }

  /// Non-negative wavenumbers k_j = 2 pi j / length, j = 0..n/2.
  std::span<const double> wavenumbers() const noexcept { return k_; }

  const RealFft& fft() const noexcept { return *fft_; }

  Spectrum forward(std::span<const double> f) const {
    check_size(f.size());
    return fft_->forward(f);
  }
  Field1D inverse(std::span<const std::complex<double>> spec) const { return fft_->inverse(spec); }

  void check_size(std::size_t size) const {
    require(size == n_, ErrorKind::invalid_argument,
            "field length " + std::to_string(size) + " does not match grid size " + std::to_string(n_));
  }

 private:
  std::size_t n_;
  double length_;
  double x0_;
  std::vector<double> k_;
  std::shared_ptr<const RealFft> fft_;
};

/// In-place spectral operations on an r2c half spectrum of a PeriodicGrid1D.
namespace spectral {

inline void differentiate(const PeriodicGrid1D& grid, std::span<std::complex<double>> spec, int order) {
  require(order == 1 || order == 2, ErrorKind::invalid_argument, "spectral derivative order must be 1 or 2");
  const auto k = grid.wavenumbers();
  const std::size_t nyquist = grid.n() / 2;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (order == 1) {
      spec[j] = (j == nyquist) ? std::complex<double>{} : std::complex<double>(0.0, k[j]) * spec[j];
    } else {
      spec[j] *= -k[j] * k[j];
    }
  }
}

inline void helmholtz_inverse(const PeriodicGrid1D& grid, std::span<std::complex<double>> spec, double coeff) {
  const auto k = grid.wavenumbers();
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] /= 1.0 + coeff * k[j] * k[j];
}

inline void dealias(const PeriodicGrid1D& grid, std::span<std::complex<double>> spec) {
  for (std::size_t j = 0; j < spec.size(); ++j)
    if (!dealias_keeps(j, grid.n())) spec[j] = 0.0;
}

}  // namespace spectral

/// Derivative of the trigonometric interpolant. The Nyquist mode is dropped
/// for first derivatives so that real data stays real and odd symmetry holds.
inline Field1D spectral_derivative(const PeriodicGrid1D& grid, std::span<const double> field, int order = 1) {
  auto spec = grid.forward(field);
  spectral::differentiate(grid, spec, order);
  return grid.inverse(spec);
}

/// Zero-mean antiderivative of field - mean(field).
inline Field1D spectral_antiderivative(const PeriodicGrid1D& grid, std::span<const double> field) {
  auto spec = grid.forward(field);
  const auto k = grid.wavenumbers();
  spec[0] = 0.0;
  spec.back() = 0.0;
  for (std::size_t j = 1; j + 1 < spec.size(); ++j) spec[j] /= std::complex<double>(0.0, k[j]);
  return grid.inverse(spec);
}

/// Applies (1 - coeff d^2/dx^2)^{-1} mode by mode.
inline Field1D helmholtz_inverse(const PeriodicGrid1D& grid, std::span<const double> field, double coeff) {
  require(coeff >= 0.0 && std::isfinite(coeff), ErrorKind::invalid_argument,
          "helmholtz_inverse: coefficient must be non-negative");
  auto spec = grid.forward(field);
  spectral::helmholtz_inverse(grid, spec, coeff);
  return grid.inverse(spec);
}

/// 2/3-rule filter.
inline Field1D dealias(const PeriodicGrid1D& grid, std::span<const double> field) {
  auto spec = grid.forward(field);
  spectral::dealias(grid, spec);
  return grid.inverse(spec);
}

/// Tensor-product periodic grid. Nodes are x0 + i*dx, y0 + j*dy; fields are
/// Array2D(nx, ny).
class PeriodicGrid2D {
 public:
  PeriodicGrid2D(std::size_t nx, double length_x, double x0, std::size_t ny, double length_y, double y0)
      : nx_(nx), ny_(ny), lx_(length_x), ly_(length_y), x0_(x0), y0_(y0) {
    require(nx >= 8 && nx % 2 == 0 && ny >= 4 && ny % 2 == 0, ErrorKind::invalid_argument,
            "PeriodicGrid2D: nx must be even >= 8 and ny even >= 4");
    require(length_x > 0.0 && length_y > 0.0, ErrorKind::invalid_argument, "PeriodicGrid2D: lengths must be positive");
    kx_.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
      const double m = (i <= nx / 2) ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(nx);
      kx_[i] = 2.0 * std::numbers::pi * m / length_x;
    }
    ky_.resize(ny / 2 + 1);
    for (std::size_t j = 0; j < ky_.size(); ++j) ky_[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / length_y;
    fft_ = std::make_shared<const RealFft>(nx, ny);
  }

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double length_x() const noexcept { return lx_; }
  double length_y() const noexcept { return ly_; }
  double x0() const noexcept { return x0_; }
  double y0() const noexcept { return y0_; }
  double dx() const noexcept { return lx_ / static_cast<double>(nx_); }
  double dy() const noexcept { return ly_ / static_cast<double>(ny_); }
  double x(std::size_t i) const noexcept { return x0_ + static_cast<double>(i) * dx(); }
  double y(std::size_t j) const noexcept { return y0_ + static_cast<double>(j) * dy(); }

  std::size_t spectral_ny() const noexcept { return ny_ / 2 + 1; }
  /// Signed x-wavenumber for row i of the spectrum (Nyquist row carries +pi/dx).
  double kx(std::size_t i) const noexcept { return kx_[i]; }
  double ky(std::size_t j) const noexcept { return ky_[j]; }
  bool is_x_nyquist(std::size_t i) const noexcept { return i == nx_ / 2; }
  bool is_y_nyquist(std::size_t j) const noexcept { return j == ny_ / 2; }

  bool keeps(std::size_t i, std::size_t j) const noexcept {
    const std::size_t mx = (i <= nx_ / 2) ? i : nx_ - i;
    return dealias_keeps(mx, nx_) && dealias_keeps(j, ny_);
  }

  Spectrum forward(const Array2D& f) const {
    require(f.nx() == nx_ && f.ny() == ny_, ErrorKind::invalid_argument, "PeriodicGrid2D: field shape mismatch");
    return fft_->forward(f.flat());
  }

  Array2D inverse(std::span<const std::complex<double>> spec) const {
    Array2D out(nx_, ny_);
    fft_->inverse(spec, out.flat());
    return out;
  }

  /// Consumes spec.
  Array2D inverse_consume(Spectrum& spec) const {
    Array2D out(nx_, ny_);
    fft_->inverse_in_place(spec, out.flat());
    return out;
  }

 private:
  std::size_t nx_, ny_;
  double lx_, ly_, x0_, y0_;
  std::vector<double> kx_, ky_;
  std::shared_ptr<const RealFft> fft_;
};

namespace spectral {

/// d/dx (order 1) of a 2D half spectrum, in place.
inline void differentiate_x(const PeriodicGrid2D& g, std::span<std::complex<double>> spec) {
  const std::size_t nyh = g.spectral_ny();
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const std::complex<double> ik(0.0, g.is_x_nyquist(i) ? 0.0 : g.kx(i));
    for (std::size_t j = 0; j < nyh; ++j) spec[i * nyh + j] *= ik;
  }
}

inline void differentiate_y(const PeriodicGrid2D& g, std::span<std::complex<double>> spec) {
  const std::size_t nyh = g.spectral_ny();
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < nyh; ++j)
      spec[i * nyh + j] *= std::complex<double>(0.0, g.is_y_nyquist(j) ? 0.0 : g.ky(j));
}

inline void dealias(const PeriodicGrid2D& g, std::span<std::complex<double>> spec) {
  const std::size_t nyh = g.spectral_ny();
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < nyh; ++j)
      if (!g.keeps(i, j)) spec[i * nyh + j] = 0.0;
}

}  // namespace spectral

inline Array2D spectral_derivative_x(const PeriodicGrid2D& g, const Array2D& f) {
  auto s = g.forward(f);
  spectral::differentiate_x(g, s);
  return g.inverse_consume(s);
}

inline Array2D spectral_derivative_y(const PeriodicGrid2D& g, const Array2D& f) {
  auto s = g.forward(f);
  spectral::differentiate_y(g, s);
  return g.inverse_consume(s);
}

inline Array2D dealias(const PeriodicGrid2D& g, const Array2D& f) {
  auto s = g.forward(f);
  spectral::dealias(g, s);
  return g.inverse_consume(s);
}

}  // namespace swhomog
