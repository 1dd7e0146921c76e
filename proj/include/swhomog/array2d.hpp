#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

/// Dense nx-by-ny field, row-major with y contiguous: index = i * ny + j.
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t nx, std::size_t ny, double value = 0.0)
      : nx_(nx), ny_(ny), data_(nx * ny, value) {}

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * ny_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * ny_ + j]; }
  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }
  std::vector<double>& storage() noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * ny_, ny_}; }

  bool same_shape(const Array2D& other) const noexcept {
    return nx_ == other.nx_ && ny_ == other.ny_;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, v < 0 ? -v : v);
    return m;
  }

  friend bool operator==(const Array2D&, const Array2D&) = default;

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> data_;
};

/// out = a + s * b, elementwise.
inline Array2D axpy(const Array2D& a, double s, const Array2D& b) {
  require(a.same_shape(b), ErrorKind::invalid_argument, "axpy: shape mismatch");
  Array2D out(a.nx(), a.ny());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + s * b[k];
  return out;
}

}  // namespace swhomog
