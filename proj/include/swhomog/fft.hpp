#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

namespace detail {
// FFTW's planner is not re-entrant; execution with the new-array interface is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}
}  // namespace detail

/// Real-to-complex transform pair of fixed shape. Plans are immutable after
/// construction; forward/inverse may be called concurrently on distinct data.
/// The inverse is normalized, so inverse(forward(f)) == f.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : RealFft(n, 1, false) {}
  RealFft(std::size_t nx, std::size_t ny) : RealFft(nx, ny, true) {}

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  ~RealFft() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  std::size_t real_size() const noexcept { return nx_ * ny_; }
  /// Number of complex coefficients: nx * (ny/2 + 1) in 2D, n/2 + 1 in 1D.
  std::size_t spectral_size() const noexcept { return two_d_ ? nx_ * (ny_ / 2 + 1) : nx_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    require(in.size() == real_size() && out.size() == spectral_size(), ErrorKind::invalid_argument,
            "fft forward: size mismatch");
    // r2c transforms leave their input intact.
    fftw_execute_dft_r2c(forward_, const_cast<double*>(in.data()), detail::as_fftw(out.data()));
  }

  std::vector<std::complex<double>> forward(std::span<const double> in) const {
    std::vector<std::complex<double>> out(spectral_size());
    forward(in, out);
    return out;
  }

  /// c2r destroys its input, so the spectrum is copied first.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
    require(in.size() == spectral_size() && out.size() == real_size(), ErrorKind::invalid_argument,
            "fft inverse: size mismatch");
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    inverse_in_place(scratch, out);
  }

  /// Consumes `spectrum` (its contents are unspecified afterwards).
  void inverse_in_place(std::span<std::complex<double>> spectrum, std::span<double> out) const {
    fftw_execute_dft_c2r(inverse_, detail::as_fftw(spectrum.data()), out.data());
    const double scale = 1.0 / static_cast<double>(real_size());
    for (double& v : out) v *= scale;
  }

  std::vector<double> inverse(std::span<const std::complex<double>> in) const {
    std::vector<double> out(real_size());
    inverse(in, out);
    return out;
  }

 private:
  RealFft(std::size_t nx, std::size_t ny, bool two_d) : nx_(nx), ny_(ny), two_d_(two_d) {
    require(nx >= 2 && ny >= 1, ErrorKind::invalid_argument, "fft: size too small");
    std::lock_guard lock(detail::fftw_planner_mutex());
    double* r = fftw_alloc_real(real_size());
    fftw_complex* c = fftw_alloc_complex(spectral_size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (two_d_) {
      forward_ = fftw_plan_dft_r2c_2d(static_cast<int>(nx), static_cast<int>(ny), r, c, flags);
      inverse_ = fftw_plan_dft_c2r_2d(static_cast<int>(nx), static_cast<int>(ny), c, r, flags);
    } else {
      forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(nx), r, c, flags);
      inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(nx), c, r, flags);
    }
    fftw_free(r);
    fftw_free(c);
    if (forward_ == nullptr || inverse_ == nullptr) fail(ErrorKind::invalid_argument, "fft: planning failed");
  }

  std::size_t nx_;
  std::size_t ny_;
  bool two_d_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

}  // namespace swhomog
