#pragma once

// Periodic central finite differences (4th order first derivative, 2nd/4th
// order second derivative) on uniform grids.

#include <cstddef>
#include <vector>

namespace oracle {

inline std::vector<double> fd4_dx(const std::vector<double>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fm2 = f[(i + n - 2) % n], fm1 = f[(i + n - 1) % n];
    const double fp1 = f[(i + 1) % n], fp2 = f[(i + 2) % n];
    d[i] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * dx);
  }
  return d;
}

inline std::vector<double> fd2_dx(const std::vector<double>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2.0 * dx);
  return d;
}

inline std::vector<double> fd4_dxx(const std::vector<double>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fm2 = f[(i + n - 2) % n], fm1 = f[(i + n - 1) % n];
    const double fp1 = f[(i + 1) % n], fp2 = f[(i + 2) % n];
    d[i] = (-fm2 + 16.0 * fm1 - 30.0 * f[i] + 16.0 * fp1 - fp2) / (12.0 * dx * dx);
  }
  return d;
}

/// Naive O(n^2) DFT of real data: X_k = sum_j f_j exp(-2 pi i jk/n), k = 0..n/2.
inline std::vector<std::pair<double, double>> naive_dft(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<std::pair<double, double>> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = -2.0 * 3.14159265358979323846 * static_cast<double>(j * k % n) / static_cast<double>(n);
      re += f[j] * std::cos(a);
      im += f[j] * std::sin(a);
    }
    out[k] = {re, im};
  }
  return out;
}

}  // namespace oracle
