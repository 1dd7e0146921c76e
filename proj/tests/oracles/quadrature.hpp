#pragma once

// Brute-force composite Gauss-Legendre quadrature for periodic cell
// functions on [-1/2, 1/2). Independent of the library's exact piecewise
// polynomial and spectral calculus.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr std::array<double, 5> kGLNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                   0.5384693101056831, 0.9061798459386640};
inline constexpr std::array<double, 5> kGLWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                     0.4786286704993665, 0.2369268850561891};

/// Integral of f over [a, b] with `panels` 5-point Gauss panels.
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < 5; ++k) total += 0.5 * h * kGLWeights[k] * f(mid + 0.5 * h * kGLNodes[k]);
  }
  return total;
}

/// Tabulated fluctuation integral on a uniform panel grid: F(y) = int_{-1/2}^{y} (f - <f>),
/// shifted to zero mean, evaluated by re-integrating from the nearest panel edge.
class FluctIntegral {
 public:
  FluctIntegral(std::function<double(double)> f, int panels) : f_(std::move(f)), panels_(panels) {
    mean_ = integrate(f_, -0.5, 0.5, panels_);
    edge_.assign(panels_ + 1, 0.0);
    const double h = 1.0 / panels_;
    for (int p = 0; p < panels_; ++p)
      edge_[p + 1] = edge_[p] + integrate([&](double y) { return f_(y) - mean_; }, -0.5 + p * h, -0.5 + (p + 1) * h, 1);
    shift_ = 0.0;
    shift_ = integrate([&](double y) { return raw(y); }, -0.5, 0.5, panels_);
  }

  double mean() const { return mean_; }
  double operator()(double y) const { return raw(y) - shift_; }

 private:
  double raw(double y) const {
    y -= std::floor(y + 0.5);
    const double h = 1.0 / panels_;
    int p = static_cast<int>(std::floor((y + 0.5) / h));
    if (p >= panels_) p = panels_ - 1;
    const double a = -0.5 + p * h;
    return edge_[p] + integrate([&](double s) { return f_(s) - mean_; }, a, y, 1);
  }

  std::function<double(double)> f_;
  int panels_;
  double mean_ = 0.0, shift_ = 0.0;
  std::vector<double> edge_;
};

struct MuOracle {
  double mean_H;
  double mu;            // <H^{-1} [[H]]^2>
  double mu_alternate;  // -<H [[H^{-1} [[H]]]]>
  double zero_mean;     // <H^{-1} [[H]]>
};

/// Both dispersion-coefficient expressions by nested quadrature. Break points
/// of a piecewise-constant H must sit on panel edges for full accuracy.
inline MuOracle mu_by_quadrature(const std::function<double(double)>& H, int panels) {
  FluctIntegral brH(H, panels);
  auto inner = [&](double y) { return brH(y) / H(y); };
  FluctIntegral nested(inner, panels);
  MuOracle out;
  out.mean_H = brH.mean();
  out.mu = integrate([&](double y) { return brH(y) * brH(y) / H(y); }, -0.5, 0.5, panels);
  out.mu_alternate = -integrate([&](double y) { return H(y) * nested(y); }, -0.5, 0.5, panels);
  out.zero_mean = integrate(inner, -0.5, 0.5, panels);
  return out;
}

}  // namespace oracle
