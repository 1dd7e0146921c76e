#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/finite_difference.hpp"
#include "swhomog/spectral.hpp"

using namespace swhomog;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> sample(const PeriodicGrid1D& g, double (*f)(double)) {
  std::vector<double> v(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) v[i] = f(g.x(i));
  return v;
}

}  // namespace

TEST(PeriodicGrid, RejectsBadSizes) {
  EXPECT_THROW(PeriodicGrid1D(7, 1.0, 0.0), Error);
  EXPECT_THROW(PeriodicGrid1D(6, 1.0, 0.0), Error);
  EXPECT_THROW(PeriodicGrid1D(16, -1.0, 0.0), Error);
  const PeriodicGrid1D g(16, 2.0, -1.0);
  EXPECT_THROW(spectral_derivative(g, std::vector<double>(15, 0.0)), Error);
}

TEST(FFT, MatchesNaiveDft) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> f(48);
  for (double& v : f) v = u(rng);
  const PeriodicGrid1D g(48, 1.0, 0.0);
  const auto spec = g.forward(f);
  const auto ref = oracle::naive_dft(f);
  for (std::size_t k = 0; k < ref.size(); ++k) {
    EXPECT_NEAR(spec[k].real(), ref[k].first, 1e-12);
    EXPECT_NEAR(spec[k].imag(), ref[k].second, 1e-12);
  }
  const auto back = g.inverse(spec);
  EXPECT_LT(max_diff(back, f), 1e-14);
}

TEST(FFT, Parseval) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::size_t n = 64;
  std::vector<double> f(n);
  for (double& v : f) v = u(rng);
  const PeriodicGrid1D g(n, 1.0, 0.0);
  const auto F = g.forward(f);
  double phys = 0.0, spec = 0.0;
  for (double v : f) phys += v * v;
  for (std::size_t k = 0; k < F.size(); ++k) spec += (k == 0 || k == n / 2 ? 1.0 : 2.0) * std::norm(F[k]);
  EXPECT_NEAR(phys, spec / n, 1e-12 * phys);
}

TEST(SpectralDerivative, ConstantAndSingleMode) {
  const PeriodicGrid1D g(32, 2 * kPi, 0.0);
  const std::vector<double> c(32, 4.2);
  for (double v : spectral_derivative(g, c)) EXPECT_NEAR(v, 0.0, 1e-14);
  const auto d = spectral_derivative(g, sample(g, [](double x) { return std::sin(3 * x); }));
  const auto exact = sample(g, [](double x) { return 3 * std::cos(3 * x); });
  EXPECT_LT(max_diff(d, exact), 1e-13);
  const auto d2 = spectral_derivative(g, sample(g, [](double x) { return std::sin(3 * x); }), 2);
  const auto exact2 = sample(g, [](double x) { return -9 * std::sin(3 * x); });
  EXPECT_LT(max_diff(d2, exact2), 1e-12);
  EXPECT_THROW(spectral_derivative(g, c, 3), Error);
}

TEST(SpectralDerivative, GaussianAgainstFourthOrderFD) {
  const PeriodicGrid1D g = PeriodicGrid1D::symmetric(1024, 20.0);
  auto gauss = [](double x) { return std::exp(-x * x / 4.0); };
  std::vector<double> f(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) f[i] = gauss(g.x(i));
  const auto spec = spectral_derivative(g, f);
  const auto fd = oracle::fd4_dx(f, g.dx());
  EXPECT_LT(max_diff(spec, fd), 1e-6);
  const auto spec2 = spectral_derivative(g, f, 2);
  const auto fd2 = oracle::fd4_dxx(f, g.dx());
  EXPECT_LT(max_diff(spec2, fd2), 1e-5);
}

TEST(SpectralDerivative, OddSymmetryPreserved) {
  const PeriodicGrid1D g = PeriodicGrid1D::symmetric(64, 5.0);
  std::vector<double> f(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) f[i] = std::exp(-g.x(i) * g.x(i));
  const auto d = spectral_derivative(g, f);
  // f even about x = 0 (node 32); f' odd.
  for (std::size_t i = 1; i < 32; ++i) EXPECT_NEAR(d[32 + i], -d[32 - i], 1e-14);
}

TEST(Antiderivative, InvertsDerivative) {
  const PeriodicGrid1D g(64, 1.0, -0.5);
  std::vector<double> f(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) f[i] = std::cos(2 * kPi * g.x(i)) + 0.5;
  const auto F = spectral_antiderivative(g, f);
  for (std::size_t i = 0; i < g.n(); ++i) EXPECT_NEAR(F[i], std::sin(2 * kPi * g.x(i)) / (2 * kPi), 1e-14);
}

TEST(Helmholtz, ZeroCoefficientIsIdentityAndInvertsOperator) {
  const PeriodicGrid1D g(64, 2 * kPi, 0.0);
  std::vector<double> f(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) f[i] = std::sin(g.x(i)) + 0.3 * std::cos(5 * g.x(i));
  EXPECT_LT(max_diff(helmholtz_inverse(g, f, 0.0), f), 1e-15);
  const double c = 0.7;
  const auto u = helmholtz_inverse(g, f, c);
  const auto uxx = spectral_derivative(g, u, 2);
  for (std::size_t i = 0; i < g.n(); ++i) EXPECT_NEAR(u[i] - c * uxx[i], f[i], 1e-13);
  for (std::size_t i = 0; i < g.n(); ++i)
    EXPECT_NEAR(u[i], std::sin(g.x(i)) / 1.7 + 0.3 * std::cos(5 * g.x(i)) / (1 + 25 * c), 1e-14);
  EXPECT_THROW(helmholtz_inverse(g, f, -1.0), Error);
}

TEST(Dealias, KeepsLowModesDropsHighAndIsIdempotent) {
  const std::size_t n = 48;
  const PeriodicGrid1D g(n, 2 * kPi, 0.0);
  EXPECT_TRUE(dealias_keeps(16, n));
  EXPECT_FALSE(dealias_keeps(17, n));
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::cos(16 * g.x(i)) + std::sin(17 * g.x(i)) + std::cos(23 * g.x(i));
  const auto d = dealias(g, f);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(d[i], std::cos(16 * g.x(i)), 1e-13);
  const auto dd = dealias(g, d);
  EXPECT_LT(max_diff(dd, d), 1e-15);
  // On the spectrum the filter is exactly idempotent.
  auto s = g.forward(f);
  spectral::dealias(g, s);
  const auto s1 = s;
  spectral::dealias(g, s);
  EXPECT_EQ(s, s1);
}

TEST(Spectral2D, DerivativesOfSeparableField) {
  const PeriodicGrid2D g(32, 2 * kPi, 0.0, 16, 1.0, -0.5);
  Array2D f(32, 16);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 16; ++j) f(i, j) = std::sin(2 * g.x(i)) * std::cos(2 * kPi * g.y(j));
  const auto fx = spectral_derivative_x(g, f);
  const auto fy = spectral_derivative_y(g, f);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 16; ++j) {
      EXPECT_NEAR(fx(i, j), 2 * std::cos(2 * g.x(i)) * std::cos(2 * kPi * g.y(j)), 1e-13);
      EXPECT_NEAR(fy(i, j), -2 * kPi * std::sin(2 * g.x(i)) * std::sin(2 * kPi * g.y(j)), 1e-12);
    }
}

TEST(Spectral2D, DealiasIdempotentBitwise) {
  const PeriodicGrid2D g(24, 1.0, 0.0, 12, 1.0, 0.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Array2D f(24, 12);
  for (double& v : f.flat()) v = u(rng);
  auto s = g.forward(f);
  spectral::dealias(g, s);
  const auto once = s;
  spectral::dealias(g, s);
  EXPECT_EQ(s, once);
  EXPECT_TRUE(g.keeps(8, 4));
  EXPECT_FALSE(g.keeps(9, 0));
  EXPECT_TRUE(g.keeps(16, 0));  // |m| = 8 on the negative side
  EXPECT_FALSE(g.keeps(0, 5));
}

TEST(Spectral2D, YIndependentFieldHasZeroYDerivative) {
  const PeriodicGrid2D g(16, 1.0, 0.0, 8, 1.0, 0.0);
  Array2D f(16, 8);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 8; ++j) f(i, j) = std::sin(2 * kPi * g.x(i));
  EXPECT_LT(spectral_derivative_y(g, f).max_abs(), 1e-15);
}
