#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/analytic.hpp"
#include "oracles/quadrature.hpp"
#include "swhomog/bathymetry.hpp"

using namespace swhomog;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected swhomog::Error";
  return ErrorKind::io;
}

double pwc_H(double y) {
  y -= std::floor(y + 0.5);
  return y < 0.0 ? 0.4 : 1.6;
}

}  // namespace

TEST(ProfileEval, FlatAndPresets) {
  EXPECT_DOUBLE_EQ(profile_eval(BathymetryProfile::flat(-1.0), 0.3), 1.0);
  const auto pwc = BathymetryProfile::pwc_setup();
  EXPECT_DOUBLE_EQ(profile_eval(pwc, -0.25), 0.4);
  EXPECT_DOUBLE_EQ(profile_eval(pwc, 0.25), 1.6);
  // Left-closed at the break and periodic wrap.
  EXPECT_DOUBLE_EQ(profile_eval(pwc, 0.0), 1.6);
  EXPECT_DOUBLE_EQ(profile_eval(pwc, -0.5), 0.4);
  EXPECT_DOUBLE_EQ(profile_eval(pwc, 0.75), 0.4);
  const auto sin = BathymetryProfile::sinusoidal_setup();
  EXPECT_NEAR(profile_eval(sin, 0.25), 0.7, 1e-15);
  EXPECT_NEAR(profile_eval(sin, -0.25), 1.3, 1e-15);
}

TEST(ProfileEval, RejectsDryProfiles) {
  EXPECT_EQ(kind_of([] { BathymetryProfile::sinusoidal(-0.2, 0.3); }), ErrorKind::invalid_profile);
  EXPECT_EQ(kind_of([] { BathymetryProfile::piecewise_constant({{0.0, -1.0}, {0.2, 0.1}}); }),
            ErrorKind::invalid_profile);
  EXPECT_EQ(kind_of([] { BathymetryProfile::flat(-1.0, -2.0); }), ErrorKind::invalid_profile);
  EXPECT_EQ(kind_of([] { BathymetryProfile::tabulated(0.0, {-1.0, -1.0, -1.0}); }), ErrorKind::invalid_profile);
}

TEST(Mean, SamplesAndFunctions) {
  const std::vector<double> c(7, 3.0);
  EXPECT_DOUBLE_EQ(mean(c), 3.0);
  EXPECT_EQ(kind_of([] { mean(std::span<const double>{}); }), ErrorKind::invalid_argument);
  EXPECT_NEAR(mean(BathymetryProfile::pwc_setup().depth_function()), 1.0, 1e-15);
  EXPECT_NEAR(mean(BathymetryProfile::sinusoidal_setup().depth_function()), 1.0, 1e-14);
}

TEST(FluctIntegral, ConstantGivesZero) {
  const auto f = fluct_integral(BathymetryProfile::flat(-2.5).depth_function());
  for (double y : {-0.5, -0.1, 0.0, 0.37}) EXPECT_NEAR(f(y), 0.0, 1e-15);
}

TEST(FluctIntegral, PiecewiseTent) {
  const auto f = fluct_integral(BathymetryProfile::pwc_setup().depth_function());
  // [[H]] is the tent -0.6 (y + 1/2) rising back; extremes +-0.15 at the breaks.
  EXPECT_NEAR(f(-0.5), 0.15, 1e-15);
  EXPECT_NEAR(f(0.0), -0.15, 1e-15);
  EXPECT_NEAR(f(-0.25), 0.0, 1e-15);
  EXPECT_NEAR(f(0.25), 0.0, 1e-15);
  EXPECT_NEAR(f(0.5 - 1e-12), 0.15, 1e-11);  // periodic continuity
  oracle::FluctIntegral ref(pwc_H, 64);
  for (double y = -0.5; y < 0.5; y += 0.0371) EXPECT_NEAR(f(y), ref(y), 1e-13) << y;
}

TEST(FluctIntegral, SinusoidalClosedForm) {
  const auto f = fluct_integral(BathymetryProfile::sinusoidal_setup().depth_function());
  for (double y = -0.5; y < 0.5; y += 0.0513)
    EXPECT_NEAR(f(y), 0.3 / (2 * kPi) * std::cos(2 * kPi * y), 1e-13) << y;
  EXPECT_NEAR(f(0.0), 0.047746482927568605, 1e-13);
  EXPECT_NEAR(f.mean(), 0.0, 1e-15);
}

TEST(NestedFluctIntegral, FlatIsZero) {
  const auto f = nested_fluct_integral(BathymetryProfile::flat(-1.0));
  for (double y : {-0.4, 0.0, 0.3}) EXPECT_NEAR(f(y), 0.0, 1e-15);
}

TEST(NestedFluctIntegral, PiecewiseMatchesQuadrature) {
  const auto f = nested_fluct_integral(BathymetryProfile::pwc_setup());
  oracle::FluctIntegral brH(pwc_H, 64);
  oracle::FluctIntegral ref([&](double y) { return brH(y) / pwc_H(y); }, 64);
  for (double y = -0.5; y < 0.5; y += 0.0437) EXPECT_NEAR(f(y), ref(y), 1e-13) << y;
  // Continuous across the depth jump.
  EXPECT_NEAR(f(-1e-12), f(0.0), 1e-11);
  EXPECT_NEAR(f.mean(), 0.0, 1e-16);
}

TEST(NestedFluctIntegral, SinusoidalSymmetry) {
  const auto f = nested_fluct_integral(BathymetryProfile::sinusoidal_setup());
  EXPECT_NEAR(f.mean(), 0.0, 1e-15);
  // H is even about y = 1/4 and [[H]] odd, so the integrand is odd and its
  // antiderivative even about 1/4.
  for (double s : {0.05, 0.13, 0.21, 0.4}) EXPECT_NEAR(f(0.25 + s), f(0.25 - s), 1e-13) << s;
}

TEST(ZeroMeanCondition, SymmetricProfilesPass) {
  for (const auto& p : {BathymetryProfile::flat(), BathymetryProfile::pwc_setup(), BathymetryProfile::sinusoidal_setup()}) {
    const auto z = verify_zero_mean_condition(p);
    EXPECT_TRUE(z.ok);
    EXPECT_LT(z.residual, 1e-13);
  }
}

TEST(ZeroMeanCondition, ThreeLevelProfileMatchesOracle) {
  const auto p = BathymetryProfile::piecewise_constant({{-0.5, -0.5}, {-0.25, -2.0}, {0.25, -1.0}});
  auto H = [](double y) {
    y -= std::floor(y + 0.5);
    return y < -0.25 ? 0.5 : (y < 0.25 ? 2.0 : 1.0);
  };
  const auto ref = oracle::mu_by_quadrature(H, 64);
  const auto z = verify_zero_mean_condition(p);
  EXPECT_NEAR(z.residual, std::abs(ref.zero_mean), 1e-13);
  EXPECT_EQ(z.ok, std::abs(ref.zero_mean) < 1e-10);
  EXPECT_FALSE(z.ok);
}

TEST(EffectiveMu, FlatIsZero) {
  const auto d = dispersion_coefficient(BathymetryProfile::flat(-1.7));
  EXPECT_NEAR(d.mu, 0.0, 1e-15);
  EXPECT_NEAR(d.mu_alternate, 0.0, 1e-15);
}

TEST(EffectiveMu, PiecewiseSetupExact) {
  const auto d = dispersion_coefficient(BathymetryProfile::pwc_setup());
  EXPECT_NEAR(d.mu, 3.0 / 256.0, 1e-12);
  EXPECT_NEAR(d.mu_alternate, 3.0 / 256.0, 1e-12);
  const auto ref = oracle::mu_by_quadrature(pwc_H, 64);
  EXPECT_NEAR(ref.mu, 3.0 / 256.0, 1e-12);
  EXPECT_NEAR(ref.mu_alternate, 3.0 / 256.0, 1e-12);
}

TEST(EffectiveMu, SinusoidalSetupClosedForm) {
  const double expected = (1.0 - std::sqrt(0.91)) / (4 * kPi * kPi);
  EXPECT_NEAR(expected, 1.16673366e-3, 1e-10);
  EXPECT_NEAR(oracle::mu_sinusoidal(-1.0, 0.3), expected, 1e-16);
  const auto d = dispersion_coefficient(BathymetryProfile::sinusoidal_setup());
  EXPECT_NEAR(d.mu, expected, 1e-10);
  EXPECT_NEAR(d.mu_alternate, expected, 1e-10);
  auto H = [](double y) { return 1.0 - 0.3 * std::sin(2 * kPi * y); };
  EXPECT_NEAR(oracle::mu_by_quadrature(H, 200).mu, expected, 1e-12);
}

TEST(EffectiveMu, RandomProfilesBothFormulasAgreeAndMatchQuadrature) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> amp(-0.15, 0.15);
  for (int trial = 0; trial < 20; ++trial) {
    double a[4], c[4];
    for (int m = 0; m < 4; ++m) {
      a[m] = amp(rng) / (m + 1);
      c[m] = amp(rng) / (m + 1);
    }
    auto b = [&](double y) {
      double v = -1.0;
      for (int m = 0; m < 4; ++m) v += a[m] * std::sin(2 * kPi * (m + 1) * y) + c[m] * std::cos(2 * kPi * (m + 1) * y);
      return v;
    };
    std::vector<double> samples(64);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = b(-0.5 + static_cast<double>(i) / 64.0);
    const auto profile = BathymetryProfile::tabulated(-0.5, samples);
    const auto d = dispersion_coefficient(profile);
    EXPECT_NEAR(d.mu, d.mu_alternate, 1e-10 * d.mu) << trial;
    EXPECT_GT(d.mu, 0.0);
    const auto ref = oracle::mu_by_quadrature([&](double y) { return -b(y); }, 128);
    EXPECT_NEAR(d.mu, ref.mu, 1e-10) << trial;
  }
}

TEST(FluctIntegral, AntiSymmetryIdentity) {
  // <a [[b]]> = -<[[a]] b> for smooth periodic a, b.
  auto fa = [](double y) { return 1.0 + 0.3 * std::sin(2 * kPi * y) + 0.1 * std::cos(6 * kPi * y); };
  auto fb = [](double y) { return std::exp(std::cos(2 * kPi * y)); };
  const PeriodicFunction a = SpectralTable::sample(fa, -0.5, 1.0, 256);
  const PeriodicFunction b = SpectralTable::sample(fb, -0.5, 1.0, 256);
  const double lhs = (a * b.fluct_integral()).mean();
  const double rhs = -(a.fluct_integral() * b).mean();
  EXPECT_NEAR(lhs, rhs, 1e-13);
  EXPECT_GT(std::abs(lhs), 1e-3);
}

TEST(EffectiveCoefficients, DerivedQuantities) {
  const auto c = compute_effective_coefficients(BathymetryProfile::pwc_setup());
  EXPECT_NEAR(c.mean_H, 1.0, 1e-15);
  EXPECT_NEAR(c.wave_speed(), std::sqrt(9.81), 1e-14);
  EXPECT_NEAR(c.helmholtz_coeff(), 3.0 / 256.0, 1e-14);
  EXPECT_NEAR(c.nonlinear_coeff(), 1.0, 1e-15);
  EXPECT_NEAR(c.brH_at(0.0), -0.15, 1e-14);
  EXPECT_TRUE(c.zero_mean_ok);
  const auto flat = EffectiveCoefficients::flat(2.0);
  EXPECT_EQ(flat.mu, 0.0);
  EXPECT_NEAR(flat.wave_speed(), std::sqrt(9.81 * 2.0), 1e-14);
}

TEST(EffectiveCoefficients, PeriodScaling) {
  // A profile with period 2 has the same mu in rescaled y.
  const auto p2 = BathymetryProfile::piecewise_constant({{-1.0, -0.4}, {0.0, -1.6}}, 2.0);
  EXPECT_NEAR(effective_dispersion_mu(p2), 3.0 / 256.0, 1e-12);
  const auto c = compute_effective_coefficients(p2);
  EXPECT_NEAR(c.brH_at(0.0), -0.15, 1e-14);
}
