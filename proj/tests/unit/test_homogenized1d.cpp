#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles/analytic.hpp"
#include "oracles/finite_difference.hpp"
#include "swhomog/harness/metrics.hpp"
#include "swhomog/homogenized1d.hpp"

using namespace swhomog;

namespace {

constexpr double kPi = std::numbers::pi;

HomogenizedParams pwc_params(double cfl = 0.5) {
  HomogenizedParams p;
  p.coeffs = compute_effective_coefficients(BathymetryProfile::pwc_setup());
  p.cfl = cfl;
  return p;
}

State1D gaussian(const PeriodicGrid1D& g, double amp, double width, double x0 = 0.0) {
  State1D s = zero_state(g);
  for (std::size_t i = 0; i < g.n(); ++i) s.eta_bar[i] = amp * std::exp(-std::pow((g.x(i) - x0) / width, 2));
  return s;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

State1D advance_fixed(const PeriodicGrid1D& g, State1D s, double t_end, int steps, const HomogenizedParams& p) {
  const double dt = t_end / steps;
  for (int k = 0; k < steps; ++k) s = ssprk3_step(g, s, dt, p);
  return s;
}

}  // namespace

TEST(RhsHomogenized, ZeroStateGivesZero) {
  const auto g = PeriodicGrid1D::symmetric(64, 10.0);
  const auto r = rhs_homogenized(g, zero_state(g), pwc_params());
  for (std::size_t i = 0; i < g.n(); ++i) {
    EXPECT_EQ(r.eta_t[i], 0.0);
    EXPECT_EQ(r.q_t[i], 0.0);
  }
}

TEST(RhsHomogenized, SingleModeLinearClosedForm) {
  const auto g = PeriodicGrid1D::symmetric(64, kPi);  // length 2 pi
  const auto p = pwc_params();
  const double A = 1e-9, k = 3.0;
  State1D s = zero_state(g);
  for (std::size_t i = 0; i < g.n(); ++i) s.eta_bar[i] = A * std::cos(k * g.x(i));
  const auto r = rhs_homogenized(g, s, p);
  const double gH = p.coeffs.g * p.coeffs.mean_H, c = p.coeffs.helmholtz_coeff();
  for (std::size_t i = 0; i < g.n(); ++i) {
    EXPECT_NEAR(r.eta_t[i], 0.0, 1e-22);
    EXPECT_NEAR(r.q_t[i], gH * k * A * std::sin(k * g.x(i)) / (1 + c * k * k), 1e-20);
  }
}

TEST(RhsHomogenized, AgreesWithFiniteDifferenceOracle) {
  const auto p = pwc_params();
  const double a2 = p.coeffs.nonlinear_coeff(), gH = p.coeffs.g * p.coeffs.mean_H;
  double prev = 0.0;
  for (std::size_t n : {128u, 256u}) {
    const auto g = PeriodicGrid1D::symmetric(n, 20.0);
    State1D s = gaussian(g, 0.05, 3.0);
    for (std::size_t i = 0; i < n; ++i) s.q_bar[i] = 0.1 * std::exp(-std::pow(g.x(i) / 4.0, 2));
    auto params = p;
    params.dealias_on = false;
    const auto r = rhs_homogenized(g, s, params);
    // Oracle: eta_t by 2nd-order FD. q_t checked through (1 - c dxx) q_t = -forcing.
    std::vector<double> flux(n), forcing(n);
    for (std::size_t i = 0; i < n; ++i) flux[i] = s.q_bar[i] + a2 * s.eta_bar[i] * s.q_bar[i];
    auto eta_t = oracle::fd2_dx(flux, g.dx());
    for (double& v : eta_t) v = -v;
    const auto ex = oracle::fd2_dx(s.eta_bar, g.dx());
    const auto qx = oracle::fd2_dx(s.q_bar, g.dx());
    for (std::size_t i = 0; i < n; ++i) forcing[i] = gH * ex[i] + a2 * s.q_bar[i] * qx[i];
    const auto qtt = oracle::fd4_dxx(r.q_t, g.dx());
    double err = max_diff(r.eta_t, eta_t);
    for (std::size_t i = 0; i < n; ++i)
      err = std::max(err, std::abs(r.q_t[i] - p.coeffs.helmholtz_coeff() * qtt[i] + forcing[i]));
    EXPECT_LT(err, 2e-3);
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 3.5);  // second order in dx
    }
    prev = err;
  }
}

TEST(SSPRK3, ZeroStaysZero) {
  const auto g = PeriodicGrid1D::symmetric(32, 5.0);
  const auto s = ssprk3_step(g, zero_state(g), 0.01, pwc_params());
  for (std::size_t i = 0; i < g.n(); ++i) EXPECT_EQ(s.eta_bar[i], 0.0);
  EXPECT_DOUBLE_EQ(s.t, 0.01);
  EXPECT_THROW(ssprk3_step(g, zero_state(g), 0.0, pwc_params()), Error);
}

TEST(SSPRK3, ThirdOrderInTime) {
  const auto g = PeriodicGrid1D::symmetric(128, 20.0);
  const auto p = pwc_params();
  const State1D s0 = gaussian(g, 0.1, 2.0);
  const auto a = advance_fixed(g, s0, 1.0, 20, p);
  const auto b = advance_fixed(g, s0, 1.0, 40, p);
  const auto c = advance_fixed(g, s0, 1.0, 80, p);
  const double ratio = max_diff(a.eta_bar, b.eta_bar) / max_diff(b.eta_bar, c.eta_bar);
  EXPECT_GE(ratio, 6.5);
  EXPECT_LE(ratio, 9.5);
}

TEST(Simulate1D, LinearDispersionRelation) {
  const double L = 10.0;
  const auto g = PeriodicGrid1D(64, L, 0.0);
  const auto p = pwc_params(0.05);
  const auto& c = p.coeffs;
  for (int m = 1; m <= 5; ++m) {
    const double k = 2 * kPi * m / L;
    const double w = oracle::omega(k, c.g, c.mean_H, c.delta, c.mu);
    const double A = 1e-10;
    State1D s = zero_state(g);
    for (std::size_t i = 0; i < g.n(); ++i) {
      s.eta_bar[i] = A * std::cos(k * g.x(i));
      s.q_bar[i] = c.mean_H * (w / k) * A * std::cos(k * g.x(i));
    }
    const double t = 0.45 * 2 * kPi / w;  // just under half a period
    const auto out = simulate_1d(g, s, t, p).final_state;
    double cs = 0, sn = 0;
    for (std::size_t i = 0; i < g.n(); ++i) {
      cs += out.eta_bar[i] * std::cos(k * g.x(i));
      sn += out.eta_bar[i] * std::sin(k * g.x(i));
    }
    const double w_num = std::atan2(sn, cs) / t;
    EXPECT_NEAR(w_num / w, 1.0, 1e-6) << "mode " << m;
  }
}

TEST(Simulate1D, EndTimeEqualsStartReturnsInitial) {
  const auto g = PeriodicGrid1D::symmetric(64, 10.0);
  const State1D s = gaussian(g, 0.05, 1.0);
  const auto r = simulate_1d(g, s, 0.0, pwc_params());
  EXPECT_EQ(r.steps, 0u);
  EXPECT_EQ(r.final_state.eta_bar, s.eta_bar);
}

TEST(Simulate1D, GaussianStaysEvenAndMassConserved) {
  const auto g = PeriodicGrid1D::symmetric(256, 50.0);
  const State1D s = gaussian(g, 0.05, 5.0);
  const double m0 = grid_integral(g, s.eta_bar);
  double q_sum_max = 0.0;
  const auto r = simulate_1d(g, s, 5.0, pwc_params(), {}, [&](const State1D& st) {
    q_sum_max = std::max(q_sum_max, std::abs(grid_integral(g, st.q_bar)));
  });
  const auto& f = r.final_state;
  EXPECT_NEAR(grid_integral(g, f.eta_bar), m0, 1e-10 * std::abs(m0));
  EXPECT_LT(q_sum_max, 1e-8);
  const std::size_t mid = g.n() / 2;  // x = 0
  for (std::size_t i = 1; i < mid; ++i) {
    EXPECT_NEAR(f.eta_bar[mid + i], f.eta_bar[mid - i], 1e-10);
    EXPECT_NEAR(f.q_bar[mid + i], -f.q_bar[mid - i], 1e-10);
  }
}

TEST(Simulate1D, SmallPulseTravelsAtLongWaveSpeed) {
  const auto g = PeriodicGrid1D::symmetric(2048, 200.0);
  const auto p = pwc_params();
  const State1D s = gaussian(g, 1e-4, 5.0);
  std::vector<double> times{10.0, 15.0, 20.0, 25.0};
  const auto r = simulate_1d(g, s, 25.0, p, times);
  std::vector<double> xs;
  std::vector<std::vector<double>> snaps;
  for (std::size_t i = g.n() / 2; i < g.n(); ++i) xs.push_back(g.x(i));
  for (const auto& snap : r.snapshots) snaps.emplace_back(snap.eta_bar.begin() + g.n() / 2, snap.eta_bar.end());
  const auto fit = track_peak_speed(times, snaps, xs);
  EXPECT_NEAR(fit.speed, std::sqrt(9.81), 0.01 * std::sqrt(9.81));
}

TEST(Simulate1D, SpectralConvergenceInSpace) {
  const auto p = pwc_params();
  std::vector<std::vector<double>> sol;
  for (std::size_t n : {64u, 128u, 512u}) {
    const auto g = PeriodicGrid1D::symmetric(n, 20.0);
    const auto r = advance_fixed(g, gaussian(g, 0.02, 3.0), 1.0, 400, p);
    // Sample at the common coarse nodes.
    std::vector<double> c;
    for (std::size_t i = 0; i < n; i += n / 64) c.push_back(r.eta_bar[i]);
    sol.push_back(c);
  }
  const double e64 = max_diff(sol[0], sol[2]), e128 = max_diff(sol[1], sol[2]);
  EXPECT_LT(e128, 1e-9);
  EXPECT_LT(e128, 1e-3 * e64);
}

TEST(Simulate1D, DryStateRejected) {
  const auto g = PeriodicGrid1D::symmetric(32, 10.0);
  State1D s = zero_state(g);
  s.eta_bar[3] = -1.5;
  try {
    simulate_1d(g, s, 1.0, pwc_params());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dry_state);
  }
}

TEST(Simulate1D, UnstableStepReportsBlowUp) {
  const auto g = PeriodicGrid1D(64, 64.0, 0.0);
  HomogenizedParams p;
  p.coeffs = EffectiveCoefficients::flat();
  p.cfl = 1.0;
  try {
    simulate_1d(g, gaussian(g, 1e-3, 4.0, 32.0), 400.0, p);
    FAIL() << "expected the run to blow up";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::blow_up || e.kind() == ErrorKind::non_finite || e.kind() == ErrorKind::dry_state);
  }
}

TEST(Simulate1D, SnapshotsLandOnRequestedTimes) {
  const auto g = PeriodicGrid1D::symmetric(64, 10.0);
  std::vector<double> times{0.0, 0.37, 1.0};
  const auto r = simulate_1d(g, gaussian(g, 0.01, 1.0), 1.0, pwc_params(), times);
  ASSERT_EQ(r.snapshots.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(r.snapshots[k].t, times[k]);
  EXPECT_THROW(simulate_1d(g, gaussian(g, 0.01, 1.0), 1.0, pwc_params(), std::vector<double>{2.0}), Error);
}
