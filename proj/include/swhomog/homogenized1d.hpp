#pragma once

// Pseudospectral solver for the y-averaged (homogenized) system
//
//   eta_t = -q_x - (delta/<H>) (eta q)_x
//   q_t   = -(1 - (delta^2 mu/<H>) d_xx)^{-1} (g <H> eta_x + (delta/<H>) q q_x)
//
// with explicit SSP-RK3 time stepping.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "swhomog/bathymetry.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/spectral.hpp"
#include "swhomog/time_loop.hpp"

namespace swhomog {

struct State1D {
  Field1D eta_bar;  // y-mean surface perturbation (m)
  Field1D q_bar;    // y-mean depth-integrated x-velocity <H u> (m^2/s)
  double t = 0.0;
};

struct Rhs1D {
  Field1D eta_t;
  Field1D q_t;
};

struct HomogenizedParams {
  EffectiveCoefficients coeffs;
  double cfl = 0.5;
  bool dealias_on = true;
};

inline State1D zero_state(const PeriodicGrid1D& grid) {
  return {Field1D(grid.n(), 0.0), Field1D(grid.n(), 0.0), 0.0};
}

namespace detail {

inline double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

inline void check_finite(std::span<const double> f, const char* what, double t) {
  for (double v : f)
    if (!std::isfinite(v)) fail(ErrorKind::non_finite, std::string(what) + " became non-finite at t = " + std::to_string(t));
}

inline void check_state_1d(const PeriodicGrid1D& grid, const State1D& s, const EffectiveCoefficients& c) {
  grid.check_size(s.eta_bar.size());
  grid.check_size(s.q_bar.size());
  check_finite(s.eta_bar, "eta_bar", s.t);
  check_finite(s.q_bar, "q_bar", s.t);
  for (double e : s.eta_bar)
    if (c.mean_H + e <= 0.0)
      fail(ErrorKind::dry_state, "total depth <H> + eta_bar became non-positive at t = " + std::to_string(s.t));
}

}  // namespace detail

/// Right-hand side of the semi-discrete homogenized system.
inline Rhs1D rhs_homogenized(const PeriodicGrid1D& grid, const State1D& state, const HomogenizedParams& params) {
  const auto& c = params.coeffs;
  detail::check_state_1d(grid, state, c);
  const std::size_t n = grid.n();
  const double a2 = c.nonlinear_coeff();

  auto product = [&](std::span<const double> a, std::span<const double> b) {
    Field1D p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = a[i] * b[i];
    return params.dealias_on ? dealias(grid, p) : p;
  };

  const Field1D q_x = spectral_derivative(grid, state.q_bar, 1);
  const Field1D eta_x = spectral_derivative(grid, state.eta_bar, 1);
  const Field1D eta_q_x = spectral_derivative(grid, product(state.eta_bar, state.q_bar), 1);
  const Field1D q_qx = product(state.q_bar, q_x);

  Rhs1D r{Field1D(n), Field1D(n)};
  Field1D forcing(n);
  const double gH = c.g * c.mean_H;
  for (std::size_t i = 0; i < n; ++i) {
    r.eta_t[i] = -q_x[i] - a2 * eta_q_x[i];
    forcing[i] = gH * eta_x[i] + a2 * q_qx[i];
  }
  r.q_t = helmholtz_inverse(grid, forcing, c.helmholtz_coeff());
  for (double& v : r.q_t) v = -v;
  return r;
}

/// Shu-Osher three-stage third-order SSP Runge-Kutta step.
inline State1D ssprk3_step(const PeriodicGrid1D& grid, const State1D& s, double dt, const HomogenizedParams& params) {
  require(dt > 0.0 && std::isfinite(dt), ErrorKind::invalid_argument, "ssprk3_step: dt must be positive");
  const std::size_t n = grid.n();

  auto stage = [&](const State1D& base, double wb, const State1D& cur, double wc, const Rhs1D& r) {
    State1D out{Field1D(n), Field1D(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      out.eta_bar[i] = wb * base.eta_bar[i] + wc * (cur.eta_bar[i] + dt * r.eta_t[i]);
      out.q_bar[i] = wb * base.q_bar[i] + wc * (cur.q_bar[i] + dt * r.q_t[i]);
    }
    return out;
  };

  const Rhs1D r0 = rhs_homogenized(grid, s, params);
  State1D s1 = stage(s, 0.0, s, 1.0, r0);
  s1.t = s.t + dt;
  const Rhs1D r1 = rhs_homogenized(grid, s1, params);
  State1D s2 = stage(s, 0.75, s1, 0.25, r1);
  s2.t = s.t + 0.5 * dt;
  const Rhs1D r2 = rhs_homogenized(grid, s2, params);
  State1D out = stage(s, 1.0 / 3.0, s2, 2.0 / 3.0, r2);
  out.t = s.t + dt;
  detail::check_finite(out.eta_bar, "eta_bar", out.t);
  detail::check_finite(out.q_bar, "q_bar", out.t);
  return out;
}

/// Fixed step cfl * dx / sqrt(g <H>).
inline double homogenized_dt(const PeriodicGrid1D& grid, const HomogenizedParams& params) {
  require(params.cfl > 0.0 && params.cfl <= 1.0, ErrorKind::invalid_argument, "cfl must lie in (0, 1]");
  return params.cfl * grid.dx() / params.coeffs.wave_speed();
}

using Observer1D = std::function<void(const State1D&)>;

using Simulation1D = TimeLoopResult<State1D>;

/// Integrates to t_end with the fixed step of homogenized_dt, shortened to
/// land exactly on every snapshot time and on t_end. The observer sees the
/// state after every step.
inline Simulation1D simulate_1d(const PeriodicGrid1D& grid, State1D initial, double t_end,
                                const HomogenizedParams& params, std::span<const double> snapshot_times = {},
                                const Observer1D& observer = {}) {
  detail::check_state_1d(grid, initial, params.coeffs);
  const double dt_nominal = homogenized_dt(grid, params);
  const double blowup_ref =
      std::max(detail::max_abs(initial.eta_bar), detail::max_abs(initial.q_bar) / params.coeffs.wave_speed());

  return run_time_loop(
      std::move(initial), t_end, snapshot_times, [&](const State1D&) { return dt_nominal; },
      [&](const State1D& s, double dt) { return ssprk3_step(grid, s, dt, params); },
      [&](const State1D& s) {
        if (blowup_ref > 0.0 && detail::max_abs(s.eta_bar) > 100.0 * blowup_ref)
          fail(ErrorKind::blow_up, "homogenized solution blew up at t = " + std::to_string(s.t));
        detail::check_state_1d(grid, s, params.coeffs);
        if (observer) observer(s);
      });
}

/// Discrete integral sum(f) * dx.
inline double grid_integral(const PeriodicGrid1D& grid, std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * grid.dx();
}

}  // namespace swhomog
