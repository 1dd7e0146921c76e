#pragma once

// Fourier collocation solver for the variable-bathymetry shallow water
// equations written in surface elevation, x-velocity and y-momentum:
//
//   eta_t + (u (eta - b))_x + p_y = 0
//   u_t + u u_x + g eta_x + p/(eta - b) u_y = 0
//   p_t + (p^2/(eta - b))_y + g (eta - b) eta_y + (p u)_x = 0
//
// doubly periodic, classical RK4 in time. Only valid for smooth b(y).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "swhomog/array2d.hpp"
#include "swhomog/bathymetry.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/spectral.hpp"
#include "swhomog/time_loop.hpp"

namespace swhomog {

struct StateEUP {
  Array2D eta;
  Array2D u;
  Array2D p;
  double t = 0.0;
};

struct RhsEUP {
  Array2D eta_t;
  Array2D u_t;
  Array2D p_t;
};

struct SpectralParams {
  double g = kGravity;
  /// dt = cfl * min(dx, dy) / c_max; RK4 with Fourier modes is stable up to
  /// roughly cfl = 0.6.
  double cfl = 0.5;
  bool dealias_on = true;
};

using Observer2DSpectral = std::function<void(const StateEUP&)>;
using Simulation2DSpectral = TimeLoopResult<StateEUP>;

class SpectralShallowWater2D {
 public:
  SpectralShallowWater2D(PeriodicGrid2D grid, const BathymetryProfile& profile, SpectralParams params = {})
      : grid_(std::move(grid)), params_(params), eta0_(profile.eta0()), bottom_(grid_.nx(), grid_.ny()) {
    require(profile.is_smooth(), ErrorKind::unsupported,
            "the pseudospectral 2D solver needs continuously differentiable bathymetry");
    require(params.g > 0.0 && params.cfl > 0.0 && params.cfl <= 1.0, ErrorKind::invalid_argument,
            "SpectralParams: g > 0 and 0 < cfl <= 1 required");
    for (std::size_t j = 0; j < grid_.ny(); ++j) {
      const double b = profile.bottom(grid_.y(j));
      for (std::size_t i = 0; i < grid_.nx(); ++i) bottom_(i, j) = b;
    }
  }

  const PeriodicGrid2D& grid() const noexcept { return grid_; }
  const SpectralParams& params() const noexcept { return params_; }
  const Array2D& bottom() const noexcept { return bottom_; }
  double eta0() const noexcept { return eta0_; }

  /// Planar initial data eta(x, y) = eta0 + eta_pert(x), u = u0(x), p = 0.
  StateEUP planar_state(const std::function<double(double)>& eta_pert, const std::function<double(double)>& u0) const {
    StateEUP s{Array2D(grid_.nx(), grid_.ny()), Array2D(grid_.nx(), grid_.ny()), Array2D(grid_.nx(), grid_.ny()), 0.0};
    for (std::size_t i = 0; i < grid_.nx(); ++i) {
      const double e = eta0_ + eta_pert(grid_.x(i));
      const double v = u0 ? u0(grid_.x(i)) : 0.0;
      for (std::size_t j = 0; j < grid_.ny(); ++j) {
        s.eta(i, j) = e;
        s.u(i, j) = v;
      }
    }
    return s;
  }

  RhsEUP rhs(const StateEUP& s) const {
    check_state(s);
    const std::size_t n = s.eta.size();
    const double g = params_.g;
    Array2D h(grid_.nx(), grid_.ny());
    for (std::size_t k = 0; k < n; ++k) h[k] = s.eta[k] - bottom_[k];

    Array2D work(grid_.nx(), grid_.ny());
    auto fwd = [&](auto&& fill) {
      for (std::size_t k = 0; k < n; ++k) work[k] = fill(k);
      return grid_.forward(work);
    };

    // Spectra of state fields and their derivatives needed in physical space.
    Spectrum U = grid_.forward(s.u);
    Spectrum Eta = grid_.forward(s.eta);
    Spectrum tmp = U;
    spectral::differentiate_x(grid_, tmp);
    const Array2D u_x = grid_.inverse_consume(tmp);
    tmp = U;
    spectral::differentiate_y(grid_, tmp);
    const Array2D u_y = grid_.inverse_consume(tmp);
    tmp = Eta;
    spectral::differentiate_y(grid_, tmp);
    const Array2D eta_y = grid_.inverse_consume(tmp);

    // eta_t = -(u h)_x - p_y
    Spectrum mass_x = fwd([&](std::size_t k) { return s.u[k] * h[k]; });
    Spectrum P = grid_.forward(s.p);
    spectral::differentiate_x(grid_, mass_x);
    spectral::differentiate_y(grid_, P);
    Spectrum eta_t(mass_x.size());
    for (std::size_t m = 0; m < eta_t.size(); ++m) eta_t[m] = -mass_x[m] - P[m];

    // u_t = -(u u_x + p/h u_y) - g eta_x
    Spectrum adv = fwd([&](std::size_t k) { return s.u[k] * u_x[k] + s.p[k] / h[k] * u_y[k]; });
    Spectrum grad = Eta;
    spectral::differentiate_x(grid_, grad);
    Spectrum u_t(adv.size());
    for (std::size_t m = 0; m < u_t.size(); ++m) u_t[m] = -adv[m] - g * grad[m];

    // p_t = -(p^2/h)_y - g h eta_y - (p u)_x
    Spectrum flux_y = fwd([&](std::size_t k) { return s.p[k] * s.p[k] / h[k]; });
    Spectrum pressure = fwd([&](std::size_t k) { return g * h[k] * eta_y[k]; });
    Spectrum flux_x = fwd([&](std::size_t k) { return s.p[k] * s.u[k]; });
    spectral::differentiate_y(grid_, flux_y);
    spectral::differentiate_x(grid_, flux_x);
    Spectrum p_t(flux_y.size());
    for (std::size_t m = 0; m < p_t.size(); ++m) p_t[m] = -flux_y[m] - pressure[m] - flux_x[m];

    if (params_.dealias_on) {
      spectral::dealias(grid_, eta_t);
      spectral::dealias(grid_, u_t);
      spectral::dealias(grid_, p_t);
    }
    return {grid_.inverse_consume(eta_t), grid_.inverse_consume(u_t), grid_.inverse_consume(p_t)};
  }

  StateEUP rk4_step(const StateEUP& s, double dt) const {
    require(dt > 0.0 && std::isfinite(dt), ErrorKind::invalid_argument, "rk4_step: dt must be positive");
    auto shifted = [&](const RhsEUP& r, double w) {
      return StateEUP{axpy(s.eta, w, r.eta_t), axpy(s.u, w, r.u_t), axpy(s.p, w, r.p_t), s.t + w};
    };
    const RhsEUP k1 = rhs(s);
    const RhsEUP k2 = rhs(shifted(k1, 0.5 * dt));
    const RhsEUP k3 = rhs(shifted(k2, 0.5 * dt));
    const RhsEUP k4 = rhs(shifted(k3, dt));
    StateEUP out = s;
    const double w = dt / 6.0;
    for (std::size_t k = 0; k < s.eta.size(); ++k) {
      out.eta[k] += w * (k1.eta_t[k] + 2.0 * k2.eta_t[k] + 2.0 * k3.eta_t[k] + k4.eta_t[k]);
      out.u[k] += w * (k1.u_t[k] + 2.0 * k2.u_t[k] + 2.0 * k3.u_t[k] + k4.u_t[k]);
      out.p[k] += w * (k1.p_t[k] + 2.0 * k2.p_t[k] + 2.0 * k3.p_t[k] + k4.p_t[k]);
    }
    out.t = s.t + dt;
    check_finite(out);
    return out;
  }

  /// cfl * min(dx, dy) / (max(|u|, |v|) + sqrt(g h_max)).
  double stable_dt(const StateEUP& s) const {
    double vmax = 0.0, hmax = 0.0;
    for (std::size_t k = 0; k < s.eta.size(); ++k) {
      const double h = s.eta[k] - bottom_[k];
      hmax = std::max(hmax, h);
      vmax = std::max({vmax, std::abs(s.u[k]), std::abs(s.p[k] / h)});
    }
    const double c = vmax + std::sqrt(params_.g * hmax);
    return params_.cfl * std::min(grid_.dx(), grid_.dy()) / c;
  }

  /// Projects the state onto the retained (2/3-rule) modes.
  StateEUP filtered(const StateEUP& s) const {
    return {dealias(grid_, s.eta), dealias(grid_, s.u), dealias(grid_, s.p), s.t};
  }

  Simulation2DSpectral simulate(StateEUP initial, double t_end, std::span<const double> snapshot_times = {},
                                const Observer2DSpectral& observer = {}) const {
    check_state(initial);
    if (params_.dealias_on) initial = filtered(initial);
    const double ref = perturbation_max(initial);
    return run_time_loop(
        std::move(initial), t_end, snapshot_times, [&](const StateEUP& s) { return stable_dt(s); },
        [&](const StateEUP& s, double dt) { return rk4_step(s, dt); },
        [&](const StateEUP& s) {
          if (ref > 0.0 && perturbation_max(s) > 100.0 * ref)
            fail(ErrorKind::blow_up, "2D spectral solution blew up at t = " + std::to_string(s.t));
          check_state(s);
          if (observer) observer(s);
        });
  }

  /// sum (eta - b) dx dy.
  double mass(const StateEUP& s) const {
    double m = 0.0;
    for (std::size_t k = 0; k < s.eta.size(); ++k) m += s.eta[k] - bottom_[k];
    return m * grid_.dx() * grid_.dy();
  }

 private:
  double perturbation_max(const StateEUP& s) const {
    double m = 0.0;
    for (double e : s.eta.flat()) m = std::max(m, std::abs(e - eta0_));
    return m;
  }

  static void check_finite(const StateEUP& s) {
    for (const Array2D* a : {&s.eta, &s.u, &s.p})
      for (double v : a->flat())
        if (!std::isfinite(v)) fail(ErrorKind::non_finite, "2D spectral state non-finite at t = " + std::to_string(s.t));
  }

  void check_state(const StateEUP& s) const {
    for (const Array2D* a : {&s.eta, &s.u, &s.p})
      require(a->nx() == grid_.nx() && a->ny() == grid_.ny(), ErrorKind::invalid_argument,
              "2D spectral state does not match the grid");
    check_finite(s);
    for (std::size_t k = 0; k < s.eta.size(); ++k)
      if (s.eta[k] - bottom_[k] <= 0.0)
        fail(ErrorKind::dry_state, "non-positive depth in 2D spectral state at t = " + std::to_string(s.t));
  }

  PeriodicGrid2D grid_;
  SpectralParams params_;
  double eta0_;
  Array2D bottom_;
};

}  // namespace swhomog
