#pragma once

// Reconstruction of the (x, y) wave fields from a y-averaged solution:
//
//   p(x, y)   = -[[H]](y) d/dx (q_bar / <H>)
//   eta(x, y) = eta_bar - delta^2 [[H^-1 [[H]]]](y) eta_bar_xx
//   u(x, y)   = +/- sqrt(g / <H>) (eta - eta0)
//
// The y-profiles are sampled on the caller's y points and projected to zero
// discrete mean, so the sample mean over y of p is exactly 0 and of eta is
// exactly eta_bar.

#include <cmath>
#include <span>
#include <vector>

#include "swhomog/array2d.hpp"
#include "swhomog/bathymetry.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/homogenized1d.hpp"
#include "swhomog/spectral.hpp"

namespace swhomog {

struct Reconstruction2D {
  std::vector<double> x;
  std::vector<double> y;
  Array2D eta;
  Array2D u;
  Array2D p;
  double t = 0.0;
};

namespace detail {

template <class F>
std::vector<double> zero_mean_samples(F&& f, std::span<const double> ys) {
  require(!ys.empty(), ErrorKind::invalid_argument, "reconstruction needs at least one y point");
  std::vector<double> v(ys.size());
  double m = 0.0;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    v[j] = f(ys[j]);
    m += v[j];
  }
  m /= static_cast<double>(ys.size());
  for (double& x : v) x -= m;
  return v;
}

}  // namespace detail

/// [[H]] sampled at ys, discrete mean removed.
inline std::vector<double> brH_profile(const EffectiveCoefficients& c, std::span<const double> ys) {
  return detail::zero_mean_samples([&](double y) { return c.brH_at(y); }, ys);
}

/// [[H^-1 [[H]]]] sampled at ys, discrete mean removed.
inline std::vector<double> brHinvbrH_profile(const EffectiveCoefficients& c, std::span<const double> ys) {
  return detail::zero_mean_samples([&](double y) { return c.brHinvbrH_at(y); }, ys);
}

/// p from a given mean-velocity gradient d<u>/dx.
inline Array2D reconstruct_p_from(std::span<const double> mean_u_x, const EffectiveCoefficients& c,
                                  std::span<const double> ys) {
  const auto prof = brH_profile(c, ys);
  Array2D p(mean_u_x.size(), ys.size());
  for (std::size_t i = 0; i < mean_u_x.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) p(i, j) = -prof[j] * mean_u_x[i];
  return p;
}

inline Array2D reconstruct_p(const PeriodicGrid1D& grid, const State1D& state, const EffectiveCoefficients& c,
                             std::span<const double> ys) {
  grid.check_size(state.q_bar.size());
  Field1D ubar(state.q_bar.size());
  for (std::size_t i = 0; i < ubar.size(); ++i) ubar[i] = state.q_bar[i] / c.mean_H;
  return reconstruct_p_from(spectral_derivative(grid, ubar, 1), c, ys);
}

/// eta from given eta_bar and eta_bar_xx.
inline Array2D reconstruct_eta2d_from(std::span<const double> eta_bar, std::span<const double> eta_bar_xx,
                                      const EffectiveCoefficients& c, std::span<const double> ys) {
  require(eta_bar.size() == eta_bar_xx.size(), ErrorKind::invalid_argument, "eta_bar and eta_bar_xx sizes differ");
  const auto prof = brHinvbrH_profile(c, ys);
  const double d2 = c.delta * c.delta;
  Array2D eta(eta_bar.size(), ys.size());
  for (std::size_t i = 0; i < eta_bar.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) eta(i, j) = eta_bar[i] - d2 * prof[j] * eta_bar_xx[i];
  return eta;
}

inline Array2D reconstruct_eta2d(const PeriodicGrid1D& grid, const State1D& state, const EffectiveCoefficients& c,
                                 std::span<const double> ys) {
  grid.check_size(state.eta_bar.size());
  return reconstruct_eta2d_from(state.eta_bar, spectral_derivative(grid, state.eta_bar, 2), c, ys);
}

/// Simple-wave velocity; direction +1 for right-going, -1 for left-going.
inline Array2D reconstruct_u(const Array2D& eta2d, const EffectiveCoefficients& c, int direction, double eta0 = 0.0) {
  require(direction == 1 || direction == -1, ErrorKind::unsupported,
          "u reconstruction needs a single propagation direction (+1 or -1)");
  const double k = direction * std::sqrt(c.g / c.mean_H);
  Array2D u(eta2d.nx(), eta2d.ny());
  for (std::size_t n = 0; n < u.size(); ++n) u[n] = k * (eta2d[n] - eta0);
  return u;
}

inline Reconstruction2D reconstruct(const PeriodicGrid1D& grid, const State1D& state, const EffectiveCoefficients& c,
                                    std::span<const double> ys, int direction, double eta0 = 0.0) {
  Reconstruction2D r;
  r.x = grid.coordinates();
  r.y.assign(ys.begin(), ys.end());
  r.eta = reconstruct_eta2d(grid, state, c, ys);
  for (double& v : r.eta.flat()) v += eta0;
  r.u = reconstruct_u(r.eta, c, direction, eta0);
  r.p = reconstruct_p(grid, state, c, ys);
  r.t = state.t;
  return r;
}

}  // namespace swhomog
