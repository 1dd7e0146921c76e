#pragma once

// Well-balanced finite-volume solver for the conservative shallow water
// system in (h, hu, hv) with cell-centred bathymetry b:
//
//   MUSCL reconstruction of (h + b, hu, hv) with an optional minmod limiter,
//   hydrostatic reconstruction of interface depths, Rusanov fluxes,
//   unsplit update, SSP-RK2 in time.
//
// The hydrostatic correction makes the lake at rest (h + b = const, u = v = 0)
// an exact discrete steady state for any bathymetry, including jumps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "swhomog/array2d.hpp"
#include "swhomog/bathymetry.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/time_loop.hpp"

namespace swhomog {

enum class Limiter { none, minmod };
enum class BoundaryX { reflecting, periodic, reflecting_then_periodic };
enum class Direction { x, y };

struct FVConfig {
  double cfl = 0.45;
  Limiter limiter = Limiter::minmod;
  BoundaryX bc_x = BoundaryX::periodic;
  double switch_time = 0.0;  // for reflecting_then_periodic
  double g = kGravity;
};

/// Cell-centred tensor grid on [x0, x0 + lx) x [y0, y0 + ly).
struct CellGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double x0 = 0.0;
  double lx = 1.0;
  double y0 = -0.5;
  double ly = 1.0;

  double dx() const noexcept { return lx / static_cast<double>(nx); }
  double dy() const noexcept { return ly / static_cast<double>(ny); }
  double xc(std::size_t i) const noexcept { return x0 + (static_cast<double>(i) + 0.5) * dx(); }
  double yc(std::size_t j) const noexcept { return y0 + (static_cast<double>(j) + 0.5) * dy(); }
};

struct StateCons {
  CellGrid grid;
  Array2D h, hu, hv, b;
  double t = 0.0;
};

struct Conserved {
  double h = 0.0;
  double hn = 0.0;  // momentum normal to the face
  double ht = 0.0;  // tangential momentum
  double un = 0.0;  // velocities (0 where dry)
  double ut = 0.0;
};

/// Face states after hydrostatic correction, plus the uncorrected depths the
/// well-balanced pressure correction needs.
struct InterfaceState {
  Conserved left;
  Conserved right;
  double h_left_raw = 0.0;
  double h_right_raw = 0.0;
};

using Flux = std::array<double, 3>;  // (mass, normal momentum, tangential momentum)

inline double minmod(double a, double b) noexcept {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

inline double limited_slope(double back, double fwd, Limiter limiter) noexcept {
  return limiter == Limiter::minmod ? minmod(back, fwd) : 0.0;
}

/// Cell values along the face normal: surface, normal and tangential momentum, bottom.
struct CellValues {
  double eta, hn, ht, b;
};

/// Limited slopes of (eta, hn, ht) in one cell.
struct CellSlopes {
  double eta, hn, ht;
};

inline CellSlopes cell_slopes(const CellValues& back, const CellValues& c, const CellValues& fwd,
                              Limiter limiter) noexcept {
  return {limited_slope(c.eta - back.eta, fwd.eta - c.eta, limiter),
          limited_slope(c.hn - back.hn, fwd.hn - c.hn, limiter),
          limited_slope(c.ht - back.ht, fwd.ht - c.ht, limiter)};
}

/// Face between cells l and r given their slopes, with hydrostatic depth
/// correction h* = max(0, eta - max(b_l, b_r)).
inline InterfaceState reconstruct_face(const CellValues& l, const CellSlopes& sl, const CellValues& r,
                                       const CellSlopes& sr) noexcept {
  const double eta_l = l.eta + 0.5 * sl.eta;
  const double eta_r = r.eta - 0.5 * sr.eta;
  const double hn_l = l.hn + 0.5 * sl.hn;
  const double hn_r = r.hn - 0.5 * sr.hn;
  const double ht_l = l.ht + 0.5 * sl.ht;
  const double ht_r = r.ht - 0.5 * sr.ht;

  InterfaceState out;
  out.h_left_raw = eta_l - l.b;
  out.h_right_raw = eta_r - r.b;
  const double b_face = std::max(l.b, r.b);
  const double hl = std::max(0.0, eta_l - b_face);
  const double hr = std::max(0.0, eta_r - b_face);
  constexpr double kDry = 1e-12;
  const double ul = out.h_left_raw > kDry ? hn_l / out.h_left_raw : 0.0;
  const double vl = out.h_left_raw > kDry ? ht_l / out.h_left_raw : 0.0;
  const double ur = out.h_right_raw > kDry ? hn_r / out.h_right_raw : 0.0;
  const double vr = out.h_right_raw > kDry ? ht_r / out.h_right_raw : 0.0;
  out.left = {hl, hl * ul, hl * vl, ul, vl};
  out.right = {hr, hr * ur, hr * vr, ur, vr};
  return out;
}

/// Reconstructs the two sides of the face between cells l and r; ll and rr are
/// the outer neighbours that feed the slopes.
inline InterfaceState reconstruct_face(const CellValues& ll, const CellValues& l, const CellValues& r,
                                       const CellValues& rr, Limiter limiter) noexcept {
  return reconstruct_face(l, cell_slopes(ll, l, r, limiter), r, cell_slopes(l, r, rr, limiter));
}

inline Flux physical_flux(const Conserved& q, double g) noexcept {
  return {q.hn, q.hn * q.un + 0.5 * g * q.h * q.h, q.ht * q.un};
}

/// Rusanov (local Lax-Friedrichs) flux in face-normal coordinates.
inline Flux numerical_flux(const Conserved& left, const Conserved& right, double g) noexcept {
  const Flux fl = physical_flux(left, g);
  const Flux fr = physical_flux(right, g);
  const double sl = std::abs(left.un) + std::sqrt(g * left.h);
  const double sr = std::abs(right.un) + std::sqrt(g * right.h);
  const double s = std::max(sl, sr);
  return {0.5 * (fl[0] + fr[0]) - 0.5 * s * (right.h - left.h),
          0.5 * (fl[1] + fr[1]) - 0.5 * s * (right.hn - left.hn),
          0.5 * (fl[2] + fr[2]) - 0.5 * s * (right.ht - left.ht)};
}

/// Fluxes seen by the cells on either side of a face, including the
/// hydrostatic pressure correction 1/2 g (h_raw^2 - h*^2).
struct FaceFluxes {
  Flux to_left;   // flux through the right face of the left cell
  Flux to_right;  // flux through the left face of the right cell
};

inline FaceFluxes face_fluxes(const InterfaceState& s, double g) noexcept {
  const Flux f = numerical_flux(s.left, s.right, g);
  FaceFluxes out{f, f};
  out.to_left[1] += 0.5 * g * (s.h_left_raw * s.h_left_raw - s.left.h * s.left.h);
  out.to_right[1] += 0.5 * g * (s.h_right_raw * s.h_right_raw - s.right.h * s.right.h);
  return out;
}

struct ResidualCons {
  Array2D h, hu, hv;
};

class FiniteVolumeSW2D {
 public:
  FiniteVolumeSW2D(CellGrid grid, FVConfig config) : grid_(grid), config_(config) {
    require(grid.nx >= 2 && grid.ny >= 1 && grid.lx > 0.0 && grid.ly > 0.0, ErrorKind::invalid_argument,
            "FV grid needs nx >= 2, ny >= 1 and positive extents");
    require(config.cfl > 0.0 && config.cfl < 1.0, ErrorKind::invalid_argument, "FV cfl must lie in (0, 1)");
    require(config.g > 0.0, ErrorKind::invalid_argument, "g must be positive");
  }

  const CellGrid& grid() const noexcept { return grid_; }
  const FVConfig& config() const noexcept { return config_; }

  /// Cell-centred b sampled from the profile (at cell centres, so jumps on
  /// cell faces are represented exactly).
  Array2D sample_bottom(const BathymetryProfile& profile) const {
    Array2D b(grid_.nx, grid_.ny);
    for (std::size_t j = 0; j < grid_.ny; ++j) {
      const double v = profile.bottom(grid_.yc(j));
      for (std::size_t i = 0; i < grid_.nx; ++i) b(i, j) = v;
    }
    return b;
  }

  /// eta = eta0 + eta_pert(x), hu = (eta - b) u0(x), hv = 0.
  StateCons planar_state(const BathymetryProfile& profile, const std::function<double(double)>& eta_pert,
                         const std::function<double(double)>& u0 = {}) const {
    StateCons s{grid_, Array2D(grid_.nx, grid_.ny), Array2D(grid_.nx, grid_.ny), Array2D(grid_.nx, grid_.ny),
                sample_bottom(profile), 0.0};
    for (std::size_t i = 0; i < grid_.nx; ++i) {
      const double e = profile.eta0() + (eta_pert ? eta_pert(grid_.xc(i)) : 0.0);
      const double u = u0 ? u0(grid_.xc(i)) : 0.0;
      for (std::size_t j = 0; j < grid_.ny; ++j) {
        s.h(i, j) = e - s.b(i, j);
        s.hu(i, j) = s.h(i, j) * u;
      }
    }
    return s;
  }

  StateCons lake_at_rest(const BathymetryProfile& profile) const { return planar_state(profile, {}); }

  bool periodic_x_at(double t) const {
    switch (config_.bc_x) {
      case BoundaryX::periodic: return true;
      case BoundaryX::reflecting: return false;
      case BoundaryX::reflecting_then_periodic: return t >= config_.switch_time;
    }
    return true;
  }

  /// Interface states for every face normal to `direction`. x-faces are
  /// ordered face-major: index f * ny + j for f = 0..nx (face f sits left of
  /// cell f). y-faces: i * (ny + 1) + f.
  std::vector<InterfaceState> reconstruct_interfaces(const StateCons& s, Direction direction) const {
    const Padded p = pad(s, periodic_x_at(s.t));
    std::vector<InterfaceState> out;
    if (direction == Direction::x) {
      out.reserve((grid_.nx + 1) * grid_.ny);
      for (std::size_t f = 0; f <= grid_.nx; ++f)
        for (std::size_t j = 0; j < grid_.ny; ++j) out.push_back(x_face(p, f, j));
    } else {
      out.reserve(grid_.nx * (grid_.ny + 1));
      for (std::size_t i = 0; i < grid_.nx; ++i)
        for (std::size_t f = 0; f <= grid_.ny; ++f) out.push_back(y_face(p, i, f));
    }
    return out;
  }

  /// Semi-discrete right-hand side, x and y contributions summed per cell.
  ResidualCons residual(const StateCons& s, bool periodic_x) const {
    const Padded p = pad(s, periodic_x);
    const std::size_t nx = grid_.nx, ny = grid_.ny;
    const double g = config_.g;
    ResidualCons rx{Array2D(nx, ny), Array2D(nx, ny), Array2D(nx, ny)};

    const Limiter lim = config_.limiter;
    auto xcell = [&](std::size_t ip, std::size_t jp) {
      const std::size_t k = p.at(ip, jp);
      return CellValues{p.eta[k], p.hu[k], p.hv[k], p.b[k]};
    };
    auto ycell = [&](std::size_t ip, std::size_t jp) {
      const std::size_t k = p.at(ip, jp);
      return CellValues{p.eta[k], p.hv[k], p.hu[k], p.b[k]};
    };

    // x-direction, face f between cells f-1 and f; slopes and the flux into
    // the previous cell are carried along i.
    const double inv_dx = 1.0 / grid_.dx();
    std::vector<CellSlopes> slope_prev(ny);
    std::vector<Flux> carry(ny);
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t jp = j + kGhost, ip = kGhost - 1;
      slope_prev[j] = cell_slopes(xcell(ip - 1, jp), xcell(ip, jp), xcell(ip + 1, jp), lim);
    }
    for (std::size_t f = 0; f <= nx; ++f) {
      const std::size_t il = f + kGhost - 1, ir = il + 1;
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t jp = j + kGhost;
        const CellValues cl = xcell(il, jp), cr = xcell(ir, jp);
        const CellSlopes sr = cell_slopes(cl, cr, xcell(ir + 1, jp), lim);
        const FaceFluxes ff = face_fluxes(reconstruct_face(cl, slope_prev[j], cr, sr), g);
        if (f > 0) {
          // normal = hu, tangential = hv
          rx.h(f - 1, j) = (carry[j][0] - ff.to_left[0]) * inv_dx;
          rx.hu(f - 1, j) = (carry[j][1] - ff.to_left[1]) * inv_dx;
          rx.hv(f - 1, j) = (carry[j][2] - ff.to_left[2]) * inv_dx;
        }
        carry[j] = ff.to_right;
        slope_prev[j] = sr;
      }
    }

    const double inv_dy = 1.0 / grid_.dy();
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t ip = i + kGhost;
      CellSlopes sl = cell_slopes(ycell(ip, kGhost - 2), ycell(ip, kGhost - 1), ycell(ip, kGhost), lim);
      Flux left{};
      for (std::size_t f = 0; f <= ny; ++f) {
        const std::size_t jl = f + kGhost - 1, jr = jl + 1;
        const CellValues cl = ycell(ip, jl), cr = ycell(ip, jr);
        const CellSlopes sr = cell_slopes(cl, cr, ycell(ip, jr + 1), lim);
        const FaceFluxes ff = face_fluxes(reconstruct_face(cl, sl, cr, sr), g);
        if (f > 0) {
          // normal = hv, tangential = hu
          rx.h(i, f - 1) += (left[0] - ff.to_left[0]) * inv_dy;
          rx.hv(i, f - 1) += (left[1] - ff.to_left[1]) * inv_dy;
          rx.hu(i, f - 1) += (left[2] - ff.to_left[2]) * inv_dy;
        }
        left = ff.to_right;
        sl = sr;
      }
    }

    return rx;
  }

  /// One SSP-RK2 step; boundary type is frozen at the step's start time.
  StateCons fv_step(const StateCons& s, double dt) const {
    require(dt > 0.0 && std::isfinite(dt), ErrorKind::invalid_argument, "fv_step: dt must be positive");
    const bool periodic_x = periodic_x_at(s.t);
    const ResidualCons r0 = residual(s, periodic_x);
    StateCons s1 = s;
    for (std::size_t k = 0; k < s.h.size(); ++k) {
      s1.h[k] = s.h[k] + dt * r0.h[k];
      s1.hu[k] = s.hu[k] + dt * r0.hu[k];
      s1.hv[k] = s.hv[k] + dt * r0.hv[k];
    }
    check_depth(s1, s.t + dt);
    const ResidualCons r1 = residual(s1, periodic_x);
    StateCons out = s;
    for (std::size_t k = 0; k < s.h.size(); ++k) {
      out.h[k] = 0.5 * s.h[k] + 0.5 * (s1.h[k] + dt * r1.h[k]);
      out.hu[k] = 0.5 * s.hu[k] + 0.5 * (s1.hu[k] + dt * r1.hu[k]);
      out.hv[k] = 0.5 * s.hv[k] + 0.5 * (s1.hv[k] + dt * r1.hv[k]);
    }
    out.t = s.t + dt;
    check_depth(out, out.t);
    return out;
  }

  StateCons fv_step(const StateCons& s) const { return fv_step(s, stable_dt(s)); }

  /// cfl / max over cells of ((|u| + c)/dx + (|v| + c)/dy).
  double stable_dt(const StateCons& s) const {
    double rate = 0.0;
    const double inv_dx = 1.0 / grid_.dx(), inv_dy = 1.0 / grid_.dy();
    for (std::size_t k = 0; k < s.h.size(); ++k) {
      const double h = s.h[k];
      if (h <= 0.0) continue;
      const double c = std::sqrt(config_.g * h);
      rate = std::max(rate, (std::abs(s.hu[k] / h) + c) * inv_dx + (std::abs(s.hv[k] / h) + c) * inv_dy);
    }
    require(rate > 0.0, ErrorKind::dry_state, "FV state has no wet cells");
    return config_.cfl / rate;
  }

  using Observer = std::function<void(const StateCons&)>;

  TimeLoopResult<StateCons> simulate(StateCons initial, double t_end, std::span<const double> snapshot_times = {},
                                     const Observer& observer = {}, double eta0 = 0.0) const {
    check_shape(initial);
    check_depth(initial, initial.t);
    const double ref = perturbation_max(initial, eta0);
    // Switch step lands exactly on the boundary switch so both halves are clean.
    std::vector<double> stops(snapshot_times.begin(), snapshot_times.end());
    return run_time_loop(
        std::move(initial), t_end, stops,
        [&](const StateCons& s) {
          double dt = stable_dt(s);
          if (config_.bc_x == BoundaryX::reflecting_then_periodic && s.t < config_.switch_time)
            dt = std::min(dt, config_.switch_time - s.t);
          return dt;
        },
        [&](const StateCons& s, double dt) { return fv_step(s, dt); },
        [&](const StateCons& s) {
          if (ref > 0.0 && perturbation_max(s, eta0) > 100.0 * ref)
            fail(ErrorKind::blow_up, "FV solution blew up at t = " + std::to_string(s.t));
          if (observer) observer(s);
        });
  }

  /// sum h dx dy.
  double mass(const StateCons& s) const {
    double m = 0.0;
    for (double v : s.h.flat()) m += v;
    return m * grid_.dx() * grid_.dy();
  }

 private:
  static constexpr std::size_t kGhost = 2;

  struct Padded {
    std::size_t nyp;
    std::vector<double> eta, hu, hv, b;
    std::size_t at(std::size_t ip, std::size_t jp) const noexcept { return ip * nyp + jp; }
  };

  Padded pad(const StateCons& s, bool periodic_x) const {
    check_shape(s);
    const std::size_t nx = grid_.nx, ny = grid_.ny;
    const std::size_t nxp = nx + 2 * kGhost, nyp = ny + 2 * kGhost;
    Padded p{nyp, std::vector<double>(nxp * nyp), std::vector<double>(nxp * nyp), std::vector<double>(nxp * nyp),
             std::vector<double>(nxp * nyp)};
    const auto nxi = static_cast<std::ptrdiff_t>(nx);
    const auto nyi = static_cast<std::ptrdiff_t>(ny);
    for (std::size_t ip = 0; ip < nxp; ++ip) {
      std::ptrdiff_t i = static_cast<std::ptrdiff_t>(ip) - static_cast<std::ptrdiff_t>(kGhost);
      double sign = 1.0;
      if (i < 0 || i >= nxi) {
        if (periodic_x) {
          i = (i + nxi) % nxi;
        } else {
          i = (i < 0) ? -1 - i : 2 * nxi - 1 - i;
          sign = -1.0;
        }
      }
      for (std::size_t jp = 0; jp < nyp; ++jp) {
        const std::ptrdiff_t j = (static_cast<std::ptrdiff_t>(jp) - static_cast<std::ptrdiff_t>(kGhost) + nyi) % nyi;
        const std::size_t src = static_cast<std::size_t>(i) * ny + static_cast<std::size_t>(j);
        const std::size_t dst = p.at(ip, jp);
        p.b[dst] = s.b[src];
        p.eta[dst] = s.h[src] + s.b[src];
        p.hu[dst] = sign * s.hu[src];
        p.hv[dst] = s.hv[src];
      }
    }
    return p;
  }

  // Face f along x lies between cells f-1 and f.
  InterfaceState x_face(const Padded& p, std::size_t f, std::size_t j) const noexcept {
    const std::size_t jp = j + kGhost;
    auto cell = [&](std::size_t ip) {
      const std::size_t k = p.at(ip, jp);
      return CellValues{p.eta[k], p.hu[k], p.hv[k], p.b[k]};
    };
    const std::size_t l = f + kGhost - 1;
    return reconstruct_face(cell(l - 1), cell(l), cell(l + 1), cell(l + 2), config_.limiter);
  }

  InterfaceState y_face(const Padded& p, std::size_t i, std::size_t f) const noexcept {
    const std::size_t ip = i + kGhost;
    auto cell = [&](std::size_t jp) {
      const std::size_t k = p.at(ip, jp);
      return CellValues{p.eta[k], p.hv[k], p.hu[k], p.b[k]};
    };
    const std::size_t l = f + kGhost - 1;
    return reconstruct_face(cell(l - 1), cell(l), cell(l + 1), cell(l + 2), config_.limiter);
  }

  void check_shape(const StateCons& s) const {
    for (const Array2D* a : {&s.h, &s.hu, &s.hv, &s.b})
      require(a->nx() == grid_.nx && a->ny() == grid_.ny, ErrorKind::invalid_argument, "FV state does not match grid");
  }

  static void check_depth(const StateCons& s, double t) {
    for (std::size_t k = 0; k < s.h.size(); ++k) {
      if (!std::isfinite(s.h[k]) || !std::isfinite(s.hu[k]) || !std::isfinite(s.hv[k]))
        fail(ErrorKind::non_finite, "FV state non-finite at t = " + std::to_string(t));
      if (s.h[k] < 0.0) fail(ErrorKind::dry_state, "negative depth in FV update at t = " + std::to_string(t));
    }
  }

  static double perturbation_max(const StateCons& s, double eta0) {
    double m = 0.0;
    for (std::size_t k = 0; k < s.h.size(); ++k) m = std::max(m, std::abs(s.h[k] + s.b[k] - eta0));
    return m;
  }

  CellGrid grid_;
  FVConfig config_;
};

}  // namespace swhomog
