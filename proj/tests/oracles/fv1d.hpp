#pragma once

// Stand-alone 1D finite-volume reference built only from the library's face
// primitives (reconstruct_face / face_fluxes). Used to check that the 2D
// solver reduces to the 1D scheme for y-independent data.

#include <cstddef>
#include <vector>

#include "swhomog/sw2d_fv.hpp"

namespace oracle {

struct FV1DState {
  std::vector<double> h, hu, b;
};

inline std::vector<double> fv1d_residual_component(const FV1DState& s, double dx, double g, swhomog::Limiter lim,
                                                   bool periodic, std::vector<double>* r_hu) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.h.size());
  auto cell = [&](std::ptrdiff_t i) {
    double sign = 1.0;
    if (i < 0 || i >= n) {
      if (periodic) {
        i = (i + n) % n;
      } else {
        i = i < 0 ? -1 - i : 2 * n - 1 - i;
        sign = -1.0;
      }
    }
    const auto k = static_cast<std::size_t>(i);
    return swhomog::CellValues{s.h[k] + s.b[k], sign * s.hu[k], 0.0, s.b[k]};
  };
  std::vector<double> r_h(static_cast<std::size_t>(n));
  r_hu->assign(static_cast<std::size_t>(n), 0.0);
  std::vector<swhomog::FaceFluxes> faces;
  for (std::ptrdiff_t f = 0; f <= n; ++f)
    faces.push_back(swhomog::face_fluxes(swhomog::reconstruct_face(cell(f - 2), cell(f - 1), cell(f), cell(f + 1), lim), g));
  const double inv_dx = 1.0 / dx;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    r_h[k] = (faces[k].to_right[0] - faces[k + 1].to_left[0]) * inv_dx;
    (*r_hu)[k] = (faces[k].to_right[1] - faces[k + 1].to_left[1]) * inv_dx;
  }
  return r_h;
}

/// SSP-RK2 step with the same arithmetic order as the 2D solver.
inline FV1DState fv1d_step(const FV1DState& s, double dx, double dt, double g, swhomog::Limiter lim, bool periodic) {
  std::vector<double> r_hu0, r_hu1;
  const auto r_h0 = fv1d_residual_component(s, dx, g, lim, periodic, &r_hu0);
  FV1DState s1 = s;
  for (std::size_t k = 0; k < s.h.size(); ++k) {
    s1.h[k] = s.h[k] + dt * r_h0[k];
    s1.hu[k] = s.hu[k] + dt * r_hu0[k];
  }
  const auto r_h1 = fv1d_residual_component(s1, dx, g, lim, periodic, &r_hu1);
  FV1DState out = s;
  for (std::size_t k = 0; k < s.h.size(); ++k) {
    out.h[k] = 0.5 * s.h[k] + 0.5 * (s1.h[k] + dt * r_h1[k]);
    out.hu[k] = 0.5 * s.hu[k] + 0.5 * (s1.hu[k] + dt * r_hu1[k]);
  }
  return out;
}

}  // namespace oracle
