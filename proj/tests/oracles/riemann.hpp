#pragma once

// Exact Riemann solver for the 1D shallow water equations over a flat, wet
// bottom. The star depth is found by bisection on the monotone wave curve.

#include <cmath>
#include <utility>

namespace oracle {

struct SWRiemann {
  double hl, ul, hr, ur, g;
  double h_star = 0.0, u_star = 0.0;

  SWRiemann(double hl_, double ul_, double hr_, double ur_, double g_) : hl(hl_), ul(ul_), hr(hr_), ur(ur_), g(g_) {
    double lo = 1e-14, hi = 10.0 * (hl + hr) + (std::abs(ul) + std::abs(ur)) * (std::abs(ul) + std::abs(ur)) / g;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (wave(mid, hl) + wave(mid, hr) + ur - ul > 0.0 ? hi : lo) = mid;
    }
    h_star = 0.5 * (lo + hi);
    u_star = 0.5 * (ul + ur) + 0.5 * (wave(h_star, hr) - wave(h_star, hl));
  }

  double wave(double h, double hk) const {
    if (h <= hk) return 2.0 * (std::sqrt(g * h) - std::sqrt(g * hk));
    return (h - hk) * std::sqrt(0.5 * g * (h + hk) / (h * hk));
  }

  /// (h, u) at similarity coordinate s = x / t.
  std::pair<double, double> sample(double s) const {
    const double cl = std::sqrt(g * hl), cr = std::sqrt(g * hr), cs = std::sqrt(g * h_star);
    if (s <= u_star) {
      if (h_star > hl) {
        const double sl = ul - cl * std::sqrt(0.5 * h_star * (h_star + hl)) / hl;
        return s < sl ? std::pair{hl, ul} : std::pair{h_star, u_star};
      }
      if (s <= ul - cl) return {hl, ul};
      if (s >= u_star - cs) return {h_star, u_star};
      const double c = (ul + 2.0 * cl - s) / 3.0;
      return {c * c / g, s + c};
    }
    if (h_star > hr) {
      const double sr = ur + cr * std::sqrt(0.5 * h_star * (h_star + hr)) / hr;
      return s > sr ? std::pair{hr, ur} : std::pair{h_star, u_star};
    }
    if (s >= ur + cr) return {hr, ur};
    if (s <= u_star + cs) return {h_star, u_star};
    const double c = (s - ur + 2.0 * cr) / 3.0;
    return {c * c / g, s - c};
  }
};

}  // namespace oracle
