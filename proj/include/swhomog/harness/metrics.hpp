#pragma once

// y-averaging, peak tracking and field comparison.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "swhomog/array2d.hpp"
#include "swhomog/errors.hpp"

namespace swhomog {

/// Mean over the y index of every x column. The samples must cover one full
/// y-period uniformly (spectral nodes or FV cell centres); for periodic
/// nodal data this is the trapezoid rule, for cell averages it is exact.
inline std::vector<double> y_average(const Array2D& f) {
  require(f.ny() >= 1 && f.nx() >= 1, ErrorKind::invalid_argument, "y_average: empty field");
  std::vector<double> out(f.nx());
  for (std::size_t i = 0; i < f.nx(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.ny(); ++j) s += f(i, j);
    out[i] = s / static_cast<double>(f.ny());
  }
  return out;
}

/// Checked variant: the y samples must be uniform and span exactly one period.
inline std::vector<double> y_average(const Array2D& f, std::span<const double> ys, double period) {
  require(ys.size() == f.ny() && ys.size() >= 1, ErrorKind::invalid_argument, "y_average: y samples do not match field");
  const double dy = period / static_cast<double>(ys.size());
  for (std::size_t j = 1; j < ys.size(); ++j)
    require(std::abs(ys[j] - ys[j - 1] - dy) <= 1e-9 * period, ErrorKind::invalid_argument,
            "y_average: grid does not cover one period uniformly");
  return y_average(f);
}

struct PeakLocation {
  double x = 0.0;
  double value = 0.0;
  std::size_t index = 0;
};

/// Sub-grid maximum by parabolic interpolation through the largest sample and
/// its neighbours (periodic neighbours when `periodic`). Throws on ambiguity:
/// a second separated local maximum within 10% of the largest one.
inline PeakLocation locate_peak(std::span<const double> x, std::span<const double> f, bool periodic = true,
                                bool check_ambiguity = true) {
  const std::size_t n = f.size();
  require(n >= 3 && x.size() == n, ErrorKind::invalid_argument, "locate_peak needs >= 3 matching samples");
  const std::size_t im = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
  const double fm = f[im];
  auto at = [&](std::ptrdiff_t k) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
    return f[static_cast<std::size_t>(((k % nn) + nn) % nn)];
  };
  if (check_ambiguity && fm > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == im) continue;
      if (!periodic && (i == 0 || i + 1 == n)) continue;
      const auto ii = static_cast<std::ptrdiff_t>(i);
      const bool local_max = f[i] > at(ii - 1) && f[i] >= at(ii + 1);
      if (!local_max || f[i] < 0.9 * fm) continue;
      // Separated from the main crest by a dip below 90%?
      const std::size_t a = std::min(i, im), b = std::max(i, im);
      double dip = fm;
      for (std::size_t k = a; k <= b; ++k) dip = std::min(dip, f[k]);
      if (dip < 0.9 * f[i]) fail(ErrorKind::invalid_argument, "peak ambiguity: two maxima within 10% of each other");
    }
  }
  PeakLocation out{x[im], fm, im};
  const bool interior = im > 0 && im + 1 < n;
  if (!interior && !periodic) return out;
  const auto ii = static_cast<std::ptrdiff_t>(im);
  const double fl = at(ii - 1), fr = at(ii + 1);
  const double denom = fl - 2.0 * fm + fr;
  const double h = n > 1 ? (interior ? 0.5 * (x[im + 1] - x[im - 1]) : (im == 0 ? x[1] - x[0] : x[n - 1] - x[n - 2])) : 0.0;
  if (denom < 0.0) {
    const double s = 0.5 * (fl - fr) / denom;
    out.x = x[im] + s * h;
    out.value = fm - 0.25 * (fl - fr) * s;
  }
  return out;
}

struct PeakSpeed {
  double speed = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the position fit
  std::vector<double> positions;
};

/// Least-squares line through the tracked peak positions. Positions are
/// unwrapped across the periodic boundary when `period` > 0.
inline PeakSpeed track_peak_speed(std::span<const double> times, const std::vector<std::vector<double>>& snapshots,
                                  std::span<const double> x, double period = 0.0) {
  require(times.size() == snapshots.size() && times.size() >= 3, ErrorKind::invalid_argument,
          "track_peak_speed needs >= 3 snapshots with matching times");
  PeakSpeed out;
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    double pos = locate_peak(x, snapshots[k], period > 0.0).x;
    if (period > 0.0 && k > 0) {
      const double prev = out.positions.back();
      pos += period * std::round((prev - pos) / period);
    }
    out.positions.push_back(pos);
  }
  const double n = static_cast<double>(times.size());
  double st = 0, sx = 0, stt = 0, stx = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    st += times[k];
    sx += out.positions[k];
    stt += times[k] * times[k];
    stx += times[k] * out.positions[k];
  }
  const double den = n * stt - st * st;
  require(den > 0.0, ErrorKind::invalid_argument, "track_peak_speed: snapshot times must differ");
  out.speed = (n * stx - st * sx) / den;
  out.intercept = (sx - out.speed * st) / n;
  double ss = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double r = out.positions[k] - (out.intercept + out.speed * times[k]);
    ss += r * r;
  }
  out.residual = std::sqrt(ss / n);
  return out;
}

/// Linear interpolation of (xs, f) at x; xs increasing; clamps to the ends.
inline double interpolate_linear(std::span<const double> xs, std::span<const double> f, double x) {
  require(xs.size() == f.size() && !xs.empty(), ErrorKind::invalid_argument, "interpolate_linear: size mismatch");
  if (x <= xs.front()) return f.front();
  if (x >= xs.back()) return f.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return f[k - 1] + t * (f[k] - f[k - 1]);
}

struct FieldComparison {
  double linf = 0.0;
  double l2 = 0.0;          // sqrt(mean of squared differences)
  double amplitude = 0.0;   // max |a| on the comparison points
  double rel_linf = 0.0;    // linf / amplitude
  double rel_l2 = 0.0;      // ||a - b||_2 / ||a||_2
  std::size_t points = 0;
};

/// Compares a and b on the finer of the two grids, restricted to the overlap
/// of their x-ranges (optionally clipped to [x_lo, x_hi]).
inline FieldComparison compare_fields(std::span<const double> xa, std::span<const double> a,
                                      std::span<const double> xb, std::span<const double> b,
                                      double x_lo = -INFINITY, double x_hi = INFINITY) {
  require(xa.size() == a.size() && xb.size() == b.size() && a.size() >= 2 && b.size() >= 2,
          ErrorKind::invalid_argument, "compare_fields: size mismatch");
  const double lo = std::max({xa.front(), xb.front(), x_lo});
  const double hi = std::min({xa.back(), xb.back(), x_hi});
  require(lo <= hi, ErrorKind::invalid_argument, "compare_fields: disjoint domains");
  const bool a_finer = (xa.back() - xa.front()) / static_cast<double>(xa.size() - 1) <=
                       (xb.back() - xb.front()) / static_cast<double>(xb.size() - 1);
  const auto xs = a_finer ? xa : xb;
  FieldComparison out;
  double sd = 0.0, sa = 0.0;
  for (double x : xs) {
    if (x < lo || x > hi) continue;
    const double va = interpolate_linear(xa, a, x);
    const double vb = interpolate_linear(xb, b, x);
    const double d = std::abs(va - vb);
    out.linf = std::max(out.linf, d);
    out.amplitude = std::max(out.amplitude, std::abs(va));
    sd += d * d;
    sa += va * va;
    ++out.points;
  }
  require(out.points > 0, ErrorKind::invalid_argument, "compare_fields: no grid points in the overlap");
  out.l2 = std::sqrt(sd / static_cast<double>(out.points));
  out.rel_linf = out.amplitude > 0.0 ? out.linf / out.amplitude : 0.0;
  out.rel_l2 = sa > 0.0 ? std::sqrt(sd / sa) : 0.0;
  return out;
}

/// Pearson correlation of two equally long sequences.
inline double correlation(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, ErrorKind::invalid_argument, "correlation: size mismatch");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return (saa > 0 && sbb > 0) ? sab / std::sqrt(saa * sbb) : 0.0;
}

/// ||a - b||_2 / ||b||_2.
inline double relative_l2(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && !a.empty(), ErrorKind::invalid_argument, "relative_l2: size mismatch");
  double sd = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sd += (a[i] - b[i]) * (a[i] - b[i]);
    sb += b[i] * b[i];
  }
  return sb > 0 ? std::sqrt(sd / sb) : std::sqrt(sd);
}

}  // namespace swhomog
