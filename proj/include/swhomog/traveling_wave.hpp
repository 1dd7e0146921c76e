#pragma once

// Solitary traveling waves of the homogenized system. With xi = x - V t the
// traveling-wave reduction is the Newtonian system q'' = -U'(q) with
//
//   U(q) = (a2 q^3/6 - V q^2/2 - (a1/a2) q - (a1 V/a2^2) log(1 - a2 q/V)) / (mu~ V)
//
// and eta = q / (V - a2 q). Solitary waves are homoclinic orbits of the saddle
// at q = 0 on the energy level 1/2 q'^2 + U(q) = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "swhomog/bathymetry.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/homogenized1d.hpp"
#include "swhomog/spectral.hpp"

namespace swhomog {

struct TravelingWaveParams {
  double V = 10.0 / 3.0;
  double a1 = kGravity;  // g <H>
  double a2 = 1.0;       // delta / <H>
  double mu_tilde = 3.0 / 256.0;  // delta^2 mu / <H>

  static TravelingWaveParams from(const EffectiveCoefficients& c, double V) {
    return {V, c.g * c.mean_H, c.nonlinear_coeff(), c.helmholtz_coeff()};
  }

  void validate() const {
    require(std::isfinite(V) && V > 0.0, ErrorKind::invalid_argument, "traveling wave speed V must be positive");
    require(a1 > 0.0 && a2 > 0.0 && mu_tilde > 0.0, ErrorKind::invalid_argument,
            "traveling wave parameters need a1, a2, mu_tilde > 0");
  }
  /// q must stay below this for the log term to be defined.
  double q_limit() const { return V / a2; }
};

inline double potential_U(double q, const TravelingWaveParams& p) {
  require(p.a2 * q < p.V, ErrorKind::domain, "potential_U: q >= V/a2 is outside the domain");
  const double poly = p.a2 * q * q * q / 6.0 - p.V * q * q / 2.0 - (p.a1 / p.a2) * q;
  const double lg = -(p.a1 * p.V / (p.a2 * p.a2)) * std::log1p(-p.a2 * q / p.V);
  return (poly + lg) / (p.mu_tilde * p.V);
}

/// U'(q) = (a2 q^2/2 - V q + a1 q/(V - a2 q)) / (mu~ V).
inline double potential_dU(double q, const TravelingWaveParams& p) {
  require(p.a2 * q < p.V, ErrorKind::domain, "potential_dU: q >= V/a2 is outside the domain");
  return (0.5 * p.a2 * q * q - p.V * q + p.a1 * q / (p.V - p.a2 * q)) / (p.mu_tilde * p.V);
}

inline double potential_d2U(double q, const TravelingWaveParams& p) {
  require(p.a2 * q < p.V, ErrorKind::domain, "potential_d2U: q >= V/a2 is outside the domain");
  const double d = p.V - p.a2 * q;
  return (p.a2 * q - p.V + p.a1 * p.V / (d * d)) / (p.mu_tilde * p.V);
}

enum class EquilibriumType { saddle, center, degenerate };

inline std::string to_string(EquilibriumType t) {
  switch (t) {
    case EquilibriumType::saddle: return "saddle";
    case EquilibriumType::center: return "center";
    case EquilibriumType::degenerate: return "degenerate";
  }
  return "?";
}

struct Equilibrium {
  double q = 0.0;
  EquilibriumType type = EquilibriumType::degenerate;
};

inline EquilibriumType classify(double q, const TravelingWaveParams& p) {
  const double u2 = potential_d2U(q, p);
  if (u2 < 0.0) return EquilibriumType::saddle;
  if (u2 > 0.0) return EquilibriumType::center;
  return EquilibriumType::degenerate;
}

namespace detail {

template <class F>
double bracketed_root(F&& f, double lo, double hi, const char* what) {
  std::uintmax_t iters = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  try {
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
    require(iters < 200, ErrorKind::non_convergence, std::string(what) + ": root finder did not converge");
    return 0.5 * (a + b);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::non_convergence, std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

/// Equilibria of q'' = -U'(q) on (-inf, V/a2), sorted by q. The origin is
/// always included; the remaining roots of U'(q)/q are found by scanning for
/// sign changes and refining each bracket.
inline std::vector<Equilibrium> find_equilibria(const TravelingWaveParams& p) {
  p.validate();
  // U'(q) = q f(q) / (mu~ V).
  auto f = [&](double q) { return 0.5 * p.a2 * q - p.V + p.a1 / (p.V - p.a2 * q); };
  const double qmax = p.q_limit();
  const double qmin = -10.0 * (p.V + p.a1 / p.V) / p.a2;
  std::vector<double> nodes;
  constexpr int kUniform = 4000;
  for (int i = 0; i <= kUniform; ++i) nodes.push_back(qmin + (0.0 - qmin) * i / kUniform);
  // Geometric refinement toward the singular end at V/a2.
  for (int i = 1; i <= kUniform; ++i) nodes.push_back(qmax * (1.0 - std::pow(1e-12, static_cast<double>(i) / kUniform)));

  std::vector<Equilibrium> out{{0.0, classify(0.0, p)}};
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i], b = nodes[i + 1];
    const double fa = f(a), fb = f(b);
    if (fa == 0.0) {
      if (std::abs(a) > 0.0) out.push_back({a, classify(a, p)});
      continue;
    }
    if (fa * fb < 0.0) {
      const double r = detail::bracketed_root(f, a, b, "find_equilibria");
      if (std::abs(r) > 1e-14 * qmax) out.push_back({r, classify(r, p)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Equilibrium& x, const Equilibrium& y) { return x.q < y.q; });
  return out;
}

inline bool has_homoclinic(const TravelingWaveParams& p) {
  p.validate();
  return classify(0.0, p) == EquilibriumType::saddle;
}

/// Positive equilibrium (the centre the homoclinic loop surrounds).
inline double center_equilibrium(const TravelingWaveParams& p) {
  require(has_homoclinic(p), ErrorKind::domain,
          "no solitary wave: V must exceed sqrt(a1) (V = " + std::to_string(p.V) + ")");
  for (const auto& e : find_equilibria(p))
    if (e.q > 0.0 && e.type == EquilibriumType::center) return e.q;
  fail(ErrorKind::non_convergence, "no positive centre equilibrium found");
}

/// Turning point of the homoclinic orbit: the root of U beyond the centre.
inline double nonzero_root_U(const TravelingWaveParams& p) {
  const double qc = center_equilibrium(p);
  double hi = qc;
  const double qmax = p.q_limit();
  // U -> +inf at V/a2; walk toward it until U changes sign.
  for (int k = 1; k <= 200 && potential_U(hi, p) <= 0.0; ++k) hi = qmax - (qmax - qc) * std::pow(0.5, k);
  require(potential_U(hi, p) > 0.0, ErrorKind::non_convergence, "could not bracket the turning point of U");
  return detail::bracketed_root([&](double q) { return potential_U(q, p); }, qc, hi, "nonzero_root_U");
}

struct HomoclinicOptions {
  double epsilon = 1e-8;  // start offset relative to the centre equilibrium
  double rtol = 1e-12;
  double atol = 1e-14;    // relative to the centre equilibrium scale
  std::size_t max_steps = 2'000'000;
  std::size_t samples = 4001;  // uniform xi samples of the output profile (odd: node at the peak)
};

struct TravelingWaveSolution {
  TravelingWaveParams params;
  std::vector<double> xi;
  std::vector<double> q;
  std::vector<double> eta;
  double V = 0.0;
  double q_peak = 0.0;
  double amplitude = 0.0;  // eta at the crest
  double alpha = 0.0;      // fitted sech^2 width parameter
  double fit_residual = 0.0;
  double energy_drift = 0.0;  // max |1/2 q'^2 + U(q)| along the computed orbit
  double lambda = 0.0;        // unstable eigenvalue at the saddle
  std::size_t steps = 0;

  // Rising branch (xi <= 0, crest at xi = 0) with exact slopes for Hermite
  // interpolation; the falling branch is its mirror image.
  std::vector<double> branch_xi, branch_q, branch_dq;

  double q_at(double x) const {
    const double s = -std::abs(x);
    const double s0 = branch_xi.front();
    if (s <= s0) return branch_q.front() * std::exp(lambda * (s - s0));
    const auto it = std::upper_bound(branch_xi.begin(), branch_xi.end(), s);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - branch_xi.begin()), branch_xi.size() - 1);
    const std::size_t i = k - 1;
    const double h = branch_xi[k] - branch_xi[i];
    const double t = (s - branch_xi[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * branch_q[i] + (t3 - 2 * t2 + t) * h * branch_dq[i] +
           (-2 * t3 + 3 * t2) * branch_q[k] + (t3 - t2) * h * branch_dq[k];
  }

  double eta_at(double x) const {
    const double qq = q_at(x);
    return qq / (params.V - params.a2 * qq);
  }
};

struct Sech2Fit {
  double A = 0.0;
  double alpha = 0.0;
  double center = 0.0;
  double residual = 0.0;  // max |eta - A sech^2(alpha sqrt(A)(xi - c))| / A
  std::size_t points_used = 0;
};

namespace detail {

inline double log_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

inline double sech2(double z) {
  const double c = std::cosh(z);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

}  // namespace detail

/// Least-squares sech^2 fit of a single-peaked profile. A is the crest value
/// (three-point parabolic interpolation), alpha and the centre minimise the
/// misfit of log(eta/A) against -2 log cosh(alpha sqrt(A)(xi - c)) over the
/// core eta >= core_fraction * A.
inline Sech2Fit fit_sech2(std::span<const double> xi, std::span<const double> eta, double core_fraction = 0.1) {
  const std::size_t n = xi.size();
  require(n == eta.size() && n >= 5, ErrorKind::invalid_argument, "fit_sech2 needs matching xi/eta with >= 5 samples");
  require(core_fraction > 0.0 && core_fraction < 1.0, ErrorKind::invalid_argument, "core_fraction must lie in (0, 1)");
  for (std::size_t i = 1; i < n; ++i)
    require(xi[i] > xi[i - 1], ErrorKind::invalid_argument, "fit_sech2: xi must increase");
  const std::size_t im = static_cast<std::size_t>(std::max_element(eta.begin(), eta.end()) - eta.begin());
  const double emax = eta[im];
  require(emax > 0.0, ErrorKind::invalid_argument, "fit_sech2: profile has no positive crest");
  require(im > 0 && im + 1 < n, ErrorKind::invalid_argument, "fit_sech2: crest lies on the boundary");
  std::size_t peaks = 0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (eta[i] > eta[i - 1] && eta[i] >= eta[i + 1] && eta[i] > 0.1 * emax) ++peaks;
  require(peaks == 1, ErrorKind::invalid_argument,
          "fit_sech2: expected a single peak, found " + std::to_string(peaks));

  // Parabola through the three samples around the maximum.
  const double x0 = xi[im - 1], x1 = xi[im], x2 = xi[im + 1];
  const double y0 = eta[im - 1], y1 = eta[im], y2 = eta[im + 1];
  const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  double c = x1, A = y1;
  if (curv < 0.0) {
    const double slope_at_x1 = d01 + curv * (x1 - x0);
    c = x1 - slope_at_x1 / (2.0 * curv);
    A = y1 + slope_at_x1 * (c - x1) + curv * (c - x1) * (c - x1);
  }
  const double sqA = std::sqrt(A);

  // Core: contiguous run around the crest above the threshold.
  std::size_t lo = im, hi = im;
  while (lo > 0 && eta[lo - 1] >= core_fraction * A) --lo;
  while (hi + 1 < n && eta[hi + 1] >= core_fraction * A) ++hi;
  require(hi - lo + 1 >= 3, ErrorKind::invalid_argument, "fit_sech2: too few samples in the profile core");

  // Initial alpha from the half width.
  auto crossing = [&](std::size_t from, int dir) {
    std::size_t i = from;
    while (true) {
      const std::size_t j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + dir);
      if (j >= n) return xi[i];
      if (eta[j] < 0.5 * A) {
        const double t = (eta[i] - 0.5 * A) / (eta[i] - eta[j]);
        return xi[i] + t * (xi[j] - xi[i]);
      }
      i = j;
    }
  };
  const double half_width = 0.5 * (crossing(im, 1) - crossing(im, -1));
  double alpha = std::acosh(std::sqrt(2.0)) / (sqA * half_width);

  for (int iter = 0; iter < 100; ++iter) {
    double jaa = 0, jac = 0, jcc = 0, ga = 0, gc = 0;
    for (std::size_t i = lo; i <= hi; ++i) {
      const double s = sqA * (xi[i] - c);
      const double z = alpha * s;
      const double r = std::log(eta[i] / A) + 2.0 * detail::log_cosh(z);
      const double th = std::tanh(z);
      const double da = 2.0 * th * s;
      const double dc = -2.0 * th * alpha * sqA;
      jaa += da * da;
      jac += da * dc;
      jcc += dc * dc;
      ga += da * r;
      gc += dc * r;
    }
    const double det = jaa * jcc - jac * jac;
    if (!(std::abs(det) > 0.0)) break;
    const double step_a = (jcc * ga - jac * gc) / det;
    const double step_c = (jaa * gc - jac * ga) / det;
    alpha -= step_a;
    c -= step_c;
    require(std::isfinite(alpha) && alpha > 0.0, ErrorKind::non_convergence, "fit_sech2: Gauss-Newton diverged");
    if (std::abs(step_a) < 1e-15 * alpha && std::abs(step_c) < 1e-15 * (1.0 + std::abs(c))) break;
  }

  Sech2Fit fit{A, alpha, c, 0.0, hi - lo + 1};
  for (std::size_t i = 0; i < n; ++i)
    fit.residual = std::max(fit.residual, std::abs(eta[i] - A * detail::sech2(alpha * sqA * (xi[i] - c))));
  fit.residual /= A;
  return fit;
}

/// Integrates q'' = -U'(q) from the unstable manifold of the saddle with
/// step-doubling adaptive RK4, locates the crest, mirrors the rising branch
/// and samples the profile on a uniform xi grid.
inline TravelingWaveSolution integrate_homoclinic(const TravelingWaveParams& p, const HomoclinicOptions& opt = {}) {
  p.validate();
  require(opt.epsilon > 0.0 && opt.epsilon < 1e-2, ErrorKind::invalid_argument, "epsilon must lie in (0, 1e-2)");
  require(opt.samples >= 5, ErrorKind::invalid_argument, "need at least 5 output samples");
  const double qc = center_equilibrium(p);
  const double lambda = std::sqrt((p.V * p.V - p.a1) / (p.mu_tilde * p.V * p.V));

  using Y = std::array<double, 2>;
  auto deriv = [&](const Y& y) -> Y {
    require(p.a2 * y[0] < p.V, ErrorKind::domain, "homoclinic orbit escaped to q >= V/a2");
    return {y[1], -potential_dU(y[0], p)};
  };
  auto rk4 = [&](const Y& y, double h) -> Y {
    const Y k1 = deriv(y);
    const Y k2 = deriv({y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const Y k3 = deriv({y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const Y k4 = deriv({y[0] + h * k3[0], y[1] + h * k3[1]});
    return {y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
  };
  auto energy = [&](const Y& y) { return 0.5 * y[1] * y[1] + potential_U(y[0], p); };

  const double q0 = opt.epsilon * qc;
  Y y{q0, lambda * q0};
  double x = 0.0;
  double h = 0.01 / lambda;
  const double pscale = lambda * qc;

  TravelingWaveSolution sol;
  sol.params = p;
  sol.V = p.V;
  sol.lambda = lambda;
  std::vector<double> xs{x}, qs{y[0]}, ps{y[1]};
  double drift = std::abs(energy(y));
  bool past_peak = false;
  double x_peak = 0.0, q_peak = 0.0;
  std::size_t peak_index = 0;

  std::size_t steps = 0;
  while (true) {
    require(++steps <= opt.max_steps, ErrorKind::non_convergence, "homoclinic integration exceeded the step cap");
    Y full, half2;
    try {
      full = rk4(y, h);
      half2 = rk4(rk4(y, 0.5 * h), 0.5 * h);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::domain || h < 1e-14 / lambda) throw;
      h *= 0.25;
      continue;
    }
    const double err = std::max(std::abs(half2[0] - full[0]) / (opt.atol * qc + opt.rtol * std::abs(half2[0])),
                                std::abs(half2[1] - full[1]) / (opt.atol * pscale + opt.rtol * std::abs(half2[1]))) /
                       15.0;
    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }
    const Y prev = y;
    const double x_prev = x;
    y = half2;
    x += h;
    drift = std::max(drift, std::abs(energy(y)));
    xs.push_back(x);
    qs.push_back(y[0]);
    ps.push_back(y[1]);

    if (!past_peak && y[1] <= 0.0) {
      // Crest: zero of the cubic Hermite interpolant of q' over the step.
      const double fp0 = -potential_dU(prev[0], p), fp1 = -potential_dU(y[0], p);
      const double hh = x - x_prev;
      auto dq = [&](double s) {
        const double t = s / hh, t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * prev[1] + (t3 - 2 * t2 + t) * hh * fp0 + (-2 * t3 + 3 * t2) * y[1] +
               (t3 - t2) * hh * fp1;
      };
      const double s = (y[1] == 0.0) ? hh : detail::bracketed_root(dq, 0.0, hh, "crest location");
      const double t = s / hh, t2 = t * t, t3 = t2 * t;
      q_peak = (2 * t3 - 3 * t2 + 1) * prev[0] + (t3 - 2 * t2 + t) * hh * prev[1] + (-2 * t3 + 3 * t2) * y[0] +
               (t3 - t2) * hh * y[1];
      x_peak = x_prev + s;
      peak_index = xs.size() - 2;  // last node strictly before the crest
      past_peak = true;
    }
    if (past_peak && y[0] < opt.epsilon * q_peak) break;
    h *= std::min(4.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
  }

  sol.steps = steps;
  sol.energy_drift = drift;
  sol.q_peak = q_peak;
  for (std::size_t i = 0; i <= peak_index; ++i) {
    sol.branch_xi.push_back(xs[i] - x_peak);
    sol.branch_q.push_back(qs[i]);
    sol.branch_dq.push_back(ps[i]);
  }
  if (sol.branch_xi.back() < 0.0) {
    sol.branch_xi.push_back(0.0);
    sol.branch_q.push_back(q_peak);
    sol.branch_dq.push_back(0.0);
  } else {
    sol.branch_q.back() = q_peak;
    sol.branch_dq.back() = 0.0;
  }

  const double L = -sol.branch_xi.front();
  sol.xi.resize(opt.samples);
  sol.q.resize(opt.samples);
  sol.eta.resize(opt.samples);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const double xv = -L + 2.0 * L * static_cast<double>(i) / static_cast<double>(opt.samples - 1);
    sol.xi[i] = xv;
    sol.q[i] = sol.q_at(xv);
    sol.eta[i] = sol.q[i] / (p.V - p.a2 * sol.q[i]);
  }
  sol.amplitude = q_peak / (p.V - p.a2 * q_peak);
  const Sech2Fit fit = fit_sech2(sol.xi, sol.eta);
  sol.alpha = fit.alpha;
  sol.fit_residual = fit.residual;
  return sol;
}

/// Homogenized initial data (eta_bar, q_bar) = wave profile centred at x0,
/// using the nearest periodic image.
inline State1D traveling_wave_state(const PeriodicGrid1D& grid, const TravelingWaveSolution& w, double x0) {
  State1D s = zero_state(grid);
  const double L = grid.length();
  for (std::size_t i = 0; i < grid.n(); ++i) {
    double d = grid.x(i) - x0;
    d -= L * std::round(d / L);
    s.q_bar[i] = w.q_at(d);
    s.eta_bar[i] = w.eta_at(d);
  }
  return s;
}

}  // namespace swhomog
