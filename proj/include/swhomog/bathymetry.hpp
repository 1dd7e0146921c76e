#pragma once

// y-periodic bathymetry profiles and the period-averaging functionals built on
// them: the mean <f>, the fluctuation integral [[f]] (zero-mean antiderivative
// of f - <f>) and the effective coefficients <H>, mu of the averaged system.
//
// Piecewise-constant profiles are handled exactly with piecewise polynomials;
// smooth and tabulated profiles use uniform samples with spectral
// antiderivatives and trapezoidal means.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "swhomog/errors.hpp"
#include "swhomog/fft.hpp"

namespace swhomog {

inline constexpr double kGravity = 9.81;
inline constexpr std::size_t kDefaultQuadraturePoints = 4096;

/// Reduces y into [start, start + period).
inline double wrap_periodic(double y, double start, double period) {
  double t = std::fmod(y - start, period);
  if (t < 0.0) t += period;
  if (t >= period) t = 0.0;
  return start + t;
}

// ---------------------------------------------------------------------------
// Exact piecewise polynomials on one period.

class PiecewisePolynomial {
 public:
  struct Piece {
    double left;
    double right;
    std::vector<double> coeffs;  // p(y) = sum_k coeffs[k] * (y - left)^k
  };

  PiecewisePolynomial(double start, double period, std::vector<Piece> pieces)
      : start_(start), period_(period), pieces_(std::move(pieces)) {
    require(period > 0.0 && !pieces_.empty(), ErrorKind::invalid_argument, "PiecewisePolynomial: empty");
    require(std::abs(pieces_.front().left - start) < 1e-14 * period &&
                std::abs(pieces_.back().right - (start + period)) < 1e-14 * period,
            ErrorKind::invalid_argument, "PiecewisePolynomial: pieces must cover one period");
  }

  /// Piecewise constant with values[i] on [breaks[i], breaks[i+1]); the last
  /// piece ends at breaks[0] + period.
  static PiecewisePolynomial piecewise_constant(std::span<const double> breaks, std::span<const double> values,
                                                double period) {
    require(!breaks.empty() && breaks.size() == values.size(), ErrorKind::invalid_argument,
            "piecewise_constant: breaks/values mismatch");
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
      const double right = (i + 1 < breaks.size()) ? breaks[i + 1] : breaks[0] + period;
      require(right > breaks[i], ErrorKind::invalid_argument, "piecewise_constant: breaks must increase");
      pieces.push_back({breaks[i], right, {values[i]}});
    }
    return PiecewisePolynomial(breaks[0], period, std::move(pieces));
  }

  double start() const noexcept { return start_; }
  double period() const noexcept { return period_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  double operator()(double y) const {
    const double w = wrap_periodic(y, start_, period_);
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), w,
                               [](double v, const Piece& p) { return v < p.right; });
    if (it == pieces_.end()) it = std::prev(pieces_.end());
    return horner(it->coeffs, w - it->left);
  }

  double mean() const {
    double total = 0.0;
    for (const auto& p : pieces_) total += integrate_local(p.coeffs, p.right - p.left);
    return total / period_;
  }

  PiecewisePolynomial fluct_integral() const {
    const double m = mean();
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    double running = 0.0;
    for (const auto& p : pieces_) {
      std::vector<double> c(p.coeffs.size() + 1, 0.0);
      c[0] = running;
      for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        const double a = p.coeffs[k] - (k == 0 ? m : 0.0);
        c[k + 1] = a / static_cast<double>(k + 1);
      }
      running = horner(c, p.right - p.left);
      out.push_back({p.left, p.right, std::move(c)});
    }
    PiecewisePolynomial result(start_, period_, std::move(out));
    const double shift = result.mean();
    for (auto& p : result.pieces_) p.coeffs[0] -= shift;
    return result;
  }

  PiecewisePolynomial operator*(const PiecewisePolynomial& other) const {
    check_compatible(other);
    std::vector<Piece> out;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& a = pieces_[i].coeffs;
      const auto& b = other.pieces_[i].coeffs;
      std::vector<double> c(a.size() + b.size() - 1, 0.0);
      for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t s = 0; s < b.size(); ++s) c[r + s] += a[r] * b[s];
      out.push_back({pieces_[i].left, pieces_[i].right, std::move(c)});
    }
    return PiecewisePolynomial(start_, period_, std::move(out));
  }

  /// Pointwise reciprocal; only defined for piecewise-constant functions.
  PiecewisePolynomial reciprocal() const {
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
      for (std::size_t k = 1; k < p.coeffs.size(); ++k)
        require(p.coeffs[k] == 0.0, ErrorKind::unsupported, "reciprocal of a non-constant polynomial piece");
      require(p.coeffs[0] != 0.0, ErrorKind::domain, "reciprocal of zero");
      out.push_back({p.left, p.right, {1.0 / p.coeffs[0]}});
    }
    return PiecewisePolynomial(start_, period_, std::move(out));
  }

  double min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
      // Constant pieces are exact; higher degrees are sampled densely.
      const std::size_t samples = p.coeffs.size() <= 1 ? 1 : 64;
      for (std::size_t s = 0; s <= samples; ++s) {
        const double t = (p.right - p.left) * static_cast<double>(s) / static_cast<double>(samples);
        m = std::min(m, horner(p.coeffs, t));
      }
    }
    return m;
  }

 private:
  static double horner(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
  }

  static double integrate_local(const std::vector<double>& c, double width) {
    double total = 0.0;
    double pw = width;
    for (std::size_t k = 0; k < c.size(); ++k) {
      total += c[k] * pw / static_cast<double>(k + 1);
      pw *= width;
    }
    return total;
  }

  void check_compatible(const PiecewisePolynomial& other) const {
    bool ok = pieces_.size() == other.pieces_.size() && period_ == other.period_;
    for (std::size_t i = 0; ok && i < pieces_.size(); ++i)
      ok = pieces_[i].left == other.pieces_[i].left && pieces_[i].right == other.pieces_[i].right;
    require(ok, ErrorKind::invalid_argument, "piecewise polynomials have different breakpoints");
  }

  double start_;
  double period_;
  std::vector<Piece> pieces_;
};

// ---------------------------------------------------------------------------
// Uniform periodic samples with spectral calculus.

class SpectralTable {
 public:
  SpectralTable(double start, double period, std::vector<double> samples)
      : start_(start), period_(period), values_(std::move(samples)) {
    require(!values_.empty(), ErrorKind::invalid_argument, "SpectralTable: empty sample set");
    require(values_.size() % 2 == 0 && values_.size() >= 4, ErrorKind::invalid_argument,
            "SpectralTable: sample count must be even and >= 4");
    require(period > 0.0, ErrorKind::invalid_argument, "SpectralTable: period must be positive");
  }

  template <class F>
  static SpectralTable sample(F&& f, double start, double period, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(start + period * static_cast<double>(i) / static_cast<double>(n));
    return SpectralTable(start, period, std::move(v));
  }

  double start() const noexcept { return start_; }
  double period() const noexcept { return period_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double node(std::size_t i) const noexcept {
    return start_ + period_ * static_cast<double>(i) / static_cast<double>(values_.size());
  }

  /// Periodic trapezoidal rule (spectrally accurate for smooth data).
  double mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }

  SpectralTable fluct_integral() const {
    const std::size_t n = values_.size();
    RealFft fft(n);
    auto spec = fft.forward(values_);
    spec[0] = 0.0;
    spec[n / 2] = 0.0;
    for (std::size_t j = 1; j < n / 2; ++j)
      spec[j] /= std::complex<double>(0.0, 2.0 * std::numbers::pi * static_cast<double>(j) / period_);
    return SpectralTable(start_, period_, fft.inverse(spec));
  }

  SpectralTable operator*(const SpectralTable& other) const {
    require(other.values_.size() == values_.size() && other.period_ == period_ && other.start_ == start_,
            ErrorKind::invalid_argument, "spectral tables on different grids");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * other.values_[i];
    return SpectralTable(start_, period_, std::move(v));
  }

  SpectralTable reciprocal() const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      require(values_[i] != 0.0, ErrorKind::domain, "reciprocal of zero sample");
      v[i] = 1.0 / values_[i];
    }
    return SpectralTable(start_, period_, std::move(v));
  }

  /// Trigonometric interpolant; reproduces the samples at the nodes.
  double operator()(double y) const {
    ensure_spectrum();
    const std::size_t n = values_.size();
    const double theta = 2.0 * std::numbers::pi * (y - start_) / period_;
    const auto& s = *spectrum_;
    double acc = s[0].real();
    for (std::size_t j = 1; j < n / 2; ++j) {
      const double a = theta * static_cast<double>(j);
      acc += 2.0 * (s[j].real() * std::cos(a) - s[j].imag() * std::sin(a));
    }
    acc += s[n / 2].real() * std::cos(theta * static_cast<double>(n / 2));
    return acc / static_cast<double>(n);
  }

  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }

 private:
  void ensure_spectrum() const {
    if (!spectrum_) {
      RealFft fft(values_.size());
      spectrum_ = std::make_shared<const std::vector<std::complex<double>>>(fft.forward(values_));
    }
  }

  double start_;
  double period_;
  std::vector<double> values_;
  // Lazily built; SpectralTable values are otherwise immutable.
  mutable std::shared_ptr<const std::vector<std::complex<double>>> spectrum_;
};

// ---------------------------------------------------------------------------

/// A periodic function of y in one of the two exact-enough representations.
class PeriodicFunction {
 public:
  using Repr = std::variant<PiecewisePolynomial, SpectralTable>;

  PeriodicFunction(PiecewisePolynomial p) : repr_(std::move(p)) {}
  PeriodicFunction(SpectralTable t) : repr_(std::move(t)) {}

  const Repr& repr() const noexcept { return repr_; }
  bool is_piecewise() const noexcept { return std::holds_alternative<PiecewisePolynomial>(repr_); }

  double operator()(double y) const {
    return std::visit([y](const auto& f) { return f(y); }, repr_);
  }
  double mean() const {
    return std::visit([](const auto& f) { return f.mean(); }, repr_);
  }
  PeriodicFunction fluct_integral() const {
    return std::visit([](const auto& f) { return PeriodicFunction(f.fluct_integral()); }, repr_);
  }
  PeriodicFunction reciprocal() const {
    return std::visit([](const auto& f) { return PeriodicFunction(f.reciprocal()); }, repr_);
  }
  double min_value() const {
    return std::visit([](const auto& f) { return f.min_value(); }, repr_);
  }
  double period() const {
    return std::visit([](const auto& f) { return f.period(); }, repr_);
  }

  friend PeriodicFunction operator*(const PeriodicFunction& a, const PeriodicFunction& b) {
    return std::visit(
        [](const auto& x, const auto& y) -> PeriodicFunction {
          using X = std::decay_t<decltype(x)>;
          using Y = std::decay_t<decltype(y)>;
          if constexpr (std::is_same_v<X, Y>) {
            return PeriodicFunction(x * y);
          } else {
            fail(ErrorKind::invalid_argument, "cannot multiply periodic functions of different representation");
          }
        },
        a.repr_, b.repr_);
  }

  std::vector<double> tabulate(std::span<const double> ys) const {
    std::vector<double> out(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) out[i] = (*this)(ys[i]);
    return out;
  }

 private:
  Repr repr_;
};

/// Period mean of uniform periodic samples.
inline double mean(std::span<const double> samples) {
  require(!samples.empty(), ErrorKind::invalid_argument, "mean: empty sample set");
  double s = 0.0;
  for (double v : samples) s += v;
  return s / static_cast<double>(samples.size());
}

inline double mean(const PeriodicFunction& f) { return f.mean(); }
inline PeriodicFunction fluct_integral(const PeriodicFunction& f) { return f.fluct_integral(); }

// ---------------------------------------------------------------------------

struct PiecewiseConstantBottom {
  /// (y_break, b) pairs, increasing in y_break; b(y) = b_i on [y_i, y_{i+1}).
  std::vector<std::pair<double, double>> levels;
};

struct SinusoidalBottom {
  double b0 = -1.0;
  double amplitude = 0.0;
  double phase = 0.0;  // b = b0 + amplitude * sin(2 pi y / period + phase)
};

struct TabulatedBottom {
  double y0 = 0.0;              // first sample location
  std::vector<double> samples;  // b on a uniform grid covering one period
};

class BathymetryProfile {
 public:
  using Kind = std::variant<PiecewiseConstantBottom, SinusoidalBottom, TabulatedBottom>;

  BathymetryProfile(Kind kind, double period = 1.0, double eta0 = 0.0)
      : kind_(std::move(kind)), period_(period), eta0_(eta0) {
    require(period > 0.0 && std::isfinite(period), ErrorKind::invalid_profile, "bathymetry period must be positive");
    if (auto* pwc = std::get_if<PiecewiseConstantBottom>(&kind_)) {
      require(!pwc->levels.empty(), ErrorKind::invalid_profile, "piecewise-constant profile needs levels");
      for (std::size_t i = 1; i < pwc->levels.size(); ++i)
        require(pwc->levels[i].first > pwc->levels[i - 1].first, ErrorKind::invalid_profile,
                "piecewise-constant breaks must increase");
      require(pwc->levels.back().first < pwc->levels.front().first + period, ErrorKind::invalid_profile,
              "piecewise-constant breaks must lie within one period");
    }
    if (auto* tab = std::get_if<TabulatedBottom>(&kind_)) {
      require(tab->samples.size() >= 4 && tab->samples.size() % 2 == 0, ErrorKind::invalid_profile,
              "tabulated profile needs an even number (>= 4) of samples");
      bottom_table_ = std::make_shared<const SpectralTable>(tab->y0, period, tab->samples);
    }
    const double min_depth = depth_function(256).min_value();
    require(min_depth > 0.0, ErrorKind::invalid_profile,
            "bathymetry has non-positive depth (min H = " + std::to_string(min_depth) + ")");
  }

  static BathymetryProfile flat(double b = -1.0, double period = 1.0, double eta0 = 0.0) {
    return BathymetryProfile(PiecewiseConstantBottom{{{-0.5 * period, b}}}, period, eta0);
  }
  static BathymetryProfile piecewise_constant(std::vector<std::pair<double, double>> levels, double period = 1.0,
                                              double eta0 = 0.0) {
    return BathymetryProfile(PiecewiseConstantBottom{std::move(levels)}, period, eta0);
  }
  static BathymetryProfile sinusoidal(double b0, double amplitude, double period = 1.0, double eta0 = 0.0,
                                      double phase = 0.0) {
    return BathymetryProfile(SinusoidalBottom{b0, amplitude, phase}, period, eta0);
  }
  static BathymetryProfile tabulated(double y0, std::vector<double> samples, double period = 1.0,
                                     double eta0 = 0.0) {
    return BathymetryProfile(TabulatedBottom{y0, std::move(samples)}, period, eta0);
  }

  /// b = -2/5 on [-1/2, 0), -8/5 on [0, 1/2).
  static BathymetryProfile pwc_setup() { return piecewise_constant({{-0.5, -0.4}, {0.0, -1.6}}); }
  /// b = -1 + 3/10 sin(2 pi y).
  static BathymetryProfile sinusoidal_setup() { return sinusoidal(-1.0, 0.3); }

  const Kind& kind() const noexcept { return kind_; }
  double period() const noexcept { return period_; }
  double eta0() const noexcept { return eta0_; }

  bool is_piecewise_constant() const noexcept { return std::holds_alternative<PiecewiseConstantBottom>(kind_); }
  bool is_flat() const {
    if (const auto* pwc = std::get_if<PiecewiseConstantBottom>(&kind_)) {
      return std::all_of(pwc->levels.begin(), pwc->levels.end(),
                         [&](const auto& l) { return l.second == pwc->levels.front().second; });
    }
    if (const auto* s = std::get_if<SinusoidalBottom>(&kind_)) return s->amplitude == 0.0;
    return false;
  }
  /// Continuously differentiable in y (flat piecewise profiles count as smooth).
  bool is_smooth() const { return !is_piecewise_constant() || is_flat(); }

  /// Left-closed convention at piecewise-constant breaks.
  double bottom(double y) const {
    require(std::isfinite(y), ErrorKind::invalid_argument, "bathymetry evaluated at non-finite y");
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PiecewiseConstantBottom>) {
            const double w = wrap_periodic(y, k.levels.front().first, period_);
            double b = k.levels.front().second;
            for (const auto& [yb, level] : k.levels)
              if (w >= yb) b = level;
            return b;
          } else if constexpr (std::is_same_v<K, SinusoidalBottom>) {
            return k.b0 + k.amplitude * std::sin(2.0 * std::numbers::pi * y / period_ + k.phase);
          } else {
            return (*bottom_table_)(y);
          }
        },
        kind_);
  }

  double depth(double y) const {
    const double h = eta0_ - bottom(y);
    require(h > 0.0, ErrorKind::invalid_profile, "non-positive depth at y = " + std::to_string(y));
    return h;
  }

  /// H as a function of the rescaled coordinate y/period (unit period).
  /// Exact piecewise polynomial for piecewise-constant bottoms, `resolution`
  /// uniform samples otherwise.
  PeriodicFunction depth_function(std::size_t resolution = kDefaultQuadraturePoints) const {
    if (!is_piecewise_constant() && is_flat()) {
      return PiecewisePolynomial::piecewise_constant(std::vector<double>{-0.5}, std::vector<double>{eta0_ - bottom(0.0)},
                                                     1.0);
    }
    if (const auto* pwc = std::get_if<PiecewiseConstantBottom>(&kind_)) {
      std::vector<double> breaks, values;
      for (const auto& [yb, b] : pwc->levels) {
        breaks.push_back(yb / period_);
        values.push_back(eta0_ - b);
      }
      return PiecewisePolynomial::piecewise_constant(breaks, values, 1.0);
    }
    if (const auto* tab = std::get_if<TabulatedBottom>(&kind_)) {
      if (resolution == tab->samples.size()) {
        std::vector<double> h(tab->samples.size());
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = eta0_ - tab->samples[i];
        return SpectralTable(tab->y0 / period_, 1.0, std::move(h));
      }
    }
    const double start = -0.5;
    return SpectralTable::sample([&](double yt) { return eta0_ - bottom(yt * period_); }, start, 1.0, resolution);
  }

 private:
  Kind kind_;
  double period_;
  double eta0_;
  std::shared_ptr<const SpectralTable> bottom_table_;
};

/// H(y) = eta0 - b(y).
inline double profile_eval(const BathymetryProfile& profile, double y) { return profile.depth(y); }

/// [[H^{-1} [[H]]]] on the unit rescaled period.
inline PeriodicFunction nested_fluct_integral(const BathymetryProfile& profile,
                                              std::size_t resolution = kDefaultQuadraturePoints) {
  const auto H = profile.depth_function(resolution);
  return (H.reciprocal() * H.fluct_integral()).fluct_integral();
}

struct ZeroMeanCheck {
  double residual;  // |<H^{-1} [[H]]>|
  bool ok;
};

inline constexpr double kZeroMeanTolerance = 1e-10;

inline ZeroMeanCheck verify_zero_mean_condition(const BathymetryProfile& profile,
                                                std::size_t resolution = kDefaultQuadraturePoints) {
  const auto H = profile.depth_function(resolution);
  const double r = std::abs((H.reciprocal() * H.fluct_integral()).mean());
  return {r, r < kZeroMeanTolerance};
}

struct DispersionCoefficient {
  double mu;            // <H^{-1} [[H]]^2>
  double mu_alternate;  // -<H [[H^{-1}[[H]]]]>
};

inline constexpr double kMuAgreementTolerance = 1e-10;

/// Evaluates both expressions for mu and insists they agree.
inline DispersionCoefficient dispersion_coefficient(const BathymetryProfile& profile,
                                                    std::size_t resolution = kDefaultQuadraturePoints) {
  const auto H = profile.depth_function(resolution);
  const auto Hinv = H.reciprocal();
  const auto brH = H.fluct_integral();
  const auto nested = (Hinv * brH).fluct_integral();
  const double mu = (Hinv * brH * brH).mean();
  const double mu_alt = -(H * nested).mean();
  const double scale = std::max(std::abs(mu), std::abs(mu_alt));
  // An absolute floor keeps flat profiles (mu == 0 up to roundoff) consistent.
  require(std::abs(mu - mu_alt) <= kMuAgreementTolerance * scale + 1e-15, ErrorKind::consistency,
          "mu formulas disagree: " + std::to_string(mu) + " vs " + std::to_string(mu_alt));
  return {mu, mu_alt};
}

inline double effective_dispersion_mu(const BathymetryProfile& profile,
                                      std::size_t resolution = kDefaultQuadraturePoints) {
  return dispersion_coefficient(profile, resolution).mu;
}

struct EffectiveCoefficients {
  double mean_H = 1.0;
  double mu = 0.0;
  double delta = 1.0;
  double g = kGravity;
  double period = 1.0;  // physical y-period; tables below use y / period
  double zero_mean_residual = 0.0;
  bool zero_mean_ok = true;
  PeriodicFunction brH = PiecewisePolynomial::piecewise_constant(std::vector<double>{0.0}, std::vector<double>{0.0}, 1.0);
  PeriodicFunction brHinvbrH = brH;

  double wave_speed() const { return std::sqrt(g * mean_H); }
  /// delta^2 mu / <H>, the coefficient of the Helmholtz operator.
  double helmholtz_coeff() const { return delta * delta * mu / mean_H; }
  /// delta / <H>, the coefficient of the quadratic terms.
  double nonlinear_coeff() const { return delta / mean_H; }

  double brH_at(double y) const { return brH(y / period); }
  double brHinvbrH_at(double y) const { return brHinvbrH(y / period); }

  /// Flat bottom of depth `depth`: no dispersion, no y-structure.
  static EffectiveCoefficients flat(double depth = 1.0, double g = kGravity) {
    EffectiveCoefficients c;
    c.mean_H = depth;
    c.g = g;
    return c;
  }
};

struct CoefficientOptions {
  double delta = 1.0;
  double g = kGravity;
  std::size_t resolution = kDefaultQuadraturePoints;
};

inline EffectiveCoefficients compute_effective_coefficients(const BathymetryProfile& profile,
                                                            const CoefficientOptions& opts = {}) {
  require(opts.delta > 0.0 && opts.g > 0.0, ErrorKind::invalid_argument, "delta and g must be positive");
  const auto H = profile.depth_function(opts.resolution);
  const auto brH = H.fluct_integral();
  const auto hinv_brh = H.reciprocal() * brH;
  EffectiveCoefficients c;
  c.mean_H = H.mean();
  c.mu = dispersion_coefficient(profile, opts.resolution).mu;
  c.delta = opts.delta;
  c.g = opts.g;
  c.period = profile.period();
  c.zero_mean_residual = std::abs(hinv_brh.mean());
  c.zero_mean_ok = c.zero_mean_residual < kZeroMeanTolerance;
  c.brH = brH;
  c.brHinvbrH = hinv_brh.fluct_integral();
  return c;
}

}  // namespace swhomog
