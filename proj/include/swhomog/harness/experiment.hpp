#pragma once

// Config-driven experiments: run the selected solvers from a common initial
// condition, reduce 2D output to y-averages, compare against the homogenized
// solution and write snapshots plus a JSON report.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swhomog/bathymetry.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/harness/config.hpp"
#include "swhomog/harness/io.hpp"
#include "swhomog/harness/metrics.hpp"
#include "swhomog/homogenized1d.hpp"
#include "swhomog/spectral.hpp"
#include "swhomog/sw2d_fv.hpp"
#include "swhomog/sw2d_spectral.hpp"
#include "swhomog/traveling_wave.hpp"

namespace swhomog {

struct SolverRun {
  SolverKind kind = SolverKind::homogenized;
  std::vector<Snapshot1D> snapshots;  // y-averaged perturbation fields at the output times
  std::size_t steps = 0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  std::optional<PeakSpeed> peak_speed;
  std::optional<Sech2Fit> leading_wave;
  std::optional<Grid2DFile> final_2d;
};

struct SnapshotComparison {
  SolverKind solver = SolverKind::spectral2d;
  double t = 0.0;
  FieldComparison metrics;
};

struct ComparisonReport {
  std::string name;
  EffectiveCoefficients coeffs;
  std::vector<SolverRun> runs;
  std::vector<SnapshotComparison> comparisons;

  const SolverRun* find(SolverKind k) const {
    for (const auto& r : runs)
      if (r.kind == k) return &r;
    return nullptr;
  }
};

/// Initial perturbation eta(x) and depth-integrated velocity q(x).
struct InitialProfile {
  std::function<double(double)> eta;
  std::function<double(double)> q;
};

inline InitialProfile make_initial_profile(const ExperimentConfig& cfg, const EffectiveCoefficients& coeffs) {
  const InitialSpec ic = cfg.initial;
  if (ic.kind == InitialKind::gaussian) {
    return {[ic](double x) {
              const double s = (x - ic.center) / ic.width;
              return ic.amplitude * std::exp(-s * s);
            },
            [](double) { return 0.0; }};
  }
  auto wave = std::make_shared<TravelingWaveSolution>(
      integrate_homoclinic(TravelingWaveParams::from(coeffs, ic.speed)));
  return {[wave, ic](double x) { return wave->eta_at(x - ic.center); },
          [wave, ic](double x) { return wave->q_at(x - ic.center); }};
}

namespace detail {

inline std::vector<double> right_of(std::span<const double> x, std::span<const double> f, double x0,
                                    std::vector<double>* xs_out) {
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= x0) {
      out.push_back(f[i]);
      if (xs_out) xs_out->push_back(x[i]);
    }
  return out;
}

/// Peak speed of the right-going pulse and a sech^2 fit of the leading wave.
inline void analyse_waves(SolverRun& run, double center) {
  std::vector<double> times;
  std::vector<std::vector<double>> fields;
  std::vector<double> xs;
  for (const auto& s : run.snapshots) {
    if (s.t <= 0.0) continue;
    std::vector<double> xr;
    fields.push_back(right_of(s.x, s.eta_bar, center, &xr));
    xs = xr;
    times.push_back(s.t);
  }
  if (times.size() >= 3 && xs.size() >= 3) {
    try {
      run.peak_speed = track_peak_speed(times, fields, xs);
    } catch (const Error&) {
      run.peak_speed.reset();
    }
  }
  if (run.snapshots.empty() || run.snapshots.back().t <= 0.0) return;
  const auto& last = run.snapshots.back();
  std::vector<double> xr;
  const auto f = right_of(last.x, last.eta_bar, center, &xr);
  if (f.size() < 5) return;
  const double fmax = *std::max_element(f.begin(), f.end());
  if (!(fmax > 0.0)) return;
  // Rightmost local maximum above 30% of the largest crest.
  std::size_t ip = f.size();
  for (std::size_t i = f.size() - 2; i >= 1; --i)
    if (f[i] >= f[i - 1] && f[i] > f[i + 1] && f[i] >= 0.3 * fmax) {
      ip = i;
      break;
    }
  if (ip == f.size()) return;
  std::size_t lo = ip, hi = ip;
  while (lo > 0 && f[lo - 1] < f[lo] && f[lo - 1] > 0.02 * f[ip]) --lo;
  while (hi + 1 < f.size() && f[hi + 1] < f[hi] && f[hi + 1] > 0.02 * f[ip]) ++hi;
  if (hi - lo + 1 < 5 || lo == ip || hi == ip) return;
  try {
    run.leading_wave = fit_sech2(std::span(xr).subspan(lo, hi - lo + 1), std::span(f).subspan(lo, hi - lo + 1));
  } catch (const Error&) {
    run.leading_wave.reset();
  }
}

}  // namespace detail

inline SolverRun run_homogenized(const ExperimentConfig& cfg, const EffectiveCoefficients& coeffs,
                                 const InitialProfile& ic) {
  const auto& hs = cfg.homogenized;
  PeriodicGrid1D grid(hs.n, hs.x_max - hs.x_min, hs.x_min);
  State1D s0 = zero_state(grid);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    s0.eta_bar[i] = ic.eta(grid.x(i));
    s0.q_bar[i] = ic.q(grid.x(i));
  }
  HomogenizedParams params{coeffs, hs.cfl, hs.dealias};
  const auto times = cfg.output_times();
  SolverRun run;
  run.kind = SolverKind::homogenized;
  run.mass_initial = grid_integral(grid, s0.eta_bar);
  const auto xs = grid.coordinates();
  const auto sim = simulate_1d(grid, std::move(s0), cfg.run.t_end, params, times);
  for (const auto& s : sim.snapshots) run.snapshots.push_back({s.t, xs, s.eta_bar, s.q_bar});
  run.steps = sim.steps;
  run.mass_final = grid_integral(grid, sim.final_state.eta_bar);
  return run;
}

inline SolverRun run_spectral2d(const ExperimentConfig& cfg, const EffectiveCoefficients& coeffs,
                                const InitialProfile& ic) {
  const auto& sc = cfg.spectral2d;
  const double period = cfg.bathymetry.period();
  PeriodicGrid2D grid(sc.nx, sc.x_max - sc.x_min, sc.x_min, sc.ny, period, -0.5 * period);
  SpectralShallowWater2D solver(grid, cfg.bathymetry, {cfg.g, sc.cfl, sc.dealias});
  const double mean_H = coeffs.mean_H;
  StateEUP s0 = solver.planar_state(ic.eta, [&](double x) { return ic.q(x) / (mean_H + ic.eta(x)); });
  const double eta0 = cfg.bathymetry.eta0();
  std::vector<double> xs(grid.nx()), ys(grid.ny());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = grid.x(i);
  for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = grid.y(j);

  auto reduce = [&](const StateEUP& s) {
    Snapshot1D out{s.t, xs, y_average(s.eta), {}};
    for (double& v : out.eta_bar) v -= eta0;
    Array2D q(grid.nx(), grid.ny());
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = (s.eta[k] - solver.bottom()[k]) * s.u[k];
    out.q_bar = y_average(q);
    return out;
  };

  SolverRun run;
  run.kind = SolverKind::spectral2d;
  run.mass_initial = solver.mass(cfg.spectral2d.dealias ? solver.filtered(s0) : s0);
  const auto sim = solver.simulate(std::move(s0), cfg.run.t_end, cfg.output_times());
  for (const auto& s : sim.snapshots) run.snapshots.push_back(reduce(s));
  run.steps = sim.steps;
  run.mass_final = solver.mass(sim.final_state);
  if (cfg.run.write_2d)
    run.final_2d = Grid2DFile{sim.final_state.t, xs, ys, {"eta", "u", "p"},
                              {sim.final_state.eta, sim.final_state.u, sim.final_state.p}};
  return run;
}

inline SolverRun run_fv2d(const ExperimentConfig& cfg, const EffectiveCoefficients& coeffs, const InitialProfile& ic) {
  const auto& fc = cfg.fv2d;
  const double period = cfg.bathymetry.period();
  CellGrid grid{fc.nx, fc.ny, fc.x_min, fc.x_max - fc.x_min, -0.5 * period, period};
  FVConfig fvc;
  fvc.cfl = fc.cfl;
  fvc.limiter = fc.limiter;
  fvc.bc_x = fc.bc_x;
  fvc.switch_time = cfg.fv_switch_time(coeffs.mean_H);
  fvc.g = cfg.g;
  FiniteVolumeSW2D solver(grid, fvc);
  const double mean_H = coeffs.mean_H;
  StateCons s0 = solver.planar_state(cfg.bathymetry, ic.eta, [&](double x) { return ic.q(x) / (mean_H + ic.eta(x)); });
  const double eta0 = cfg.bathymetry.eta0();
  std::vector<double> xs(grid.nx), ys(grid.ny);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = grid.xc(i);
  for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = grid.yc(j);

  auto reduce = [&](const StateCons& s) {
    Array2D eta(grid.nx, grid.ny);
    for (std::size_t k = 0; k < eta.size(); ++k) eta[k] = s.h[k] + s.b[k] - eta0;
    return Snapshot1D{s.t, xs, y_average(eta), y_average(s.hu)};
  };

  SolverRun run;
  run.kind = SolverKind::fv2d;
  run.mass_initial = solver.mass(s0);
  const auto sim = solver.simulate(std::move(s0), cfg.run.t_end, cfg.output_times(), {}, eta0);
  for (const auto& s : sim.snapshots) run.snapshots.push_back(reduce(s));
  run.steps = sim.steps;
  run.mass_final = solver.mass(sim.final_state);
  if (cfg.run.write_2d)
    run.final_2d = Grid2DFile{sim.final_state.t, xs, ys, {"h", "hu", "hv", "b"},
                              {sim.final_state.h, sim.final_state.hu, sim.final_state.hv, sim.final_state.b}};
  return run;
}

struct RunOptions {
  bool write_outputs = true;
  std::optional<std::filesystem::path> output_dir;  // overrides the config value
  std::function<void(const std::string&)> log;
};

inline std::string snapshot_filename(SolverKind k, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_t%08.3f.csv", to_string(k).c_str(), t);
  return buf;
}

inline json to_json(const FieldComparison& m) {
  return {{"linf", m.linf},         {"l2", m.l2},         {"amplitude", m.amplitude},
          {"rel_linf", m.rel_linf}, {"rel_l2", m.rel_l2}, {"points", m.points}};
}

inline json to_json(const ComparisonReport& r) {
  json j;
  j["name"] = r.name;
  j["coefficients"] = {{"mean_H", r.coeffs.mean_H},
                       {"mu", r.coeffs.mu},
                       {"delta", r.coeffs.delta},
                       {"g", r.coeffs.g},
                       {"zero_mean_residual", r.coeffs.zero_mean_residual},
                       {"zero_mean_ok", r.coeffs.zero_mean_ok}};
  json runs = json::object();
  for (const auto& run : r.runs) {
    json jr;
    jr["steps"] = run.steps;
    jr["mass_initial"] = run.mass_initial;
    jr["mass_final"] = run.mass_final;
    json times = json::array();
    for (const auto& s : run.snapshots) times.push_back(s.t);
    jr["snapshot_times"] = times;
    jr["peak_speed"] = run.peak_speed ? json{{"speed", run.peak_speed->speed}, {"residual", run.peak_speed->residual}}
                                      : json(nullptr);
    jr["leading_wave"] = run.leading_wave ? json{{"A", run.leading_wave->A},
                                                 {"alpha", run.leading_wave->alpha},
                                                 {"center", run.leading_wave->center},
                                                 {"residual", run.leading_wave->residual}}
                                          : json(nullptr);
    runs[to_string(run.kind)] = jr;
  }
  j["solvers"] = runs;
  json cmp = json::array();
  for (const auto& c : r.comparisons) {
    json jc = to_json(c.metrics);
    jc["solver"] = to_string(c.solver);
    jc["reference"] = "homogenized";
    jc["t"] = c.t;
    cmp.push_back(jc);
  }
  j["comparisons"] = cmp;
  return j;
}

inline ComparisonReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
  cfg.validate();
  auto log = [&](const std::string& m) {
    if (opts.log) opts.log(m);
  };
  CoefficientOptions co;
  co.delta = cfg.delta;
  co.g = cfg.g;
  co.resolution = cfg.quadrature_points;
  ComparisonReport report;
  report.name = cfg.name;
  report.coeffs = compute_effective_coefficients(cfg.bathymetry, co);
  const InitialProfile ic = make_initial_profile(cfg, report.coeffs);

  for (SolverKind k : cfg.solvers) {
    log("running " + to_string(k));
    try {
      SolverRun run = k == SolverKind::homogenized  ? run_homogenized(cfg, report.coeffs, ic)
                      : k == SolverKind::spectral2d ? run_spectral2d(cfg, report.coeffs, ic)
                                                    : run_fv2d(cfg, report.coeffs, ic);
      detail::analyse_waves(run, cfg.initial.center);
      report.runs.push_back(std::move(run));
    } catch (const Error& e) {
      throw Error(e.kind(), "experiment '" + cfg.name + "', solver " + to_string(k) + ": " + e.what());
    }
  }

  if (const SolverRun* ref = report.find(SolverKind::homogenized)) {
    for (const auto& run : report.runs) {
      if (run.kind == SolverKind::homogenized) continue;
      for (std::size_t n = 0; n < run.snapshots.size(); ++n) {
        const auto& a = ref->snapshots[n];
        const auto& b = run.snapshots[n];
        report.comparisons.push_back(
            {run.kind, b.t,
             compare_fields(a.x, a.eta_bar, b.x, b.eta_bar, cfg.run.compare_x_min.value_or(-INFINITY),
                            cfg.run.compare_x_max.value_or(INFINITY))});
      }
    }
  }

  if (opts.write_outputs) {
    const std::filesystem::path dir = opts.output_dir.value_or(std::filesystem::path(cfg.output_dir));
    for (const auto& run : report.runs) {
      for (const auto& s : run.snapshots) write_snapshot_1d(s, dir / snapshot_filename(run.kind, s.t));
      if (run.final_2d) write_grid_2d(*run.final_2d, dir / (to_string(run.kind) + "_final_2d.csv"));
    }
    json j = to_json(report);
    j["config"] = to_json(cfg);
    write_json(j, dir / "report.json");
    log("wrote " + dir.string());
  }
  return report;
}

}  // namespace swhomog
