#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swhomog/swhomog.hpp"

namespace fs = std::filesystem;
using namespace swhomog;

namespace {

std::mutex g_log_mutex;

void log_line(const std::string& m) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << m << '\n';
}

ExperimentConfig config_or_preset(const std::string& config_path, const std::string& preset) {
  if (!config_path.empty()) return load_config(config_path);
  ExperimentConfig c;
  if (preset == "pwc_setup") {
    c.bathymetry = BathymetryProfile::pwc_setup();
  } else if (preset == "sinusoidal_setup") {
    c.bathymetry = BathymetryProfile::sinusoidal_setup();
  } else {
    fail(ErrorKind::invalid_argument, "unknown preset '" + preset + "' (pwc_setup | sinusoidal_setup)");
  }
  c.bathymetry_description = preset;
  return c;
}

EffectiveCoefficients coefficients_for(const ExperimentConfig& c) {
  CoefficientOptions o;
  o.delta = c.delta;
  o.g = c.g;
  o.resolution = c.quadrature_points;
  return compute_effective_coefficients(c.bathymetry, o);
}

int run_single_solver(const std::string& config_path, SolverKind solver, const std::string& out_dir) {
  ExperimentConfig cfg = load_config(config_path);
  cfg.solvers = {solver};
  if (solver == SolverKind::spectral2d)
    require(cfg.bathymetry.is_smooth(), ErrorKind::unsupported, "spectral2d requires smooth bathymetry");
  RunOptions opts;
  if (!out_dir.empty()) opts.output_dir = out_dir;
  opts.log = log_line;
  const auto report = run_experiment(cfg, opts);
  std::cout << to_json(report).dump(2) << '\n';
  return 0;
}

int cmd_bathy_info(const std::string& config_path, const std::string& preset, std::size_t table) {
  const ExperimentConfig c = config_or_preset(config_path, preset);
  const auto coeffs = coefficients_for(c);
  const auto mu = dispersion_coefficient(c.bathymetry, c.quadrature_points);
  json j{{"bathymetry", c.bathymetry_description},
         {"piecewise_constant", c.bathymetry.is_piecewise_constant()},
         {"smooth", c.bathymetry.is_smooth()},
         {"mean_H", coeffs.mean_H},
         {"mu", mu.mu},
         {"mu_alternate", mu.mu_alternate},
         {"delta", coeffs.delta},
         {"g", coeffs.g},
         {"wave_speed", coeffs.wave_speed()},
         {"zero_mean_residual", coeffs.zero_mean_residual},
         {"zero_mean_ok", coeffs.zero_mean_ok}};
  if (table > 0) {
    json rows = json::array();
    const double period = c.bathymetry.period();
    for (std::size_t k = 0; k < table; ++k) {
      const double y = -0.5 * period + period * (static_cast<double>(k) + 0.5) / static_cast<double>(table);
      rows.push_back({{"y", y},
                      {"b", c.bathymetry.bottom(y)},
                      {"H", c.bathymetry.depth(y)},
                      {"brH", coeffs.brH_at(y)},
                      {"brHinvbrH", coeffs.brHinvbrH_at(y)}});
    }
    j["table"] = rows;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_traveling_wave(double V, const std::string& config_path, const std::string& preset, const std::string& out,
                       double epsilon, std::size_t samples) {
  const ExperimentConfig c = config_or_preset(config_path, preset);
  const auto coeffs = coefficients_for(c);
  const auto params = TravelingWaveParams::from(coeffs, V);
  HomoclinicOptions opt;
  opt.epsilon = epsilon;
  opt.samples = samples;
  const auto w = integrate_homoclinic(params, opt);
  json j{{"V", w.V},
         {"a1", params.a1},
         {"a2", params.a2},
         {"mu_tilde", params.mu_tilde},
         {"A", w.amplitude},
         {"q_peak", w.q_peak},
         {"alpha", w.alpha},
         {"residual", w.fit_residual},
         {"energy_drift", w.energy_drift},
         {"steps", w.steps}};
  if (!out.empty()) {
    const fs::path base(out);
    auto csv = detail::open_out(base.string() + ".csv");
    csv << "xi,q,eta\n";
    for (std::size_t i = 0; i < w.xi.size(); ++i)
      csv << detail::fmt17(w.xi[i]) << ',' << detail::fmt17(w.q[i]) << ',' << detail::fmt17(w.eta[i]) << '\n';
    require(csv.good(), ErrorKind::io, "write failed for '" + base.string() + ".csv'");
    write_json(j, base.string() + ".json");
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_reconstruct(const std::string& snapshot, const std::string& config_path, const std::string& preset,
                    std::size_t ny, int direction, const std::string& out) {
  const ExperimentConfig c = config_or_preset(config_path, preset);
  const auto coeffs = coefficients_for(c);
  const Snapshot1D s = read_snapshot_1d(snapshot);
  const std::size_t n = s.x.size();
  require(n >= 8 && n % 2 == 0, ErrorKind::invalid_argument, "snapshot needs an even number (>= 8) of points");
  const double dx = (s.x.back() - s.x.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    require(std::abs(s.x[i] - s.x[i - 1] - dx) <= 1e-9 * std::abs(dx) * static_cast<double>(n), ErrorKind::invalid_argument,
            "snapshot x must be uniformly spaced");
  PeriodicGrid1D grid(n, dx * static_cast<double>(n), s.x.front());
  State1D state{s.eta_bar, s.q_bar, s.t};
  const double period = c.bathymetry.period();
  std::vector<double> ys(ny);
  for (std::size_t j = 0; j < ny; ++j) ys[j] = -0.5 * period + period * (static_cast<double>(j) + 0.5) / static_cast<double>(ny);
  const auto r = reconstruct(grid, state, coeffs, ys, direction, c.bathymetry.eta0());
  write_grid_2d({r.t, r.x, r.y, {"eta", "u", "p"}, {r.eta, r.u, r.p}}, out);
  std::cout << json{{"output", out}, {"nx", n}, {"ny", ny}, {"t", r.t}}.dump(2) << '\n';
  return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, double x_min, double x_max) {
  const Snapshot1D a = read_snapshot_1d(a_path);
  const Snapshot1D b = read_snapshot_1d(b_path);
  const auto eta = compare_fields(a.x, a.eta_bar, b.x, b.eta_bar, x_min, x_max);
  const auto q = compare_fields(a.x, a.q_bar, b.x, b.q_bar, x_min, x_max);
  json j{{"a", a_path}, {"b", b_path}, {"t_a", a.t}, {"t_b", b.t}, {"eta_bar", to_json(eta)}, {"q_bar", to_json(q)}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_run(const std::vector<std::string>& configs, std::size_t jobs, const std::string& out_root) {
  require(jobs >= 1, ErrorKind::invalid_argument, "--jobs must be >= 1");
  std::vector<json> results(configs.size());
  std::size_t next = 0;
  std::mutex next_mutex;
  auto worker = [&]() {
    while (true) {
      std::size_t k;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= configs.size()) return;
        k = next++;
      }
      const auto cfg = load_config(configs[k]);
      RunOptions opts;
      if (!out_root.empty()) opts.output_dir = fs::path(out_root) / cfg.name;
      opts.log = [&, name = cfg.name](const std::string& m) { log_line("[" + name + "] " + m); };
      const auto t0 = std::chrono::steady_clock::now();
      const auto report = run_experiment(cfg, opts);
      log_line("[" + cfg.name + "] finished in " +
               std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");
      results[k] = to_json(report);
    }
  };
  std::vector<std::future<void>> pool;
  for (std::size_t t = 0; t < std::min(jobs, configs.size()); ++t) pool.push_back(std::async(std::launch::async, worker));
  std::exception_ptr first;
  for (auto& f : pool) {
    try {
      f.get();
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
  std::cout << json(results).dump(2) << '\n';
  return 0;
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogenized shallow-water wave toolkit"};
  app.require_subcommand(1);

  std::string config, preset = "pwc_setup", out, a_path, b_path, snapshot;
  std::size_t table = 0, ny = 32, samples = 4001, jobs = 1;
  double V = 10.0 / 3.0, epsilon = 1e-8, x_min = -INFINITY, x_max = INFINITY;
  int direction = 1;
  std::vector<std::string> configs;

  auto* bathy = app.add_subcommand("bathy-info", "Effective coefficients of a bathymetry profile");
  bathy->add_option("--config", config, "Experiment config file (its [bathymetry] and [physics] sections)");
  bathy->add_option("--preset", preset, "pwc_setup | sinusoidal_setup (used without --config)")->capture_default_str();
  bathy->add_option("--table", table, "Also tabulate b, H, [[H]], [[H^-1[[H]]]] at this many y points")
      ->capture_default_str();

  auto* sim1 = app.add_subcommand("simulate-1d", "Run the homogenized 1D solver from a config");
  auto* sim2s = app.add_subcommand("simulate-2d-spectral", "Run the 2D pseudospectral solver from a config");
  auto* sim2f = app.add_subcommand("simulate-2d-fv", "Run the 2D finite-volume solver from a config");
  for (auto* s : {sim1, sim2s, sim2f}) {
    s->add_option("--config", config, "Experiment config file")->required();
    s->add_option("--out", out, "Output directory (default: the config's output_dir)");
  }

  auto* tw = app.add_subcommand("traveling-wave", "Solitary traveling wave of the homogenized system");
  tw->add_option("--V", V, "Wave speed (m/s)")->capture_default_str();
  tw->add_option("--config", config, "Config providing bathymetry and physics");
  tw->add_option("--preset", preset, "pwc_setup | sinusoidal_setup (used without --config)")->capture_default_str();
  tw->add_option("--epsilon", epsilon, "Initial offset from the saddle, relative to the centre equilibrium")
      ->capture_default_str();
  tw->add_option("--samples", samples, "Uniform xi samples in the profile")->capture_default_str();
  tw->add_option("--out", out, "Output prefix: writes <prefix>.csv (xi,q,eta) and <prefix>.json");

  auto* rec = app.add_subcommand("reconstruct", "Rebuild 2D fields from a 1D snapshot CSV");
  rec->add_option("--snapshot", snapshot, "1D snapshot CSV (x,eta_bar,q_bar)")->required();
  rec->add_option("--config", config, "Config providing bathymetry and physics");
  rec->add_option("--preset", preset, "pwc_setup | sinusoidal_setup (used without --config)")->capture_default_str();
  rec->add_option("--ny", ny, "Number of y points (cell centres)")->capture_default_str();
  rec->add_option("--direction", direction, "+1 right-going, -1 left-going")->capture_default_str();
  rec->add_option("--out", out, "Output 2D CSV")->required();

  auto* cmp = app.add_subcommand("compare", "Compare two 1D snapshot CSVs");
  cmp->add_option("--a", a_path, "Reference snapshot")->required();
  cmp->add_option("--b", b_path, "Snapshot to compare")->required();
  cmp->add_option("--x-min", x_min, "Lower end of the comparison window");
  cmp->add_option("--x-max", x_max, "Upper end of the comparison window");

  auto* run = app.add_subcommand("run", "Run full experiments");
  run->add_option("configs", configs, "Config files")->required();
  run->add_option("--jobs", jobs, "Experiments run concurrently")->capture_default_str();
  run->add_option("--out", out, "Output root (default: each config's output_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*bathy) return cmd_bathy_info(config, preset, table);
    if (*sim1) return run_single_solver(config, SolverKind::homogenized, out);
    if (*sim2s) return run_single_solver(config, SolverKind::spectral2d, out);
    if (*sim2f) return run_single_solver(config, SolverKind::fv2d, out);
    if (*tw) return cmd_traveling_wave(V, config, preset, out, epsilon, samples);
    if (*rec) return cmd_reconstruct(snapshot, config, preset, ny, direction, out);
    if (*cmp) return cmd_compare(a_path, b_path, x_min, x_max);
    if (*run) return cmd_run(configs, jobs, out);
  } catch (const Error& e) {
    print_error(std::string(to_string(e.kind())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
