#pragma once

// Experiment configuration: INI-style "key = value" text with sections.
//
//   [experiment]  name, solvers (comma list of homogenized, spectral2d, fv2d), output_dir
//   [bathymetry]  kind (sinusoidal | piecewise_constant | flat | tabulated | preset), period, eta0,
//                 b0, amplitude, phase, levels ("y:b, y:b"), b, y0, samples, preset
//   [initial]     kind (gaussian | solitary), amplitude, width, center, speed
//   [physics]     g, delta, quadrature_points
//   [homogenized] n, x_min, x_max, cfl, dealias
//   [spectral2d]  nx, ny, x_min, x_max, cfl, dealias
//   [fv2d]        nx, ny, x_min, x_max, cfl, limiter, bc_x, switch_time
//   [run]         t_end, snapshots, compare_x_min, compare_x_max, write_2d
//
// Unknown sections or keys are rejected.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "swhomog/bathymetry.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/harness/io.hpp"
#include "swhomog/sw2d_fv.hpp"

namespace swhomog {

enum class SolverKind { homogenized, spectral2d, fv2d };

inline std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::homogenized: return "homogenized";
    case SolverKind::spectral2d: return "spectral2d";
    case SolverKind::fv2d: return "fv2d";
  }
  return "?";
}

inline std::string to_string(BoundaryX b) {
  switch (b) {
    case BoundaryX::reflecting: return "reflecting";
    case BoundaryX::periodic: return "periodic";
    case BoundaryX::reflecting_then_periodic: return "reflecting_then_periodic";
  }
  return "?";
}

inline std::string to_string(Limiter l) { return l == Limiter::minmod ? "minmod" : "none"; }

enum class InitialKind { gaussian, solitary };

struct InitialSpec {
  InitialKind kind = InitialKind::gaussian;
  double amplitude = 0.05;  // gaussian: eta = amplitude exp(-((x - center)/width)^2)
  double width = 5.0;
  double center = 0.0;
  double speed = 10.0 / 3.0;  // solitary: traveling-wave speed V
};

struct HomogenizedSection {
  std::size_t n = 4096;
  double x_min = -200.0;
  double x_max = 200.0;
  double cfl = 0.5;
  bool dealias = true;
};

struct Spectral2DSection {
  std::size_t nx = 2048;
  std::size_t ny = 16;
  double x_min = -200.0;
  double x_max = 200.0;
  double cfl = 0.5;
  bool dealias = true;
};

struct FV2DSection {
  std::size_t nx = 2000;
  std::size_t ny = 64;
  double x_min = 0.0;
  double x_max = 100.0;
  double cfl = 0.45;
  Limiter limiter = Limiter::minmod;
  BoundaryX bc_x = BoundaryX::reflecting;
  std::optional<double> switch_time;  // default 2 * width / c
};

struct RunSection {
  double t_end = 30.0;
  std::vector<double> snapshots;
  std::optional<double> compare_x_min;
  std::optional<double> compare_x_max;
  bool write_2d = false;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<SolverKind> solvers{SolverKind::homogenized};
  std::string output_dir = "out";
  BathymetryProfile bathymetry = BathymetryProfile::sinusoidal_setup();
  std::string bathymetry_description = "sinusoidal_setup";
  InitialSpec initial;
  double g = kGravity;
  double delta = 1.0;
  std::size_t quadrature_points = kDefaultQuadraturePoints;
  HomogenizedSection homogenized;
  Spectral2DSection spectral2d;
  FV2DSection fv2d;
  RunSection run;

  bool uses(SolverKind s) const {
    for (auto k : solvers)
      if (k == s) return true;
    return false;
  }

  /// Switch time for reflecting_then_periodic: configured or 2 * width / c.
  double fv_switch_time(double mean_H) const {
    return fv2d.switch_time.value_or(2.0 * initial.width / std::sqrt(g * mean_H));
  }

  /// All snapshot times plus t_end, sorted and unique.
  std::vector<double> output_times() const {
    std::vector<double> t = run.snapshots;
    t.push_back(run.t_end);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  }

  void validate() const {
    require(!solvers.empty(), ErrorKind::config, "no solver selected");
    require(run.t_end >= 0.0 && std::isfinite(run.t_end), ErrorKind::config, "run.t_end must be >= 0");
    for (double t : run.snapshots)
      require(t >= 0.0 && t <= run.t_end, ErrorKind::config, "snapshot times must lie in [0, t_end]");
    require(g > 0.0 && delta > 0.0, ErrorKind::config, "physics.g and physics.delta must be positive");
    require(initial.width > 0.0, ErrorKind::config, "initial.width must be positive");
    if (uses(SolverKind::spectral2d))
      require(bathymetry.is_smooth(), ErrorKind::config,
              "spectral2d requires smooth bathymetry; use fv2d for piecewise-constant profiles");
    require(homogenized.x_max > homogenized.x_min && spectral2d.x_max > spectral2d.x_min &&
                fv2d.x_max > fv2d.x_min,
            ErrorKind::config, "x_max must exceed x_min in every solver section");
    if (uses(SolverKind::fv2d))
      require(fv2d.nx >= 2 && fv2d.ny >= 1, ErrorKind::config, "fv2d grid too small");
    if (uses(SolverKind::homogenized))
      require(homogenized.n >= 8 && homogenized.n % 2 == 0, ErrorKind::config, "homogenized.n must be even and >= 8");
    if (uses(SolverKind::spectral2d))
      require(spectral2d.nx >= 8 && spectral2d.nx % 2 == 0 && spectral2d.ny >= 4 && spectral2d.ny % 2 == 0,
              ErrorKind::config, "spectral2d grid must be even (nx >= 8, ny >= 4)");
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    const std::string t = trim(tok);
    if (t.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    require(end != t.c_str() && *end == '\0', ErrorKind::config, "bad number '" + t + "' in " + key);
    out.push_back(v);
  }
  return out;
}

class Section {
 public:
  Section(const boost::property_tree::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  template <class T>
  T get(const std::string& key, T fallback) const {
    used_.insert(key);
    if (!tree_) return fallback;
    const auto v = tree_->get_optional<std::string>(key);
    if (!v) return fallback;
    return convert<T>(trim(*v), key);
  }

  template <class T>
  std::optional<T> get_optional(const std::string& key) const {
    used_.insert(key);
    if (!tree_) return std::nullopt;
    const auto v = tree_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return convert<T>(trim(*v), key);
  }

  void reject_unknown(const std::set<std::string>& allowed) const {
    if (!tree_) return;
    for (const auto& [k, _] : *tree_)
      require(allowed.count(k) != 0, ErrorKind::config, "unknown key '" + k + "' in [" + name_ + "]");
  }

 private:
  template <class T>
  T convert(const std::string& s, const std::string& key) const {
    const std::string where = "[" + name_ + "] " + key;
    if constexpr (std::is_same_v<T, std::string>) {
      return s;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
      if (s == "false" || s == "0" || s == "no" || s == "off") return false;
      fail(ErrorKind::config, "expected a boolean for " + where + ", got '" + s + "'");
    } else if constexpr (std::is_integral_v<T>) {
      char* end = nullptr;
      const long long v = std::strtoll(s.c_str(), &end, 10);
      require(end != s.c_str() && *end == '\0' && v >= 0, ErrorKind::config,
              "expected a non-negative integer for " + where + ", got '" + s + "'");
      return static_cast<T>(v);
    } else {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      require(end != s.c_str() && *end == '\0' && std::isfinite(v), ErrorKind::config,
              "expected a number for " + where + ", got '" + s + "'");
      return v;
    }
  }

  const boost::property_tree::ptree* tree_;
  std::string name_;
  mutable std::set<std::string> used_;
};

inline BathymetryProfile parse_bathymetry(const Section& s, std::string& description,
                                          const std::filesystem::path& base_dir) {
  const auto kind = s.get<std::string>("kind", "preset");
  const double period = s.get("period", 1.0);
  const double eta0 = s.get("eta0", 0.0);
  if (kind == "preset") {
    const auto preset = s.get<std::string>("preset", "sinusoidal_setup");
    description = preset;
    if (preset == "sinusoidal_setup") return BathymetryProfile::sinusoidal_setup();
    if (preset == "pwc_setup") return BathymetryProfile::pwc_setup();
    fail(ErrorKind::config, "unknown bathymetry preset '" + preset + "'");
  }
  if (kind == "sinusoidal") {
    const double b0 = s.get("b0", -1.0), amp = s.get("amplitude", 0.3), phase = s.get("phase", 0.0);
    description = "sinusoidal b0=" + std::to_string(b0) + " amplitude=" + std::to_string(amp);
    return BathymetryProfile::sinusoidal(b0, amp, period, eta0, phase);
  }
  if (kind == "flat") {
    const double b = s.get("b", -1.0);
    description = "flat b=" + std::to_string(b);
    return BathymetryProfile::flat(b, period, eta0);
  }
  if (kind == "piecewise_constant") {
    const auto text = s.get<std::string>("levels", "");
    std::vector<std::pair<double, double>> levels;
    for (const auto& tok : split(text, ',')) {
      const std::string t = trim(tok);
      if (t.empty()) continue;
      const auto colon = t.find(':');
      require(colon != std::string::npos, ErrorKind::config, "bathymetry levels must be 'y:b' pairs, got '" + t + "'");
      const auto y = parse_list(t.substr(0, colon), "levels");
      const auto b = parse_list(t.substr(colon + 1), "levels");
      require(y.size() == 1 && b.size() == 1, ErrorKind::config, "bad level '" + t + "'");
      levels.emplace_back(y[0], b[0]);
    }
    require(!levels.empty(), ErrorKind::config, "piecewise_constant bathymetry needs levels");
    description = "piecewise_constant " + text;
    return BathymetryProfile::piecewise_constant(std::move(levels), period, eta0);
  }
  if (kind == "tabulated") {
    std::vector<double> samples;
    if (const auto file = s.get_optional<std::string>("file")) {
      std::filesystem::path p(*file);
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      require(in.good(), ErrorKind::config, "cannot read bathymetry samples '" + p.string() + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      std::string all = ss.str();
      std::replace(all.begin(), all.end(), '\n', ',');
      samples = parse_list(all, "file");
    } else {
      samples = parse_list(s.get<std::string>("samples", ""), "samples");
    }
    description = "tabulated (" + std::to_string(samples.size()) + " samples)";
    return BathymetryProfile::tabulated(s.get("y0", -0.5 * period), std::move(samples), period, eta0);
  }
  fail(ErrorKind::config, "unknown bathymetry kind '" + kind + "'");
}

}  // namespace detail

inline Limiter parse_limiter(const std::string& s) {
  if (s == "minmod") return Limiter::minmod;
  if (s == "none") return Limiter::none;
  fail(ErrorKind::config, "unknown limiter '" + s + "' (minmod | none)");
}

inline BoundaryX parse_boundary(const std::string& s) {
  if (s == "reflecting") return BoundaryX::reflecting;
  if (s == "periodic") return BoundaryX::periodic;
  if (s == "reflecting_then_periodic") return BoundaryX::reflecting_then_periodic;
  fail(ErrorKind::config, "unknown bc_x '" + s + "' (reflecting | periodic | reflecting_then_periodic)");
}

inline SolverKind parse_solver(const std::string& s) {
  if (s == "homogenized") return SolverKind::homogenized;
  if (s == "spectral2d") return SolverKind::spectral2d;
  if (s == "fv2d") return SolverKind::fv2d;
  fail(ErrorKind::config, "unknown solver '" + s + "' (homogenized | spectral2d | fv2d)");
}

/// Parses configuration text; relative paths resolve against base_dir.
inline ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".") {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::config, std::string("config syntax error: ") + e.what());
  }
  static const std::map<std::string, std::set<std::string>> kAllowed = {
      {"experiment", {"name", "solvers", "output_dir"}},
      {"bathymetry",
       {"kind", "preset", "period", "eta0", "b0", "amplitude", "phase", "b", "levels", "y0", "samples", "file"}},
      {"initial", {"kind", "amplitude", "width", "center", "speed"}},
      {"physics", {"g", "delta", "quadrature_points"}},
      {"homogenized", {"n", "x_min", "x_max", "cfl", "dealias"}},
      {"spectral2d", {"nx", "ny", "x_min", "x_max", "cfl", "dealias"}},
      {"fv2d", {"nx", "ny", "x_min", "x_max", "cfl", "limiter", "bc_x", "switch_time"}},
      {"run", {"t_end", "snapshots", "compare_x_min", "compare_x_max", "write_2d"}},
  };
  for (const auto& [name, sub] : tree) {
    require(kAllowed.count(name) != 0, ErrorKind::config, "unknown section [" + name + "]");
    require(!sub.empty() || sub.data().empty(), ErrorKind::config, "key '" + name + "' outside any section");
  }
  auto section = [&](const std::string& name) {
    const auto child = tree.get_child_optional(name);
    detail::Section s(child ? &*child : nullptr, name);
    s.reject_unknown(kAllowed.at(name));
    return s;
  };

  ExperimentConfig c;
  const auto ex = section("experiment");
  c.name = ex.get<std::string>("name", c.name);
  c.output_dir = ex.get<std::string>("output_dir", c.output_dir);
  if (const auto list = ex.get_optional<std::string>("solvers")) {
    c.solvers.clear();
    for (const auto& tok : detail::split(*list, ','))
      if (!detail::trim(tok).empty()) c.solvers.push_back(parse_solver(detail::trim(tok)));
  }

  const auto ph = section("physics");
  c.g = ph.get("g", c.g);
  c.delta = ph.get("delta", c.delta);
  c.quadrature_points = ph.get<std::size_t>("quadrature_points", c.quadrature_points);

  try {
    c.bathymetry = detail::parse_bathymetry(section("bathymetry"), c.bathymetry_description, base_dir);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    fail(ErrorKind::config, std::string("invalid bathymetry: ") + e.what());
  }

  const auto in = section("initial");
  const auto ik = in.get<std::string>("kind", "gaussian");
  require(ik == "gaussian" || ik == "solitary", ErrorKind::config, "initial.kind must be gaussian or solitary");
  c.initial.kind = ik == "gaussian" ? InitialKind::gaussian : InitialKind::solitary;
  c.initial.amplitude = in.get("amplitude", c.initial.amplitude);
  c.initial.width = in.get("width", c.initial.width);
  c.initial.center = in.get("center", c.initial.center);
  c.initial.speed = in.get("speed", c.initial.speed);

  const auto ho = section("homogenized");
  c.homogenized.n = ho.get("n", c.homogenized.n);
  c.homogenized.x_min = ho.get("x_min", c.homogenized.x_min);
  c.homogenized.x_max = ho.get("x_max", c.homogenized.x_max);
  c.homogenized.cfl = ho.get("cfl", c.homogenized.cfl);
  c.homogenized.dealias = ho.get("dealias", c.homogenized.dealias);

  const auto sp = section("spectral2d");
  c.spectral2d.nx = sp.get("nx", c.spectral2d.nx);
  c.spectral2d.ny = sp.get("ny", c.spectral2d.ny);
  c.spectral2d.x_min = sp.get("x_min", c.spectral2d.x_min);
  c.spectral2d.x_max = sp.get("x_max", c.spectral2d.x_max);
  c.spectral2d.cfl = sp.get("cfl", c.spectral2d.cfl);
  c.spectral2d.dealias = sp.get("dealias", c.spectral2d.dealias);

  const auto fv = section("fv2d");
  c.fv2d.nx = fv.get("nx", c.fv2d.nx);
  c.fv2d.ny = fv.get("ny", c.fv2d.ny);
  c.fv2d.x_min = fv.get("x_min", c.fv2d.x_min);
  c.fv2d.x_max = fv.get("x_max", c.fv2d.x_max);
  c.fv2d.cfl = fv.get("cfl", c.fv2d.cfl);
  c.fv2d.limiter = parse_limiter(fv.get<std::string>("limiter", "minmod"));
  c.fv2d.bc_x = parse_boundary(fv.get<std::string>("bc_x", "reflecting"));
  c.fv2d.switch_time = fv.get_optional<double>("switch_time");

  const auto rn = section("run");
  c.run.t_end = rn.get("t_end", c.run.t_end);
  if (const auto s = rn.get_optional<std::string>("snapshots")) c.run.snapshots = detail::parse_list(*s, "snapshots");
  c.run.compare_x_min = rn.get_optional<double>("compare_x_min");
  c.run.compare_x_max = rn.get_optional<double>("compare_x_max");
  c.run.write_2d = rn.get("write_2d", c.run.write_2d);

  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::io, "cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig c = parse_config(ss.str(), path.has_parent_path() ? path.parent_path() : ".");
  return c;
}

inline json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  json solvers = json::array();
  for (auto s : c.solvers) solvers.push_back(to_string(s));
  j["solvers"] = solvers;
  j["bathymetry"] = c.bathymetry_description;
  j["initial"] = {{"kind", c.initial.kind == InitialKind::gaussian ? "gaussian" : "solitary"},
                  {"amplitude", c.initial.amplitude},
                  {"width", c.initial.width},
                  {"center", c.initial.center},
                  {"speed", c.initial.speed}};
  j["physics"] = {{"g", c.g}, {"delta", c.delta}, {"quadrature_points", c.quadrature_points}};
  j["homogenized"] = {{"n", c.homogenized.n},
                      {"x_min", c.homogenized.x_min},
                      {"x_max", c.homogenized.x_max},
                      {"cfl", c.homogenized.cfl},
                      {"dealias", c.homogenized.dealias}};
  j["spectral2d"] = {{"nx", c.spectral2d.nx},       {"ny", c.spectral2d.ny},   {"x_min", c.spectral2d.x_min},
                     {"x_max", c.spectral2d.x_max}, {"cfl", c.spectral2d.cfl}, {"dealias", c.spectral2d.dealias}};
  j["fv2d"] = {{"nx", c.fv2d.nx},
               {"ny", c.fv2d.ny},
               {"x_min", c.fv2d.x_min},
               {"x_max", c.fv2d.x_max},
               {"cfl", c.fv2d.cfl},
               {"limiter", to_string(c.fv2d.limiter)},
               {"bc_x", to_string(c.fv2d.bc_x)}};
  if (c.fv2d.switch_time) j["fv2d"]["switch_time"] = *c.fv2d.switch_time;
  j["run"] = {{"t_end", c.run.t_end}, {"snapshots", c.run.snapshots}, {"write_2d", c.run.write_2d}};
  return j;
}

}  // namespace swhomog
