#pragma once

// CSV/JSON serialization. Numbers are written with 17 significant digits so
// that doubles round-trip exactly.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "swhomog/array2d.hpp"
#include "swhomog/errors.hpp"

namespace swhomog {

using json = nlohmann::json;

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  require(out.good(), ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  return in;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

inline double parse_double(const std::string& s, const std::filesystem::path& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(end != s.c_str() && (*end == '\0' || *end == '\r' || *end == ' '), ErrorKind::io,
          "malformed number '" + s + "' in '" + path.string() + "'");
  return v;
}

}  // namespace detail

struct Snapshot1D {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> eta_bar;
  std::vector<double> q_bar;
};

inline void write_snapshot_1d(const Snapshot1D& s, const std::filesystem::path& path) {
  require(s.x.size() == s.eta_bar.size() && s.x.size() == s.q_bar.size(), ErrorKind::invalid_argument,
          "1D snapshot columns differ in length");
  auto out = detail::open_out(path);
  out << "# t=" << detail::fmt17(s.t) << "\n";
  out << "x,eta_bar,q_bar\n";
  for (std::size_t i = 0; i < s.x.size(); ++i)
    out << detail::fmt17(s.x[i]) << ',' << detail::fmt17(s.eta_bar[i]) << ',' << detail::fmt17(s.q_bar[i]) << '\n';
  require(out.good(), ErrorKind::io, "write failed for '" + path.string() + "'");
}

inline Snapshot1D read_snapshot_1d(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  Snapshot1D s;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("t=");
      if (pos != std::string::npos) s.t = detail::parse_double(line.substr(pos + 2), path);
      continue;
    }
    if (!header_seen) {
      require(line.rfind("x,eta_bar,q_bar", 0) == 0, ErrorKind::io,
              "'" + path.string() + "' is not a 1D snapshot (header x,eta_bar,q_bar missing)");
      header_seen = true;
      continue;
    }
    const auto cols = detail::split(line, ',');
    require(cols.size() == 3, ErrorKind::io, "malformed row in '" + path.string() + "'");
    s.x.push_back(detail::parse_double(cols[0], path));
    s.eta_bar.push_back(detail::parse_double(cols[1], path));
    s.q_bar.push_back(detail::parse_double(cols[2], path));
  }
  require(header_seen, ErrorKind::io, "'" + path.string() + "' has no data header");
  return s;
}

/// 2D fields on a tensor grid with explicit coordinates.
struct Grid2DFile {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> names;
  std::vector<Array2D> fields;
};

/// Header line "# nx=.. ny=.. x_min=.. x_max=.. y_min=.. y_max=.. t=..", then a
/// column line "x,y,<names>", then one row per (i, j) in row-major order.
inline void write_grid_2d(const Grid2DFile& g, const std::filesystem::path& path) {
  require(g.names.size() == g.fields.size() && !g.x.empty() && !g.y.empty(), ErrorKind::invalid_argument,
          "2D grid file: names/fields mismatch or empty axes");
  for (const auto& f : g.fields)
    require(f.nx() == g.x.size() && f.ny() == g.y.size(), ErrorKind::invalid_argument,
            "2D grid file: field shape does not match axes");
  auto out = detail::open_out(path);
  out << "# nx=" << g.x.size() << " ny=" << g.y.size() << " x_min=" << detail::fmt17(g.x.front())
      << " x_max=" << detail::fmt17(g.x.back()) << " y_min=" << detail::fmt17(g.y.front())
      << " y_max=" << detail::fmt17(g.y.back()) << " t=" << detail::fmt17(g.t) << "\n";
  out << "x,y";
  for (const auto& n : g.names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (std::size_t j = 0; j < g.y.size(); ++j) {
      out << detail::fmt17(g.x[i]) << ',' << detail::fmt17(g.y[j]);
      for (const auto& f : g.fields) out << ',' << detail::fmt17(f(i, j));
      out << '\n';
    }
  require(out.good(), ErrorKind::io, "write failed for '" + path.string() + "'");
}

inline Grid2DFile read_grid_2d(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line.rfind("# ", 0) == 0, ErrorKind::io,
          "'" + path.string() + "' lacks the 2D grid header");
  std::map<std::string, std::string> kv;
  for (const auto& tok : detail::split(line.substr(2), ' ')) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"nx", "ny", "t"})
    require(kv.count(key) != 0, ErrorKind::io, std::string("2D grid header misses '") + key + "'");
  const auto nx = static_cast<std::size_t>(std::stoull(kv["nx"]));
  const auto ny = static_cast<std::size_t>(std::stoull(kv["ny"]));
  Grid2DFile g;
  g.t = detail::parse_double(kv["t"], path);
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::io, "'" + path.string() + "' has no column line");
  const auto cols = detail::split(line, ',');
  require(cols.size() >= 2 && cols[0] == "x" && cols[1] == "y", ErrorKind::io, "2D column line must start with x,y");
  g.names.assign(cols.begin() + 2, cols.end());
  g.fields.assign(g.names.size(), Array2D(nx, ny));
  g.x.resize(nx);
  g.y.resize(ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      require(static_cast<bool>(std::getline(in, line)), ErrorKind::io, "'" + path.string() + "' is truncated");
      const auto v = detail::split(line, ',');
      require(v.size() == cols.size(), ErrorKind::io, "malformed row in '" + path.string() + "'");
      g.x[i] = detail::parse_double(v[0], path);
      g.y[j] = detail::parse_double(v[1], path);
      for (std::size_t f = 0; f < g.names.size(); ++f) g.fields[f](i, j) = detail::parse_double(v[f + 2], path);
    }
  return g;
}

inline void write_json(const json& j, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << j.dump(2) << '\n';
  require(out.good(), ErrorKind::io, "write failed for '" + path.string() + "'");
}

inline json read_json(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::io, "invalid JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace swhomog
