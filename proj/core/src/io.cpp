#include "inflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "inflow/errors.hpp"

namespace inflow {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t b = 0;
    while (b < cell.size() && cell[b] == ' ') ++b;
    parts.push_back(cell.substr(b));
  }
  return parts;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ConfigError("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& t) {
  auto out = open_out(path);
  if (!t.meta.is_null()) out << "# " << t.meta.dump() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      if (t.meta.is_null() && t.columns.empty()) {
        try {
          t.meta = json::parse(line.substr(1));
        } catch (const json::parse_error&) {
          // a plain comment line
        }
      }
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != t.columns.size()) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(t.columns.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      const double x = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
      }
      row.push_back(x);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ConfigError("'" + path.string() + "' has no header row");
  return t;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

void write_profile_csv(const std::filesystem::path& path, const ShockProfile& p,
                       const json& meta, std::size_t max_rows) {
  const auto xi = p.xi_samples();
  const auto V = p.V_samples();
  const auto dV = p.dV_samples();
  const std::size_t n = xi.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + max_rows - 1) / std::max<std::size_t>(max_rows, 1));
  CsvTable t;
  t.meta = meta;
  t.meta["sample_stride"] = stride;
  t.meta["samples"] = n;
  t.columns = {"xi", "V", "U", "dV"};
  for (std::size_t i = 0; i < n; i += stride) {
    t.rows.push_back({xi[i], V[i], p.u_minus - p.s * (V[i] - p.v_minus), dV[i]});
  }
  if ((n - 1) % stride != 0) {
    t.rows.push_back({xi[n - 1], V[n - 1], p.u_minus - p.s * (V[n - 1] - p.v_minus), dV[n - 1]});
  }
  write_csv(path, t);
}

void write_initial_data_csv(const std::filesystem::path& path, const PerturbationSetup& s) {
  CsvTable t;
  t.meta = {{"sigma", s.sigma},   {"sigma_seed", s.sigma_seed}, {"beta", s.beta},
            {"L", s.grid.L},      {"N", s.grid.N},              {"osc_v0", s.osc_v0},
            {"exponents", {{"l", s.exponents.l}, {"alpha", s.exponents.alpha},
                           {"kappa", s.exponents.kappa}, {"h", s.exponents.h},
                           {"delta", s.exponents.delta}}},
            {"implied_h", std::isfinite(s.implied_h) ? json(s.implied_h) : json(nullptr)}};
  t.columns = {"xi", "v0", "u0", "phi0", "psi0"};
  for (std::size_t j = 0; j < s.v0.size(); ++j) {
    t.rows.push_back({s.grid.xi(j), s.v0[j], s.u0[j], s.phi0[j], s.psi0[j]});
  }
  write_csv(path, t);
}

ImportedData read_initial_data_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  auto pick = [&](const char* a, const char* b) {
    for (const auto& c : t.columns) {
      if (c == a) return t.values(a);
    }
    return t.values(b);
  };
  ImportedData d;
  d.xi = t.values("xi");
  d.v = pick("v", "v0");
  d.u = pick("u", "u0");
  const std::size_t n = d.xi.size();
  if (n < 3) throw ConfigError("initial data need at least 3 nodes");
  if (d.xi.front() != 0.0) throw ConfigError("initial data must start at xi = 0");
  const double dx = d.xi.back() / double(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(d.xi[j] - double(j) * dx) > 1e-9 * std::max(1.0, d.xi.back())) {
      throw ConfigError("initial data abscissae are not uniform");
    }
  }
  return d;
}

void write_snapshot_csv(const std::filesystem::path& path, const SimState& s) {
  CsvTable t;
  t.meta = {{"t", s.t}, {"sigma", s.sigma}, {"beta", s.beta}};
  t.columns = {"xi", "v", "u"};
  t.rows.reserve(s.v.size());
  for (std::size_t j = 0; j < s.v.size(); ++j) t.rows.push_back({s.grid.xi(j), s.v[j], s.u[j]});
  write_csv(path, t);
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagnosticsRecord> records) {
  auto out = open_out(path);
  const auto cols = diagnostics_columns();
  out << "# columns:";
  for (const auto& c : cols) out << ' ' << c;
  out << '\n';
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    const auto vals = record_values(r);
    for (std::size_t i = 0; i < vals.size(); ++i) out << (i ? "," : "") << format_double(vals[i]);
    out << '\n';
  }
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

}  // namespace inflow
