#pragma once

// File formats. CSV files start with an optional "# {json}" metadata line,
// then a header row; numbers are written with %.17g so files round-trip.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "inflow/diagnostics.hpp"
#include "inflow/inflow_solver.hpp"
#include "inflow/perturbation.hpp"
#include "inflow/wave_profiles.hpp"

namespace inflow {

struct CsvTable {
  nlohmann::json meta;  // null when the file has no metadata line
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws ConfigError when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& t);
CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// xi, V, U, dV. Keeps every k-th sample so at most max_rows are written.
void write_profile_csv(const std::filesystem::path& path, const ShockProfile& p,
                       const nlohmann::json& meta, std::size_t max_rows = 20000);

/// xi, v0, u0, phi0, psi0 on the grid, with sigma and beta in the metadata.
void write_initial_data_csv(const std::filesystem::path& path, const PerturbationSetup& s);

struct ImportedData {
  std::vector<double> xi, v, u;
};
/// Reads the xi, v, u columns (v0/u0 also accepted). The abscissae must be
/// uniform starting at 0.
ImportedData read_initial_data_csv(const std::filesystem::path& path);

/// xi, v, u of one snapshot.
void write_snapshot_csv(const std::filesystem::path& path, const SimState& s);

/// One row per record in diagnostics_columns() order, preceded by a comment
/// line naming the columns.
void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagnosticsRecord> records);

std::string format_double(double x);

}  // namespace inflow
