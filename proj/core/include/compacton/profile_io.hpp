#pragma once

// CSV and JSON sidecar formats for sampled profiles.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "compacton/profiles.hpp"

namespace compacton {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);
/// Strict parse of a full token (accepts "inf", "-inf", "nan").
bool parse_double(std::string_view token, double& out);

struct ProfileManifest {
  std::string kind;  // "compacton", "periodic" or "nls"
  ModelParams params;
  double v = 0.0;
  double half_width = 0.0;  // half period for periodic profiles
  std::size_t n = 0;
};

/// Sidecar path: same stem with a .json extension.
std::filesystem::path manifest_path(const std::filesystem::path& csv);

void write_profile_csv(const std::filesystem::path& path, const CompactonProfile& profile);
void write_periodic_csv(const std::filesystem::path& path, const PeriodicProfile& profile);
void write_nls_csv(const std::filesystem::path& path, const NlsProfile& profile);

ProfileManifest read_manifest(const std::filesystem::path& path);

/// Numeric table with a header row.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  const std::vector<double>& row(std::size_t i) const { return rows[i]; }
  std::vector<double> column(std::string_view name) const;
};

/// Reads a numeric CSV; throws InvalidInput with row/column on malformed input.
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Reconstructs a compacton profile from `x,phi,dphi` (or the NLS layout)
/// plus its sidecar manifest.
CompactonProfile read_profile(const std::filesystem::path& csv);

}  // namespace compacton
