#include "compacton/profile_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "compacton/error.hpp"

namespace compacton {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view token, double& out) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
    token.remove_suffix(1);
  if (token.empty()) return false;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

fs::path manifest_path(const fs::path& csv) {
  fs::path out = csv;
  out.replace_extension(".json");
  return out;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw NumericalFailure("cannot open " + path.string() + " for writing");
  return out;
}

void write_manifest(const fs::path& csv, const ProfileManifest& m) {
  // Numbers are written through format_double so they round-trip exactly.
  std::ostringstream s;
  s << "{\n"
    << "  \"kind\": \"" << m.kind << "\",\n"
    << "  \"p\": " << format_double(m.params.p) << ",\n"
    << "  \"A\": " << format_double(m.params.A) << ",\n"
    << "  \"B\": " << format_double(m.params.B) << ",\n"
    << "  \"c\": " << format_double(m.params.c) << ",\n"
    << "  \"v\": " << format_double(m.v) << ",\n"
    << "  \"half_width\": " << format_double(m.half_width) << ",\n"
    << "  \"n\": " << m.n << "\n"
    << "}\n";
  auto out = open_out(manifest_path(csv));
  out << s.str();
}

void write_columns(const fs::path& path, const std::vector<std::string>& header,
                   const std::vector<const std::vector<double>*>& cols) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  const std::size_t n = cols.front()->size();
  std::string line;
  for (std::size_t i = 0; i < n; ++i) {
    line.clear();
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (j) line += ',';
      line += format_double((*cols[j])[i]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw NumericalFailure("write failed for " + path.string());
}

}  // namespace

void write_profile_csv(const fs::path& path, const CompactonProfile& profile) {
  write_columns(path, {"x", "phi", "dphi"}, {&profile.xs, &profile.phi, &profile.dphi});
  write_manifest(path, {"compacton", profile.params, 0.0, profile.half_width, profile.size()});
}

void write_periodic_csv(const fs::path& path, const PeriodicProfile& profile) {
  write_columns(path, {"x", "phi", "dphi"}, {&profile.xs, &profile.phi, &profile.dphi});
  write_manifest(path, {"periodic", profile.params, 0.0, 0.5 * profile.period, profile.xs.size()});
}

void write_nls_csv(const fs::path& path, const NlsProfile& profile) {
  write_columns(path, {"x", "phi", "theta", "re", "im"},
                {&profile.base.xs, &profile.base.phi, &profile.theta, &profile.re, &profile.im});
  write_manifest(path, {"nls", profile.base.params, profile.v, profile.base.half_width,
                        profile.base.size()});
}

ProfileManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("missing manifest " + path.string());
  json j;
  try {
    in >> j;
    ProfileManifest m;
    m.kind = j.value("kind", std::string("compacton"));
    m.params.p = j.at("p").get<double>();
    m.params.A = j.at("A").get<double>();
    m.params.B = j.at("B").get<double>();
    m.params.c = j.at("c").get<double>();
    m.v = j.value("v", 0.0);
    m.half_width = j.at("half_width").get<double>();
    m.n = j.at("n").get<std::size_t>();
    return m;
  } catch (const json::exception& e) {
    throw InvalidInput("malformed manifest " + path.string() + ": " + e.what());
  }
}

std::vector<double> CsvTable::column(std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] != name) continue;
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][j];
    return out;
  }
  throw InvalidInput("csv: no column named '" + std::string(name) + "'");
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path.string() + ": empty file (no header)");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      table.columns.push_back(cell);
    }
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::vector<double> values;
    std::size_t start = 0;
    std::size_t col = 0;
    while (true) {
      const std::size_t end = line.find(',', start);
      const std::string_view tok(line.data() + start,
                                 (end == std::string::npos ? line.size() : end) - start);
      ++col;
      double v;
      if (!parse_double(tok, v))
        throw InvalidInput(path.string() + ": row " + std::to_string(row) + ", column " +
                           std::to_string(col) + ": not a number '" + std::string(tok) + "'");
      values.push_back(v);
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (values.size() != table.columns.size())
      throw InvalidInput(path.string() + ": row " + std::to_string(row) + " has " +
                         std::to_string(values.size()) + " columns, expected " +
                         std::to_string(table.columns.size()));
    table.rows.push_back(std::move(values));
  }
  if (table.rows.empty()) throw InvalidInput(path.string() + ": no data rows");
  return table;
}

void write_csv(const fs::path& path, const CsvTable& table) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << table.columns[j];
  out << '\n';
  std::string line;
  for (const auto& r : table.rows) {
    line.clear();
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) line += ',';
      line += format_double(r[j]);
    }
    line += '\n';
    out << line;
  }
}

CompactonProfile read_profile(const fs::path& csv) {
  const auto table = read_csv(csv);
  const auto manifest = read_manifest(manifest_path(csv));
  if (manifest.kind == "periodic") throw InvalidInput(csv.string() + ": periodic profiles are not compactons");
  if (table.rows.size() != manifest.n)
    throw InvalidInput(csv.string() + ": manifest lists " + std::to_string(manifest.n) + " rows, file has " +
                       std::to_string(table.rows.size()));
  CompactonProfile out;
  out.params = manifest.params;
  out.half_width = manifest.half_width;
  out.xs = table.column("x");
  out.phi = table.column("phi");
  if (manifest.kind == "nls") {
    // dphi is not stored in the NLS layout; rebuild it from the first integral.
    out.dphi.assign(out.xs.size(), 0.0);
    for (std::size_t i = 0; i < out.xs.size(); ++i) {
      if (out.phi[i] > 0.0) {
        const double F = first_integral(out.phi[i], out.params);
        out.dphi[i] = out.xs[i] > 0.0 ? -std::sqrt(std::max(0.0, F)) : (out.xs[i] < 0.0 ? std::sqrt(std::max(0.0, F)) : 0.0);
      }
    }
  } else {
    out.dphi = table.column("dphi");
  }
  out.closed_form = out.params.A == 0.0 && (out.params.p == 4.0 || out.params.p == 2.0);
  for (std::size_t i = 1; i < out.xs.size(); ++i)
    if (!(out.xs[i] > out.xs[i - 1]))
      throw InvalidInput(csv.string() + ": row " + std::to_string(i + 2) + ": x is not increasing");
  if (out.xs.size() < 3) throw InvalidInput(csv.string() + ": need at least 3 samples");
  return out;
}

}  // namespace compacton
