#include "rdbp/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rdbp {
namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render(const CsvValue& v) {
  if (std::holds_alternative<double>(v)) return format_csv_double(std::get<double>(v));
  if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
  if (std::holds_alternative<std::string>(v)) return quote_if_needed(std::get<std::string>(v));
  return "";
}

}  // namespace

std::string format_csv_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.10g", v);
  return buf;
}

std::string emit_csv(const CsvTable& table) {
  std::string out = "schema_version";
  for (const auto& c : table.columns) out += "," + quote_if_needed(c);
  out += '\n';
  const std::string version = std::to_string(kCsvSchemaVersion);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("csv row " + std::to_string(r) + " has " +
                                  std::to_string(row.size()) + " fields, schema has " +
                                  std::to_string(table.columns.size()));
    }
    out += version;
    for (const auto& v : row) out += "," + render(v);
    out += '\n';
  }
  return out;
}

}  // namespace rdbp
