#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace rdbp {

inline constexpr int kCsvSchemaVersion = 1;

/// A CSV cell; monostate renders as an empty field.
using CsvValue = std::variant<std::monostate, double, std::int64_t, std::string>;

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<CsvValue>> rows;
};

/// Floats with 10 significant digits ("0.5000000000").
std::string format_csv_double(double v);

/// Header plus rows, LF line endings, quoting only where RFC 4180 needs it.
/// A schema_version column is prepended. Throws if a row's width differs
/// from the header.
std::string emit_csv(const CsvTable& table);

}  // namespace rdbp
