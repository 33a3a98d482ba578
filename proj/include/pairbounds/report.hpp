#ifndef PAIRBOUNDS_REPORT_HPP
#define PAIRBOUNDS_REPORT_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace pairbounds {

/// What every artifact records so a rerun can be matched to its inputs.
struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string generator;
  std::string version;

  nlohmann::json to_json() const;
};

/// FNV-1a 64 of the compact JSON dump, as 16 hex digits. nlohmann::json
/// objects keep keys sorted, so equal configs hash equally.
std::string config_hash(const nlohmann::json& config);

Provenance make_provenance(const nlohmann::json& config, std::uint64_t seed);

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

/// Rows of named columns; column order is part of the output format.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class ReportFormat { Csv, Json };

ReportFormat report_format_from_name(const std::string& name);

/// %.10g, with "nan", "inf", "-inf" spelled out.
std::string format_number(double v);

/// The double nearest to format_number(v); what JSON reports store.
double round_significant(double v);

/// Provenance as leading "# key=value" lines, then a header row and one
/// line per row. Empty cells stay empty.
std::string render_csv(const Table& table, const Provenance& provenance);

/// {"columns": [...], "provenance": {...}, "rows": [{column: value}]}, keys
/// sorted, numbers rounded to 10 significant digits.
nlohmann::json render_json(const Table& table, const Provenance& provenance);

/// Writes the table to `path`. Throws BadParams for an empty table, IoError
/// when the file cannot be written.
void emit_report(const Table& table, ReportFormat format, const std::string& path, const Provenance& provenance);

/// Recursively rounds every floating-point number in `j` to 10 significant
/// digits.
nlohmann::json canonicalize_numbers(const nlohmann::json& j);

}  // namespace pairbounds

#endif  // PAIRBOUNDS_REPORT_HPP
