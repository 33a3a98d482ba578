#include "pairbounds/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pairbounds/error.hpp"
#include "pairbounds/random.hpp"

namespace pairbounds {

nlohmann::json Provenance::to_json() const {
  return {{"config_hash", config_hash}, {"seed", seed}, {"generator", generator}, {"version", version}};
}

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Provenance make_provenance(const nlohmann::json& config, std::uint64_t seed) {
  return {config_hash(config), seed, std::string(kGeneratorId), PAIRBOUNDS_VERSION};
}

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw Error(Errc::ConfigError, "unknown report format '" + name + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double round_significant(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

namespace {

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(std::int64_t v) const { return v; }
    nlohmann::json operator()(double v) const {
      if (!std::isfinite(v)) return format_number(v);
      return round_significant(v);
    }
    nlohmann::json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

void check_table(const Table& table) {
  if (table.rows.empty()) throw Error(Errc::BadParams, "no results to report");
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw Error(Errc::InvariantViolation, "row width differs from header");
  }
}

}  // namespace

std::string render_csv(const Table& table, const Provenance& provenance) {
  check_table(table);
  std::ostringstream out;
  out << "# config_hash=" << provenance.config_hash << '\n'
      << "# seed=" << provenance.seed << '\n'
      << "# generator=" << provenance.generator << '\n'
      << "# version=" << provenance.version << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  return out.str();
}

nlohmann::json render_json(const Table& table, const Provenance& provenance) {
  check_table(table);
  nlohmann::json j;
  j["columns"] = table.columns;
  j["provenance"] = provenance.to_json();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

void emit_report(const Table& table, ReportFormat format, const std::string& path, const Provenance& provenance) {
  const std::string body =
      format == ReportFormat::Csv ? render_csv(table, provenance) : render_json(table, provenance).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << body;
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

nlohmann::json canonicalize_numbers(const nlohmann::json& j) {
  if (j.is_number_float()) return round_significant(j.get<double>());
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(canonicalize_numbers(v));
    return out;
  }
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = canonicalize_numbers(it.value());
    return out;
  }
  return j;
}

}  // namespace pairbounds
