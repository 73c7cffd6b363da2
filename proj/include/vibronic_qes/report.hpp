#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace vibronic_qes::report {

using Cell = std::variant<std::int64_t, double, bool, std::string>;

/// Output of one CLI command: a rectangular table plus run metadata.
struct Table {
  std::string command;
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> warnings;
  bool ok = true;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add_row: wrong number of cells");
    rows.push_back(std::move(row));
  }

  friend bool operator==(const Table&, const Table&) = default;
};

inline constexpr int kSchemaVersion = 1;

inline std::string format_double(double x, int digits) {
  char buf[64];
  if (x == 0.0) x = 0.0;  // print -0 as 0
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

inline std::string format_cell(const Cell& c, int digits) {
  return std::visit(
      [digits](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>)
          return format_double(x, digits);
        else if constexpr (std::is_same_v<T, bool>)
          return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::int64_t>)
          return std::to_string(x);
        else
          return x;
      },
      c);
}

/// Aligned text table, 6 significant digits.
inline std::string to_text(const Table& t) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(t.columns);
  for (const auto& r : t.rows) {
    std::vector<std::string> line;
    for (const auto& c : r) line.push_back(format_cell(c, 6));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());

  std::ostringstream os;
  os << "# " << t.command;
  for (const auto& [k, v] : t.meta) os << "  " << k << "=" << format_cell(v, 6);
  os << "\n";
  for (std::size_t l = 0; l < cells.size(); ++l) {
    for (std::size_t i = 0; i < cells[l].size(); ++i) {
      os << (i ? "  " : "") << cells[l][i];
      if (i + 1 < cells[l].size()) os << std::string(width[i] - cells[l][i].size(), ' ');
    }
    os << "\n";
    if (l == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      os << std::string(total > 2 ? total - 2 : 0, '-') << "\n";
    }
  }
  for (const auto& w : t.warnings) os << "warning: " << w << "\n";
  os << (t.ok ? "status: ok" : "status: FAILED") << "\n";
  return os.str();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// Header row plus data rows, comma separated, 17 significant digits.
/// Warnings are not part of the CSV stream.
inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(format_cell(r[i], 17));
    os << "\n";
  }
  return os.str();
}

/// Splits CSV text into fields, honouring double-quoted fields.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      out.push_back(std::move(row));
      row.clear();
    } else {
      field += ch;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    out.push_back(std::move(row));
  }
  return out;
}

inline nlohmann::json cell_to_json(const Cell& c) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, c);
}

inline Cell cell_from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::invalid_argument("report: unsupported JSON cell type");
}

inline nlohmann::json to_json(const Table& t) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["command"] = t.command;
  j["ok"] = t.ok;
  nlohmann::json meta = nlohmann::json::array();
  for (const auto& [k, v] : t.meta) meta.push_back({{"key", k}, {"value", cell_to_json(v)}});
  j["meta"] = std::move(meta);
  j["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : r) row.push_back(cell_to_json(c));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["warnings"] = t.warnings;
  return j;
}

inline Table from_json(const nlohmann::json& j) {
  if (j.at("schema").get<int>() != kSchemaVersion) throw std::invalid_argument("report: unsupported schema version");
  Table t;
  t.command = j.at("command").get<std::string>();
  t.ok = j.at("ok").get<bool>();
  for (const auto& m : j.at("meta")) t.meta.emplace_back(m.at("key").get<std::string>(), cell_from_json(m.at("value")));
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) row.push_back(cell_from_json(c));
    t.rows.push_back(std::move(row));
  }
  t.warnings = j.at("warnings").get<std::vector<std::string>>();
  return t;
}

}  // namespace vibronic_qes::report
