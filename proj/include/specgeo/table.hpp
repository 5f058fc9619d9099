// Typed result tables with deterministic CSV serialization.
#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace specgeo {

using Cell = std::variant<double, long long, std::string>;

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Metadata travels to the JSON summary, not the CSV (the CSV stays
  // byte-stable across runs).
  std::string config_hash;
  std::string tool_version;
  double wall_time_s = 0.0;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
      throw std::invalid_argument("ResultTable: row arity mismatch in " + name);
    rows.push_back(std::move(row));
  }
};

inline std::string format_cell(const Cell& c) {
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  char buf[40];
  if (std::holds_alternative<long long>(c))
    std::snprintf(buf, sizeof(buf), "%lld", std::get<long long>(c));
  else
    std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(c));
  return buf;
}

inline void write_csv(const ResultTable& table, std::ostream& os) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_cell(row[i]);
    os << "\n";
  }
}

// FNV-1a, for tagging outputs with the config they came from.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace specgeo
