#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qprecon {

using Cell = std::variant<long, double, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// 17 significant digits, shortest form that round-trips.
std::string format_double(double x);
std::string format_cell(const Cell& c);

// Comment lines are written first, each prefixed with "# ".
std::string to_csv(const Table& t, const std::vector<std::string>& comments = {});
// Skips '#' lines; integers, then doubles, then text.
Table parse_csv(const std::string& text, const std::string& name = "");

nlohmann::json to_json(const Table& t);
Table table_from_json(const nlohmann::json& j);

// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

std::string utc_timestamp();

enum class ReportFormat { csv, json };

// Writes dir/name.csv or dir/name.json and returns the path. Empty tables and
// unwritable paths throw.
std::string emit_report(const Table& t, ReportFormat format, const std::string& dir,
                        const std::vector<std::string>& comments = {}, const nlohmann::json& meta = {});

}  // namespace qprecon
