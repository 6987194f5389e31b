#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace slicecount::cli {

using Cell = std::variant<std::monostate, std::int64_t, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

// Decimal text of a double with 17 significant digits.
std::string format_double(double v);

// One '#'-prefixed line per header field, then the column line, then rows.
void write_csv(std::ostream& out, const nlohmann::ordered_json& header, const Table& table);

// {"header": ..., "rows": [{column: value, ...}, ...]}
nlohmann::ordered_json to_json(const nlohmann::ordered_json& header, const Table& table);

// Inverse of to_json for the rows part; integers and doubles keep their JSON kind.
Table table_from_json(const nlohmann::ordered_json& doc);

}  // namespace slicecount::cli
