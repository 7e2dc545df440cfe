#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace lab {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Row {
  std::vector<Cell> cells;
};

/// Rows are sorted on the first `key_columns` cells before writing.
struct Table {
  std::vector<std::string> header;
  std::size_t key_columns = 0;
  std::vector<Row> rows;

  void add(std::vector<Cell> cells);
  void sort();
};

/// 17 significant digits, "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double x);
std::string format_cell(const Cell& c);

void write_csv(std::ostream& os, const Table& t);
void write_csv_file(const std::string& path, const Table& t);

}  // namespace lab
