#include "lab/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lab {

namespace {

// Orders cells of equal position; numbers compare numerically across int/double.
bool cell_less(const Cell& a, const Cell& b) {
  auto as_number = [](const Cell& c, double& out) {
    if (auto i = std::get_if<std::int64_t>(&c)) {
      out = static_cast<double>(*i);
      return true;
    }
    if (auto d = std::get_if<double>(&c)) {
      out = *d;
      return true;
    }
    return false;
  };
  double x, y;
  if (as_number(a, x) && as_number(b, y)) return x < y;
  return a < b;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void Table::add(std::vector<Cell> cells) {
  if (cells.size() != header.size()) throw std::logic_error("row width does not match header");
  rows.push_back({std::move(cells)});
}

void Table::sort() {
  const std::size_t k = std::min(key_columns, header.size());
  std::stable_sort(rows.begin(), rows.end(), [k](const Row& a, const Row& b) {
    for (std::size_t i = 0; i < k; ++i) {
      if (cell_less(a.cells[i], b.cells[i])) return true;
      if (cell_less(b.cells[i], a.cells[i])) return false;
    }
    return false;
  });
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cell(const Cell& c) {
  if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  return quote(std::get<std::string>(c));
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << quote(t.header[i]);
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.cells.size(); ++i) os << (i ? "," : "") << format_cell(r.cells[i]);
    os << '\n';
  }
}

void write_csv_file(const std::string& path, const Table& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(f, t);
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace lab
