#include "fairpost/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fairpost {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return j;
  }
  throw ParseError("missing column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file '" + path + "'");
  table.header = split_line(line);
  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row_index;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      std::ostringstream msg;
      msg << path << ": row " << row_index << " has " << cells.size()
          << " cells, expected " << table.header.size();
      throw ParseError(msg.str());
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file '" + path + "'");
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out << ',';
    out << header[j];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  }
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& cell, const std::string& where) {
  double v{};
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last) {
    throw ParseError("invalid number '" + cell + "' at " + where);
  }
  return v;
}

int parse_binary(const std::string& cell, const std::string& where) {
  const double v = parse_double(cell, where);
  if (v == 0.0) return 0;
  if (v == 1.0) return 1;
  throw ParseError("expected binary 0/1 value, got '" + cell + "' at " + where);
}

}  // namespace fairpost
