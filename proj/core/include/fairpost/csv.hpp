#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairpost {

/// Error raised while reading a delimited file; the message names the
/// offending row/column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comma-delimited table with a header row.  Cells are kept as raw strings;
/// callers convert via parse_double / parse_binary.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t n_rows() const { return rows.size(); }

  /// Index of a named column; throws ParseError if absent.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// Writes header + rows; numeric cells must already be formatted.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

/// Full-string double parse; `where` names the row/column in errors.
double parse_double(const std::string& cell, const std::string& where);

/// Parses "0" or "1" (also accepts 0.0/1.0 forms); anything else throws.
int parse_binary(const std::string& cell, const std::string& where);

}  // namespace fairpost
