#include "fairpost/prob_table.hpp"

#include <sstream>

#include "fairpost/csv.hpp"

namespace fairpost {

namespace {

void check_unit_interval(double v, const std::string& where) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << "probability out of [0,1] at " << where << ": " << v;
    throw ParseError(msg.str());
  }
}

}  // namespace

void ProbTable::validate() const {
  if (p_b.size() != p_a.size()) {
    throw ParseError("prob table has mismatched p_a/p_b arity");
  }
  if (p_y.size() != n) throw ParseError("prob table p_y length != n");
  for (std::size_t i = 0; i < n; ++i) {
    check_unit_interval(p_y[i], "p_y row " + std::to_string(i + 1));
  }
  for (std::size_t k = 0; k < p_a.size(); ++k) {
    if (p_a[k].size() != n || p_b[k].size() != n) {
      throw ParseError("prob table component " + std::to_string(k) +
                       " column length != n");
    }
    for (std::size_t i = 0; i < n; ++i) {
      check_unit_interval(p_a[k][i],
                          "p_a" + std::to_string(k) + " row " + std::to_string(i + 1));
      check_unit_interval(p_b[k][i],
                          "p_b" + std::to_string(k) + " row " + std::to_string(i + 1));
    }
  }
}

ProbTable load_probs(const std::string& path, const CriterionSpec& criterion) {
  const CsvTable table = read_csv(path);
  ProbTable probs;
  probs.n = table.n_rows();
  const std::size_t py_col = table.column("p_y");
  std::vector<std::size_t> a_cols, b_cols;
  for (const auto& c : criterion.components) {
    a_cols.push_back(table.column("p_a" + c.name));
    b_cols.push_back(table.column("p_b" + c.name));
  }
  probs.p_y.reserve(probs.n);
  probs.p_a.assign(criterion.K(), {});
  probs.p_b.assign(criterion.K(), {});
  for (auto& col : probs.p_a) col.reserve(probs.n);
  for (auto& col : probs.p_b) col.reserve(probs.n);

  for (std::size_t i = 0; i < probs.n; ++i) {
    const auto& row = table.rows[i];
    auto where = [&](const std::string& col) {
      return path + ": row " + std::to_string(i + 1) + ", column '" + col + "'";
    };
    probs.p_y.push_back(parse_double(row[py_col], where("p_y")));
    for (std::size_t k = 0; k < criterion.K(); ++k) {
      probs.p_a[k].push_back(
          parse_double(row[a_cols[k]], where("p_a" + criterion.components[k].name)));
      probs.p_b[k].push_back(
          parse_double(row[b_cols[k]], where("p_b" + criterion.components[k].name)));
    }
  }
  probs.validate();
  return probs;
}

void save_probs(const std::string& path, const ProbTable& table,
                const CriterionSpec& criterion) {
  if (table.K() != criterion.K()) {
    throw ParseError("prob table arity does not match criterion");
  }
  std::vector<std::string> header{"p_y"};
  for (const auto& c : criterion.components) {
    header.push_back("p_a" + c.name);
    header.push_back("p_b" + c.name);
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.n);
  for (std::size_t i = 0; i < table.n; ++i) {
    std::vector<std::string> row;
    row.push_back(format_double(table.p_y[i]));
    for (std::size_t k = 0; k < table.K(); ++k) {
      row.push_back(format_double(table.p_a[k][i]));
      row.push_back(format_double(table.p_b[k][i]));
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace fairpost
