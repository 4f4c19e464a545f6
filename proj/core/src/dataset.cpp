#include "fairpost/dataset.hpp"

#include <algorithm>
#include <sstream>

#include "fairpost/csv.hpp"

namespace fairpost {

const std::vector<std::uint8_t>& LabeledDataset::attribute(
    const std::string& name) const {
  for (std::size_t j = 0; j < attribute_names.size(); ++j) {
    if (attribute_names[j] == name) return attribute_values[j];
  }
  throw ParseError("dataset has no attribute '" + name + "'");
}

bool LabeledDataset::has_attribute(const std::string& name) const {
  return std::find(attribute_names.begin(), attribute_names.end(), name) !=
         attribute_names.end();
}

LabeledDataset load_labeled(const std::string& path,
                            const DatasetSchema& schema) {
  const CsvTable table = read_csv(path);
  LabeledDataset ds;
  ds.n = table.n_rows();

  const std::size_t label_col = table.column(schema.label);
  std::vector<std::size_t> attr_cols;
  for (const auto& name : schema.attributes) {
    attr_cols.push_back(table.column(name));
    ds.attribute_names.push_back(name);
    ds.attribute_values.emplace_back();
    ds.attribute_values.back().reserve(ds.n);
  }

  std::vector<std::size_t> feat_cols;
  if (schema.features_rest) {
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (j == label_col) continue;
      if (std::find(attr_cols.begin(), attr_cols.end(), j) != attr_cols.end())
        continue;
      feat_cols.push_back(j);
      ds.feature_names.push_back(table.header[j]);
    }
  } else {
    for (const auto& name : schema.features) {
      feat_cols.push_back(table.column(name));
      ds.feature_names.push_back(name);
    }
  }
  ds.feature_dim = feat_cols.size();
  ds.features.reserve(ds.n * ds.feature_dim);
  ds.labels.reserve(ds.n);

  for (std::size_t i = 0; i < ds.n; ++i) {
    const auto& row = table.rows[i];
    auto where = [&](const std::string& col) {
      std::ostringstream s;
      s << path << ": row " << (i + 1) << ", column '" << col << "'";
      return s.str();
    };
    ds.labels.push_back(static_cast<std::uint8_t>(
        parse_binary(row[label_col], where(schema.label))));
    for (std::size_t a = 0; a < attr_cols.size(); ++a) {
      ds.attribute_values[a].push_back(static_cast<std::uint8_t>(
          parse_binary(row[attr_cols[a]], where(schema.attributes[a]))));
    }
    for (std::size_t f = 0; f < feat_cols.size(); ++f) {
      ds.features.push_back(
          parse_double(row[feat_cols[f]], where(ds.feature_names[f])));
    }
  }
  return ds;
}

void save_labeled(const std::string& path, const LabeledDataset& ds) {
  std::vector<std::string> header = ds.feature_names;
  header.push_back("Y");
  for (const auto& name : ds.attribute_names) header.push_back(name);

  std::vector<std::vector<std::string>> rows;
  rows.reserve(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) {
    std::vector<std::string> row;
    row.reserve(header.size());
    for (std::size_t j = 0; j < ds.feature_dim; ++j) {
      row.push_back(format_double(ds.feature(i, j)));
    }
    row.push_back(ds.labels[i] ? "1" : "0");
    for (const auto& col : ds.attribute_values) {
      row.push_back(col[i] ? "1" : "0");
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace fairpost
