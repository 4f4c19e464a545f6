#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fairpost {

/// Which columns of a delimited file hold the label, the binary sensitive
/// attributes, and (optionally) real-valued features.  When `features_rest`
/// is set, every column not otherwise claimed is read as a feature.
struct DatasetSchema {
  std::string label;
  std::vector<std::string> attributes;
  std::vector<std::string> features;
  bool features_rest = false;
};

/// Immutable labeled sample: binary labels, named binary attributes, and an
/// optional row-major feature matrix.  Multi-valued attributes must be
/// pre-encoded as indicator columns.
struct LabeledDataset {
  std::size_t n = 0;
  std::vector<std::uint8_t> labels;
  std::vector<std::string> attribute_names;
  std::vector<std::vector<std::uint8_t>> attribute_values;  // per name, length n
  std::vector<std::string> feature_names;
  std::size_t feature_dim = 0;
  std::vector<double> features;  // row-major n x feature_dim

  const std::vector<std::uint8_t>& attribute(const std::string& name) const;
  bool has_attribute(const std::string& name) const;
  double feature(std::size_t row, std::size_t j) const {
    return features[row * feature_dim + j];
  }
};

LabeledDataset load_labeled(const std::string& path, const DatasetSchema& schema);
void save_labeled(const std::string& path, const LabeledDataset& ds);

}  // namespace fairpost
