#include "fairpost/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace fairpost {

std::int64_t Predictions::flip_count() const {
  std::int64_t c = 0;
  for (auto v : flip) c += v;
  return c;
}

Predictions apply_rule(const ModificationRule& rule, const BiasScores& scores) {
  rule.validate();
  if (rule.K() != scores.K) {
    throw std::invalid_argument("apply_rule: rule dimension " +
                                std::to_string(rule.K()) +
                                " does not match scores K=" +
                                std::to_string(scores.K));
  }
  Predictions out;
  out.pred.resize(scores.n);
  out.flip.resize(scores.n);
  for (std::size_t i = 0; i < scores.n; ++i) {
    const bool flip = rule.flips(&scores.s[i * scores.K]);
    out.flip[i] = flip ? 1 : 0;
    out.pred[i] = flip ? static_cast<std::uint8_t>(1 - scores.yhat[i])
                       : scores.yhat[i];
  }
  return out;
}

double accuracy(const std::vector<std::uint8_t>& predictions,
                const std::vector<std::uint8_t>& labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("accuracy: length mismatch");
  }
  if (predictions.empty()) {
    throw std::invalid_argument("accuracy: empty input");
  }
  std::int64_t agree = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    agree += predictions[i] == labels[i];
  }
  return static_cast<double>(agree) / static_cast<double>(predictions.size());
}

double signed_disparity(const std::vector<std::uint8_t>& predictions,
                        const LabeledDataset& ds,
                        const CriterionComponent& component) {
  if (predictions.size() != ds.n) {
    throw std::invalid_argument("signed_disparity: length mismatch");
  }
  std::int64_t n_a = 0, n_b = 0, pos_a = 0, pos_b = 0;
  for (std::size_t i = 0; i < ds.n; ++i) {
    switch (component.side_of(ds, i)) {
      case Side::a:
        ++n_a;
        pos_a += predictions[i];
        break;
      case Side::b:
        ++n_b;
        pos_b += predictions[i];
        break;
      case Side::neither:
        break;
    }
  }
  if (n_a == 0 || n_b == 0) {
    throw std::runtime_error("signed_disparity: component '" + component.name +
                             "' has an empty group");
  }
  return static_cast<double>(pos_a) / static_cast<double>(n_a) -
         static_cast<double>(pos_b) / static_cast<double>(n_b);
}

EvalReport composite(const std::vector<std::uint8_t>& predictions,
                     const LabeledDataset& ds, const CriterionSpec& criterion) {
  EvalReport report;
  report.accuracy = accuracy(predictions, ds.labels);
  report.disparities.reserve(criterion.K());
  for (const auto& c : criterion.components) {
    report.disparities.push_back(signed_disparity(predictions, ds, c));
  }
  report.cc = 0.0;
  for (double d : report.disparities) {
    report.cc = std::max(report.cc, std::abs(d));
  }
  return report;
}

EvalReport composite(const Predictions& predictions, const LabeledDataset& ds,
                     const CriterionSpec& criterion) {
  EvalReport report = composite(predictions.pred, ds, criterion);
  report.flip_count = predictions.flip_count();
  return report;
}

std::vector<double> empirical_group_functions(
    const std::vector<std::uint8_t>& yhat, const LabeledDataset& ds,
    const CriterionSpec& criterion) {
  if (yhat.size() != ds.n) {
    throw std::invalid_argument("empirical_group_functions: length mismatch");
  }
  const std::size_t K = criterion.K();
  std::vector<double> f(ds.n * K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& c = criterion.components[k];
    std::int64_t n_a = 0, n_b = 0;
    std::vector<Side> side(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) {
      side[i] = c.side_of(ds, i);
      n_a += side[i] == Side::a;
      n_b += side[i] == Side::b;
    }
    if (n_a == 0 || n_b == 0) {
      throw std::runtime_error("empirical_group_functions: component '" +
                               c.name + "' has an empty group");
    }
    const double inv_pa = static_cast<double>(ds.n) / static_cast<double>(n_a);
    const double inv_pb = static_cast<double>(ds.n) / static_cast<double>(n_b);
    for (std::size_t i = 0; i < ds.n; ++i) {
      const double sign = yhat[i] ? 1.0 : -1.0;
      double g = 0.0;
      if (side[i] == Side::a) g = inv_pa;
      if (side[i] == Side::b) g = -inv_pb;
      f[i * K + k] = sign * g;
    }
  }
  return f;
}

}  // namespace fairpost
