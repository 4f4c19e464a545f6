#pragma once

#include <cstdint>
#include <vector>

#include "fairpost/criterion.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/rule.hpp"
#include "fairpost/scores.hpp"

namespace fairpost {

/// Modified predictions plus the flip mask that produced them.
struct Predictions {
  std::vector<std::uint8_t> pred;
  std::vector<std::uint8_t> flip;

  std::int64_t flip_count() const;
};

/// Applies kappa(x) = 1{z . s(x) > 1} to the base predictions.
Predictions apply_rule(const ModificationRule& rule, const BiasScores& scores);

double accuracy(const std::vector<std::uint8_t>& predictions,
                const std::vector<std::uint8_t>& labels);

/// Signed gap of positive-prediction rates, Pr(pred=1 | in a) minus
/// Pr(pred=1 | in b), computed as conditional frequencies so the value never
/// depends on estimated priors.
double signed_disparity(const std::vector<std::uint8_t>& predictions,
                        const LabeledDataset& ds,
                        const CriterionComponent& component);

struct EvalReport {
  double accuracy = 0.0;
  std::vector<double> disparities;  // signed, one per component
  double cc = 0.0;                  // max_k |disparities[k]|
  std::int64_t flip_count = 0;
};

EvalReport composite(const std::vector<std::uint8_t>& predictions,
                     const LabeledDataset& ds, const CriterionSpec& criterion);
EvalReport composite(const Predictions& predictions, const LabeledDataset& ds,
                     const CriterionSpec& criterion);

/// Group function built from indicator attributes and empirical priors
/// instead of model probabilities; reconciles the conditional-frequency
/// disparities with the prior-weighted update identity, and supplies the F
/// matrix for label-exact LP instances.  Row-major n x K.
std::vector<double> empirical_group_functions(
    const std::vector<std::uint8_t>& yhat, const LabeledDataset& ds,
    const CriterionSpec& criterion);

}  // namespace fairpost
