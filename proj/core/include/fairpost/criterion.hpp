#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairpost/dataset.hpp"

namespace fairpost {

enum class Side { a, b, neither };

/// Conjunction of equality conditions on the label and/or named binary
/// attributes; defines one group event such as {A=0} or {A=1, Y=1}.
struct GroupEvent {
  std::optional<int> label;
  std::vector<std::pair<std::string, int>> attrs;

  bool matches(const LabeledDataset& ds, std::size_t row) const;
  std::string describe() const;
};

struct CriterionComponent {
  std::string name;
  GroupEvent event_a;
  GroupEvent event_b;
  double prior_a = 0.0;
  double prior_b = 0.0;

  Side side_of(const LabeledDataset& ds, std::size_t row) const;
};

enum class CriterionKind { dp, eop, eo, custom };

/// A composite fairness criterion: K pairs of group events whose positive-rate
/// gaps are each constrained.  DP and EOp have K=1; EO has K=2 with components
/// keyed by the label value.
struct CriterionSpec {
  CriterionKind kind = CriterionKind::custom;
  std::vector<CriterionComponent> components;

  std::size_t K() const { return components.size(); }
  void validate() const;
  bool priors_set() const;

  static CriterionSpec demographic_parity(const std::string& attr);
  static CriterionSpec equalized_opportunity(const std::string& attr);
  static CriterionSpec equalized_odds(const std::string& attr);
};

CriterionKind parse_criterion_kind(const std::string& name);
std::string criterion_kind_name(CriterionKind kind);
CriterionSpec make_criterion(CriterionKind kind, const std::string& attr);

/// Fills component priors with empirical group frequencies from `ds`.
/// Throws if any group event has no members.
CriterionSpec estimate_priors(const LabeledDataset& ds,
                              const CriterionSpec& spec);

}  // namespace fairpost
