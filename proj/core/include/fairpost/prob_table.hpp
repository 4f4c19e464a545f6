#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fairpost/criterion.hpp"

namespace fairpost {

/// Per-instance probabilities from auxiliary models: p_y estimates
/// p(Y=1|X); per criterion component, p_a/p_b estimate the membership
/// probability of the component's two group events (conditionals for DP,
/// joint probabilities for EOp/EO).  The marginal model and the joint model
/// need not agree.
struct ProbTable {
  std::size_t n = 0;
  std::vector<double> p_y;
  std::vector<std::vector<double>> p_a;  // K columns, each length n
  std::vector<std::vector<double>> p_b;

  std::size_t K() const { return p_a.size(); }
  void validate() const;
};

/// Reads columns p_y and p_a<name>/p_b<name> for each criterion component.
ProbTable load_probs(const std::string& path, const CriterionSpec& criterion);
void save_probs(const std::string& path, const ProbTable& table,
                const CriterionSpec& criterion);

}  // namespace fairpost
