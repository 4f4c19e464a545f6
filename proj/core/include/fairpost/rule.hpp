#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fairpost {

/// How a rule was fitted, plus the validation metrics measured at fit time.
struct RuleProvenance {
  std::string algorithm;  // "threshold", "pairs", "directions", "dual", ...
  double delta = 0.0;
  std::uint64_t seed = 0;
  bool feasible = true;
  double val_accuracy = 0.0;
  double val_cc = 0.0;
  std::int64_t val_flips = 0;
};

/// Linear modification rule: flip the base prediction iff z . s(x) > 1
/// (strict).  A single-score threshold t is stored as z = (1/t); a negative
/// t then flips scores below t.
struct ModificationRule {
  std::vector<double> z;
  RuleProvenance provenance;

  std::size_t K() const { return z.size(); }
  void validate() const;

  /// Flip decision for one score vector (length K).
  bool flips(const double* s) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) acc += z[k] * s[k];
    return acc > 1.0;
  }
};

void save_rule(const std::string& path, const ModificationRule& rule);
ModificationRule load_rule(const std::string& path);

}  // namespace fairpost
