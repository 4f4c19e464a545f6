#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fairpost/criterion.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/metrics.hpp"
#include "fairpost/rule.hpp"
#include "fairpost/scores.hpp"

namespace fairpost {

enum class FitMethod { threshold, pairs, directions };

FitMethod parse_fit_method(const std::string& name);
std::string fit_method_name(FitMethod method);

struct SearchParams {
  std::size_t M = 1000;       // subsample size for pair-line search
  std::size_t n_dirs = 64;    // directions for the projection search
  std::uint64_t seed = 0;
};

/// Threshold candidates for the two single-score families over `values`:
/// flip {v > t} with t > 0 and flip {v < t} with t < 0.  Candidates sit at
/// gap midpoints between consecutive distinct values (clipped at zero), so
/// boundary points stay a provable margin away from the rule's strict
/// inequality; entries are NaN where the gap is too narrow to place a
/// rounding-safe threshold.  `scale` is the largest |w . s| component sum the
/// derived rule will see.
struct ThresholdFamily {
  std::vector<double> pos_values;  // distinct positive values, descending
  std::vector<double> pos_t;       // candidate below each value (or NaN)
  std::vector<double> neg_values;  // distinct negative values, ascending
  std::vector<double> neg_t;
};
ThresholdFamily threshold_family(std::span<const double> values, double scale);

/// Single-score threshold fit: maximizes validation accuracy over the
/// threshold family (plus the no-flip rule) subject to the empirical
/// criterion <= delta.  Falls back to the criterion-minimizing candidate,
/// flagged infeasible, when nothing qualifies.
ModificationRule fit_threshold(const BiasScores& scores,
                               const LabeledDataset& val,
                               const CriterionSpec& criterion, double delta);

/// Pair-line fit in 2-D score space: enumerates the line through every pair
/// of (subsampled) score points and evaluates the rule z = n/c flipping the
/// origin-free side.  O(M^2 N).
ModificationRule fit_line_pairs(const BiasScores& scores,
                                const LabeledDataset& val,
                                const CriterionSpec& criterion, double delta,
                                std::size_t M, std::uint64_t seed);

/// Projection search: equiangular unit directions for K=2 (uniform sphere
/// samples for K>2), each swept with the threshold machinery and full
/// composite bookkeeping.  O(n_dirs N log N).
ModificationRule fit_directions(const BiasScores& scores,
                                const LabeledDataset& val,
                                const CriterionSpec& criterion, double delta,
                                std::size_t n_dirs, std::uint64_t seed);

struct FrontierPoint {
  double delta = 0.0;
  ModificationRule rule;
  EvalReport val_report;
  std::optional<EvalReport> test_report;
};

/// One fitted point per delta, sharing the candidate family (same seed and
/// subsample) across deltas; optionally evaluated on a test split.
std::vector<FrontierPoint> frontier(const BiasScores& val_scores,
                                    const LabeledDataset& val,
                                    const BiasScores* test_scores,
                                    const LabeledDataset* test,
                                    const CriterionSpec& criterion,
                                    const std::vector<double>& deltas,
                                    FitMethod method,
                                    const SearchParams& params);

/// Incremental sweep state exposed for verification: the counts maintained
/// while the candidate with weights `z` is current.
struct SweepState {
  std::vector<double> z;
  std::int64_t correct = 0;
  std::vector<std::int64_t> pos_a, pos_b;
  std::int64_t flips = 0;
};

/// Runs the single-score sweep and reports the bookkeeping at every
/// candidate, no-flip rule included.
void fit_threshold_trace(const BiasScores& scores, const LabeledDataset& val,
                         const CriterionSpec& criterion,
                         const std::function<void(const SweepState&)>& visit);

std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t m,
                                                    std::uint64_t seed);

std::vector<std::vector<double>> make_directions(std::size_t K,
                                                 std::size_t n_dirs,
                                                 std::uint64_t seed);

}  // namespace fairpost
