#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairpost/criterion.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/rule.hpp"
#include "fairpost/scores.hpp"

namespace fairpost {

/// Discretized constrained-accuracy program on a finite sample:
///   minimize (1/n) sum_i eta_i kappa_i  over kappa in [0,1]^n
///   subject to |c_star_k - (1/n) sum_i kappa_i F_ik| <= delta for all k.
struct LpInstance {
  std::size_t n = 0;
  std::size_t K = 0;
  std::vector<double> eta;     // length n, strictly positive
  std::vector<double> f;       // row-major n x K
  std::vector<double> c_star;  // length K, baseline disparities
  double delta = 0.0;

  double f_at(std::size_t i, std::size_t k) const { return f[i * K + k]; }
  void validate() const;
};

enum class LpStatus { optimal, infeasible };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> kappa;  // possibly fractional
  double objective = 0.0;     // (1/n) sum eta_i kappa_i
  /// Nonnegative multipliers, length 2K: dual[k] pushes flips along +f_k,
  /// dual[K+k] along -f_k.  The signed rule weight is dual[k] - dual[K+k].
  std::vector<double> dual;

  std::vector<double> rule_weights() const;
};

/// Self-contained bounded-variable dense simplex (n variables, K ranged
/// rows).  Authoritative solution; returns a dual certificate.
LpSolution solve_primal(const LpInstance& inst);

struct DualSolution {
  std::vector<double> z;  // length 2K, nonnegative, split as in LpSolution
  double value = 0.0;     // equals the primal objective under strong duality
};

/// Independent maximization of the concave piecewise-linear dual; exact
/// (kink-vertex enumeration) for K <= 2 on small instances, subgradient
/// ascent with restarts otherwise.  Cross-check only; the primal rules.
DualSolution solve_dual(const LpInstance& inst);

struct BruteForceResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<std::uint8_t> kappa;
  double objective = 0.0;
};

/// Exhaustive minimum over deterministic flip vectors; n <= max_n.
BruteForceResult brute_force(const LpInstance& inst, std::size_t max_n = 20);

/// Converts the 2K dual multipliers into the signed K-weight linear rule on
/// scores s = f / eta.
ModificationRule rule_from_dual(const std::vector<double>& dual_2k,
                                double delta);

/// Instance with model-estimated group functions f, confidences eta, and the
/// given baseline disparities.
LpInstance lp_instance_from_scores(const BiasScores& scores,
                                   const std::vector<double>& c_star,
                                   double delta);

/// Baseline disparities implied by the score model: (1/n) sum_{yhat=1} f_ik.
std::vector<double> model_baseline_disparities(const BiasScores& scores);

/// Instance whose constraints mirror label-level evaluation exactly:
/// indicator-based group functions, empirical priors, and the base
/// classifier's measured disparities.  Any rule passing the empirical
/// criterion check is a feasible point of this program.
LpInstance empirical_lp_instance(const BiasScores& scores,
                                 const LabeledDataset& val,
                                 const CriterionSpec& criterion, double delta);

}  // namespace fairpost
