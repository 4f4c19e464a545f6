#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairpost/criterion.hpp"
#include "fairpost/prob_table.hpp"

namespace fairpost {

inline constexpr double kDefaultEtaFloor = 1e-12;

/// Per-instance base predictions, clamped confidences, group functions and
/// bias scores.  f is kept alongside s because the exact LP operates on
/// (eta, f) rather than on s.
struct BiasScores {
  std::size_t n = 0;
  std::size_t K = 0;
  std::vector<std::uint8_t> yhat;
  std::vector<double> eta;
  std::vector<double> s;  // row-major n x K
  std::vector<double> f;  // row-major n x K

  double score(std::size_t i, std::size_t k) const { return s[i * K + k]; }
  double group_fn(std::size_t i, std::size_t k) const { return f[i * K + k]; }
};

/// Base prediction 1{p_y > 0.5}, strict at the boundary.
int base_prediction(double p_y);

/// Confidence of the base prediction, max(|2 p_y - 1|, eta_floor).
double confidence(double p_y, double eta_floor);

/// Signed group function (2 yhat - 1) * (p_a/prior_a - p_b/prior_b).
double group_function(int yhat, double p_a, double p_b, double prior_a,
                      double prior_b);

BiasScores bias_scores(const ProbTable& probs, const CriterionSpec& criterion,
                       double eta_floor = kDefaultEtaFloor);

/// Adds independent Unif(-alpha, 2 alpha) noise to every stored probability
/// and clips back to [0,1].  Deterministic for a fixed seed.
ProbTable corrupt(const ProbTable& probs, double alpha, std::uint64_t seed);

void save_scores(const std::string& path, const BiasScores& scores);
BiasScores load_scores(const std::string& path);

}  // namespace fairpost
