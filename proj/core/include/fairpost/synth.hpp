#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairpost/criterion.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/prob_table.hpp"

namespace fairpost {

/// One Gaussian cell of the synthetic (Y, A) mixture.
struct GaussianCell {
  std::array<double, 2> mean{};
  std::array<double, 4> cov{};  // row-major 2x2, symmetric positive-definite
  std::size_t count = 0;
};

/// Four-cell 2-D Gaussian mixture indexed by (y, a), with exact per-cell
/// sample counts.
struct GaussianMixtureSpec {
  std::array<std::array<GaussianCell, 2>, 2> cells;  // [y][a]

  const GaussianCell& cell(int y, int a) const { return cells[y][a]; }
  GaussianCell& cell(int y, int a) { return cells[y][a]; }
  std::size_t total_count() const;

  /// Counts rescaled proportionally (largest remainder) to sum to n.
  GaussianMixtureSpec scaled(std::size_t n) const;

  /// The correlated two-group benchmark mixture: overlapping class clouds
  /// with counts 500/100/100/500 so Y and A are strongly associated.
  static GaussianMixtureSpec default_spec();
};

/// Draws the exact per-cell counts, deterministically for a fixed seed.
/// Rows are grouped by cell in the order (1,0), (1,1), (0,0), (0,1); the
/// attribute column is named "A".
LabeledDataset sample(const GaussianMixtureSpec& spec, std::uint64_t seed);

/// Exact cell posteriors p(Y=y, A=a | x) for each row of X, as an n x 4
/// row-major matrix in class order 2y + a.
std::vector<double> cell_posteriors(const GaussianMixtureSpec& spec,
                                    std::span<const double> X, std::size_t n);

/// Exact posterior ProbTable for the criterion: joint cells for EOp/EO,
/// marginalized A-conditionals for DP; p_y is the Y=1 marginal.
ProbTable true_posteriors(const GaussianMixtureSpec& spec,
                          std::span<const double> X, std::size_t n,
                          const CriterionSpec& criterion);

struct SoftmaxHyper {
  double learning_rate = 0.1;
  std::size_t iterations = 5000;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

/// Multinomial logistic regression trained by full-batch gradient descent on
/// mean cross-entropy plus l2 * ||W||^2.  Weights are (d+1) x C with the
/// bias in the last row.
struct SoftmaxModel {
  std::size_t dim = 0;
  std::size_t C = 0;
  std::vector<double> W;  // row-major (dim+1) x C
  SoftmaxHyper hyper;
};

/// Class encoding 2Y + A for the joint auxiliary model.
std::vector<int> joint_class_labels(const LabeledDataset& ds,
                                    const std::string& attr);

SoftmaxModel fit_softmax(std::span<const double> X, std::size_t n,
                         std::size_t dim, const std::vector<int>& classes,
                         std::size_t C, const SoftmaxHyper& hyper);

/// Mean cross-entropy + l2 ||W||^2 and its analytic gradient; exposed so the
/// gradient can be verified against finite differences.
double softmax_loss_grad(std::span<const double> W, std::span<const double> X,
                         std::size_t n, std::size_t dim,
                         const std::vector<int>& classes, std::size_t C,
                         double l2, std::vector<double>* grad);

/// Softmax class probabilities, n x C row-major.
std::vector<double> softmax_probs(const SoftmaxModel& model,
                                  std::span<const double> X, std::size_t n);

/// Maps 4-class joint probabilities (class = 2Y + A) onto the criterion's
/// components; DP marginalizes over the label cells.
ProbTable predict_probs(const SoftmaxModel& model, std::span<const double> X,
                        std::size_t n, const CriterionSpec& criterion);

/// Shared cell-to-component mapping used by both the exact posteriors and
/// the trained model.
ProbTable prob_table_from_cells(std::span<const double> cells, std::size_t n,
                                const CriterionSpec& criterion);

}  // namespace fairpost
