#include "fairpost/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fairpost/rng.hpp"
#include "fairpost/scores.hpp"

namespace fairpost {

namespace {

struct Cholesky2 {
  double l00, l10, l11;
};

Cholesky2 cholesky2(const std::array<double, 4>& cov) {
  const double a = cov[0], b = cov[1], c = cov[2], d = cov[3];
  if (std::abs(b - c) > 1e-12 * std::max(std::abs(b), 1.0)) {
    throw std::invalid_argument("covariance must be symmetric");
  }
  if (!(a > 0.0)) throw std::invalid_argument("covariance is not SPD");
  const double l00 = std::sqrt(a);
  const double l10 = b / l00;
  const double rest = d - l10 * l10;
  if (!(rest > 0.0)) throw std::invalid_argument("covariance is not SPD");
  return {l00, l10, std::sqrt(rest)};
}

double log_gaussian2(const std::array<double, 2>& mean,
                     const std::array<double, 4>& cov, double x0, double x1) {
  const double a = cov[0], b = cov[1], d = cov[3];
  const double det = a * d - b * b;
  const double u0 = x0 - mean[0];
  const double u1 = x1 - mean[1];
  // Inverse of [[a,b],[b,d]] is [[d,-b],[-b,a]] / det.
  const double quad = (d * u0 * u0 - 2.0 * b * u0 * u1 + a * u1 * u1) / det;
  return -0.5 * quad - 0.5 * std::log(det) -
         std::log(2.0 * 3.14159265358979323846);
}

}  // namespace

std::size_t GaussianMixtureSpec::total_count() const {
  std::size_t total = 0;
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) total += cells[y][a].count;
  }
  return total;
}

GaussianMixtureSpec GaussianMixtureSpec::scaled(std::size_t n) const {
  const double total = static_cast<double>(total_count());
  if (total == 0.0) throw std::invalid_argument("mixture has no mass");
  GaussianMixtureSpec out = *this;
  struct Part {
    int y, a;
    std::size_t floor_count;
    double remainder;
  };
  std::vector<Part> parts;
  std::size_t assigned = 0;
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      const double exact = static_cast<double>(n) *
                           static_cast<double>(cells[y][a].count) / total;
      const auto fl = static_cast<std::size_t>(std::floor(exact));
      parts.push_back({y, a, fl, exact - std::floor(exact)});
      assigned += fl;
    }
  }
  std::stable_sort(parts.begin(), parts.end(), [](const Part& p, const Part& q) {
    return p.remainder > q.remainder;
  });
  for (auto& part : parts) {
    std::size_t c = part.floor_count;
    if (assigned < n) {
      ++c;
      ++assigned;
    }
    out.cells[part.y][part.a].count = c;
  }
  return out;
}

GaussianMixtureSpec GaussianMixtureSpec::default_spec() {
  GaussianMixtureSpec spec;
  const std::array<double, 4> cov{5.0, 1.0, 1.0, 5.0};
  spec.cell(1, 0) = {{2.0, 0.0}, cov, 500};
  spec.cell(1, 1) = {{2.0, 3.0}, cov, 100};
  spec.cell(0, 0) = {{-1.0, -3.0}, cov, 100};
  spec.cell(0, 1) = {{-1.0, 0.0}, cov, 500};
  return spec;
}

LabeledDataset sample(const GaussianMixtureSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset ds;
  ds.feature_names = {"x0", "x1"};
  ds.feature_dim = 2;
  ds.attribute_names = {"A"};
  ds.attribute_values.emplace_back();
  const int order[4][2] = {{1, 0}, {1, 1}, {0, 0}, {0, 1}};
  for (const auto& ya : order) {
    const GaussianCell& cell = spec.cell(ya[0], ya[1]);
    if (cell.count == 0) continue;
    const Cholesky2 L = cholesky2(cell.cov);
    for (std::size_t i = 0; i < cell.count; ++i) {
      double z0, z1;
      rng.normal_pair(z0, z1);
      ds.features.push_back(cell.mean[0] + L.l00 * z0);
      ds.features.push_back(cell.mean[1] + L.l10 * z0 + L.l11 * z1);
      ds.labels.push_back(static_cast<std::uint8_t>(ya[0]));
      ds.attribute_values[0].push_back(static_cast<std::uint8_t>(ya[1]));
    }
  }
  ds.n = ds.labels.size();
  return ds;
}

std::vector<double> cell_posteriors(const GaussianMixtureSpec& spec,
                                    std::span<const double> X, std::size_t n) {
  if (X.size() != 2 * n) {
    throw std::invalid_argument("cell_posteriors: X must be n x 2");
  }
  const double total = static_cast<double>(spec.total_count());
  std::array<double, 4> log_prior{};
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      const std::size_t c = spec.cell(y, a).count;
      log_prior[2 * y + a] =
          c == 0 ? -std::numeric_limits<double>::infinity()
                 : std::log(static_cast<double>(c) / total);
    }
  }
  std::vector<double> post(n * 4);
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = X[2 * i];
    const double x1 = X[2 * i + 1];
    std::array<double, 4> logp;
    double top = -std::numeric_limits<double>::infinity();
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        const int cls = 2 * y + a;
        const GaussianCell& cell = spec.cell(y, a);
        logp[cls] = cell.count == 0
                        ? -std::numeric_limits<double>::infinity()
                        : log_prior[cls] +
                              log_gaussian2(cell.mean, cell.cov, x0, x1);
        top = std::max(top, logp[cls]);
      }
    }
    double denom = 0.0;
    for (int cls = 0; cls < 4; ++cls) denom += std::exp(logp[cls] - top);
    for (int cls = 0; cls < 4; ++cls) {
      post[i * 4 + cls] = std::exp(logp[cls] - top) / denom;
    }
  }
  return post;
}

ProbTable prob_table_from_cells(std::span<const double> cells, std::size_t n,
                                const CriterionSpec& criterion) {
  if (cells.size() != 4 * n) {
    throw std::invalid_argument("prob_table_from_cells: cells must be n x 4");
  }
  criterion.validate();
  ProbTable probs;
  probs.n = n;
  probs.p_y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    probs.p_y[i] = cells[i * 4 + 2] + cells[i * 4 + 3];  // classes (1,0),(1,1)
  }
  auto column = [&](int y, int a) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = cells[i * 4 + 2 * y + a];
    return col;
  };
  switch (criterion.kind) {
    case CriterionKind::dp: {
      std::vector<double> a0(n), a1(n);
      for (std::size_t i = 0; i < n; ++i) {
        a0[i] = cells[i * 4 + 0] + cells[i * 4 + 2];
        a1[i] = cells[i * 4 + 1] + cells[i * 4 + 3];
      }
      probs.p_a.push_back(std::move(a0));
      probs.p_b.push_back(std::move(a1));
      break;
    }
    case CriterionKind::eop:
      probs.p_a.push_back(column(1, 0));
      probs.p_b.push_back(column(1, 1));
      break;
    case CriterionKind::eo:
      probs.p_a.push_back(column(0, 0));
      probs.p_b.push_back(column(0, 1));
      probs.p_a.push_back(column(1, 0));
      probs.p_b.push_back(column(1, 1));
      break;
    case CriterionKind::custom:
      throw std::invalid_argument(
          "prob_table_from_cells: custom criteria are not cell-mapped");
  }
  probs.validate();
  return probs;
}

ProbTable true_posteriors(const GaussianMixtureSpec& spec,
                          std::span<const double> X, std::size_t n,
                          const CriterionSpec& criterion) {
  const std::vector<double> cells = cell_posteriors(spec, X, n);
  return prob_table_from_cells(cells, n, criterion);
}

std::vector<int> joint_class_labels(const LabeledDataset& ds,
                                    const std::string& attr) {
  const auto& a = ds.attribute(attr);
  std::vector<int> classes(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) {
    classes[i] = 2 * ds.labels[i] + a[i];
  }
  return classes;
}

double softmax_loss_grad(std::span<const double> W, std::span<const double> X,
                         std::size_t n, std::size_t dim,
                         const std::vector<int>& classes, std::size_t C,
                         double l2, std::vector<double>* grad) {
  const std::size_t rows = dim + 1;
  if (W.size() != rows * C) {
    throw std::invalid_argument("softmax_loss_grad: bad weight shape");
  }
  if (grad) grad->assign(rows * C, 0.0);
  double loss = 0.0;
  std::vector<double> logits(C), probs(C);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < C; ++c) {
      double z = W[dim * C + c];  // bias row
      for (std::size_t j = 0; j < dim; ++j) {
        z += X[i * dim + j] * W[j * C + c];
      }
      logits[c] = z;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      probs[c] = std::exp(logits[c] - top);
      denom += probs[c];
    }
    for (std::size_t c = 0; c < C; ++c) probs[c] /= denom;
    const int yi = classes[i];
    loss -= std::log(std::max(probs[yi], 1e-300));
    if (grad) {
      for (std::size_t c = 0; c < C; ++c) {
        const double err = probs[c] - (static_cast<int>(c) == yi ? 1.0 : 0.0);
        for (std::size_t j = 0; j < dim; ++j) {
          (*grad)[j * C + c] += X[i * dim + j] * err;
        }
        (*grad)[dim * C + c] += err;
      }
    }
  }
  loss /= static_cast<double>(n);
  double reg = 0.0;
  for (double w : W) reg += w * w;
  loss += l2 * reg;
  if (grad) {
    for (std::size_t j = 0; j < rows * C; ++j) {
      (*grad)[j] = (*grad)[j] / static_cast<double>(n) + 2.0 * l2 * W[j];
    }
  }
  return loss;
}

SoftmaxModel fit_softmax(std::span<const double> X, std::size_t n,
                         std::size_t dim, const std::vector<int>& classes,
                         std::size_t C, const SoftmaxHyper& hyper) {
  if (classes.size() != n) {
    throw std::invalid_argument("fit_softmax: class vector length != n");
  }
  if (n == 0 || dim == 0) {
    throw std::invalid_argument("fit_softmax: features are required");
  }
  for (int c : classes) {
    if (c < 0 || static_cast<std::size_t>(c) >= C) {
      throw std::invalid_argument("fit_softmax: class index out of range");
    }
  }
  SoftmaxModel model;
  model.dim = dim;
  model.C = C;
  model.hyper = hyper;
  model.W.assign((dim + 1) * C, 0.0);

  std::vector<double> grad;
  for (std::size_t it = 0; it < hyper.iterations; ++it) {
    const double loss =
        softmax_loss_grad(model.W, X, n, dim, classes, C, hyper.l2, &grad);
    if (!std::isfinite(loss)) {
      throw std::runtime_error(
          "fit_softmax: training diverged (loss is not finite); "
          "try a smaller learning rate");
    }
    for (std::size_t j = 0; j < model.W.size(); ++j) {
      model.W[j] -= hyper.learning_rate * grad[j];
    }
  }
  return model;
}

std::vector<double> softmax_probs(const SoftmaxModel& model,
                                  std::span<const double> X, std::size_t n) {
  const std::size_t dim = model.dim;
  const std::size_t C = model.C;
  if (X.size() != n * dim) {
    throw std::invalid_argument("softmax_probs: X shape mismatch");
  }
  std::vector<double> out(n * C);
  std::vector<double> logits(C);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < C; ++c) {
      double z = model.W[dim * C + c];
      for (std::size_t j = 0; j < dim; ++j) {
        z += X[i * dim + j] * model.W[j * C + c];
      }
      logits[c] = z;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      out[i * C + c] = std::exp(logits[c] - top);
      denom += out[i * C + c];
    }
    for (std::size_t c = 0; c < C; ++c) out[i * C + c] /= denom;
  }
  return out;
}

ProbTable predict_probs(const SoftmaxModel& model, std::span<const double> X,
                        std::size_t n, const CriterionSpec& criterion) {
  if (model.C != 4) {
    throw std::invalid_argument(
        "predict_probs: criterion mapping requires the 4-class joint model");
  }
  const std::vector<double> cells = softmax_probs(model, X, n);
  return prob_table_from_cells(cells, n, criterion);
}

}  // namespace fairpost
