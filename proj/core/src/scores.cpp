#include "fairpost/scores.hpp"

#include <cmath>
#include <stdexcept>

#include "fairpost/csv.hpp"
#include "fairpost/rng.hpp"

namespace fairpost {

int base_prediction(double p_y) { return p_y > 0.5 ? 1 : 0; }

double confidence(double p_y, double eta_floor) {
  return std::max(std::abs(2.0 * p_y - 1.0), eta_floor);
}

double group_function(int yhat, double p_a, double p_b, double prior_a,
                      double prior_b) {
  if (!(prior_a > 0.0) || !(prior_b > 0.0)) {
    throw std::invalid_argument("group_function: priors must be positive");
  }
  const double sign = yhat ? 1.0 : -1.0;
  return sign * (p_a / prior_a - p_b / prior_b);
}

BiasScores bias_scores(const ProbTable& probs, const CriterionSpec& criterion,
                       double eta_floor) {
  if (probs.K() != criterion.K()) {
    throw std::invalid_argument("bias_scores: prob table arity " +
                                std::to_string(probs.K()) +
                                " does not match criterion K=" +
                                std::to_string(criterion.K()));
  }
  if (!(eta_floor > 0.0)) {
    throw std::invalid_argument("bias_scores: eta_floor must be positive");
  }
  criterion.validate();
  if (!criterion.priors_set()) {
    throw std::invalid_argument("bias_scores: criterion priors not set");
  }

  BiasScores out;
  out.n = probs.n;
  out.K = probs.K();
  out.yhat.resize(out.n);
  out.eta.resize(out.n);
  out.s.resize(out.n * out.K);
  out.f.resize(out.n * out.K);

  for (std::size_t i = 0; i < out.n; ++i) {
    const int yhat = base_prediction(probs.p_y[i]);
    out.yhat[i] = static_cast<std::uint8_t>(yhat);
    const double eta = confidence(probs.p_y[i], eta_floor);
    out.eta[i] = eta;
    for (std::size_t k = 0; k < out.K; ++k) {
      const auto& c = criterion.components[k];
      const double fk =
          group_function(yhat, probs.p_a[k][i], probs.p_b[k][i], c.prior_a,
                         c.prior_b);
      out.f[i * out.K + k] = fk;
      out.s[i * out.K + k] = fk / eta;
    }
  }
  return out;
}

ProbTable corrupt(const ProbTable& probs, double alpha, std::uint64_t seed) {
  if (alpha < 0.0) {
    throw std::invalid_argument("corrupt: alpha must be nonnegative");
  }
  ProbTable out = probs;
  if (alpha == 0.0) return out;
  Rng rng(seed);
  auto jitter = [&](std::vector<double>& col) {
    for (auto& v : col) {
      v = std::clamp(v + rng.uniform(-alpha, 2.0 * alpha), 0.0, 1.0);
    }
  };
  jitter(out.p_y);
  for (std::size_t k = 0; k < out.K(); ++k) {
    jitter(out.p_a[k]);
    jitter(out.p_b[k]);
  }
  return out;
}

void save_scores(const std::string& path, const BiasScores& scores) {
  std::vector<std::string> header{"yhat", "eta"};
  for (std::size_t k = 0; k < scores.K; ++k) header.push_back("s" + std::to_string(k));
  for (std::size_t k = 0; k < scores.K; ++k) header.push_back("f" + std::to_string(k));
  std::vector<std::vector<std::string>> rows;
  rows.reserve(scores.n);
  for (std::size_t i = 0; i < scores.n; ++i) {
    std::vector<std::string> row;
    row.push_back(scores.yhat[i] ? "1" : "0");
    row.push_back(format_double(scores.eta[i]));
    for (std::size_t k = 0; k < scores.K; ++k) {
      row.push_back(format_double(scores.score(i, k)));
    }
    for (std::size_t k = 0; k < scores.K; ++k) {
      row.push_back(format_double(scores.group_fn(i, k)));
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

BiasScores load_scores(const std::string& path) {
  const CsvTable table = read_csv(path);
  BiasScores scores;
  scores.n = table.n_rows();
  std::size_t K = 0;
  while (table.has_column("s" + std::to_string(K))) ++K;
  if (K == 0) throw ParseError(path + ": no score columns (s0, s1, ...)");
  scores.K = K;

  const std::size_t yhat_col = table.column("yhat");
  const std::size_t eta_col = table.column("eta");
  std::vector<std::size_t> s_cols, f_cols;
  for (std::size_t k = 0; k < K; ++k) {
    s_cols.push_back(table.column("s" + std::to_string(k)));
    f_cols.push_back(table.column("f" + std::to_string(k)));
  }
  scores.yhat.reserve(scores.n);
  scores.eta.reserve(scores.n);
  scores.s.reserve(scores.n * K);
  scores.f.reserve(scores.n * K);
  for (std::size_t i = 0; i < scores.n; ++i) {
    const auto& row = table.rows[i];
    auto where = [&](const std::string& col) {
      return path + ": row " + std::to_string(i + 1) + ", column '" + col + "'";
    };
    scores.yhat.push_back(
        static_cast<std::uint8_t>(parse_binary(row[yhat_col], where("yhat"))));
    const double eta = parse_double(row[eta_col], where("eta"));
    if (!(eta > 0.0)) {
      throw ParseError(path + ": row " + std::to_string(i + 1) +
                       ": eta must be positive");
    }
    scores.eta.push_back(eta);
    for (std::size_t k = 0; k < K; ++k) {
      scores.s.push_back(parse_double(row[s_cols[k]], where("s" + std::to_string(k))));
    }
    for (std::size_t k = 0; k < K; ++k) {
      scores.f.push_back(parse_double(row[f_cols[k]], where("f" + std::to_string(k))));
    }
  }
  return scores;
}

}  // namespace fairpost
