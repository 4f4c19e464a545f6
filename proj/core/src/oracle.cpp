#include "fairpost/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fairpost/metrics.hpp"
#include "fairpost/rng.hpp"

namespace fairpost {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-11;
constexpr double kPhase1Tol = 1e-9;

/// Dense bounded-variable simplex over columns [kappa | slack | artificial].
/// The basis inverse is refactorized from scratch every iteration; with K
/// rows that is a K^3 solve, negligible next to pricing.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const LpInstance& inst)
      : inst_(inst), m_(inst.K), n_struct_(inst.n) {
    n_total_ = n_struct_ + m_ + m_;
    lower_.assign(n_total_, 0.0);
    upper_.assign(n_total_, 0.0);
    for (std::size_t j = 0; j < n_struct_; ++j) upper_[j] = 1.0;

    rhs_.resize(m_);
    range_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const double n = static_cast<double>(inst.n);
      const double up = n * (inst.c_star[k] + inst.delta);
      const double lo = n * (inst.c_star[k] - inst.delta);
      rhs_[k] = up;
      range_[k] = up - lo;
      upper_[n_struct_ + k] = range_[k];
    }

    at_upper_.assign(n_total_, false);
    is_basic_.assign(n_total_, false);

    // Start: structurals and slacks at lower bound, one artificial basic
    // per row soaking up the residual.
    basis_.resize(m_);
    art_sign_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t art = n_struct_ + m_ + k;
      art_sign_[k] = rhs_[k] >= 0.0 ? 1.0 : -1.0;
      upper_[art] = std::abs(rhs_[k]);
      basis_[k] = art;
      is_basic_[art] = true;
    }
  }

  bool solve() {
    // Phase 1: drive artificial infeasibility to zero.
    cost_.assign(n_total_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) cost_[n_struct_ + m_ + k] = 1.0;
    run();
    if (objective() > kPhase1Tol * std::max(1.0, rhs_scale())) return false;

    // Phase 2: artificials pinned at zero, real costs on.
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t art = n_struct_ + m_ + k;
      upper_[art] = 0.0;
      cost_[art] = 0.0;
    }
    for (std::size_t j = 0; j < n_struct_; ++j) cost_[j] = inst_.eta[j];
    for (std::size_t k = 0; k < m_; ++k) cost_[n_struct_ + k] = 0.0;
    run();
    return true;
  }

  std::vector<double> structural_values() const {
    std::vector<double> x = nonbasic_values();
    const std::vector<double> xb = basic_values(x);
    for (std::size_t k = 0; k < m_; ++k) x[basis_[k]] = xb[k];
    x.resize(n_struct_);
    for (auto& v : x) v = std::clamp(v, 0.0, 1.0);
    return x;
  }

  /// Row duals y = c_B B^-1 for the equality rows.
  std::vector<double> row_duals() const {
    std::vector<std::vector<double>> binv = basis_inverse();
    std::vector<double> y(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t r = 0; r < m_; ++r) {
        y[r] += cost_[basis_[k]] * binv[k][r];
      }
    }
    return y;
  }

 private:
  double rhs_scale() const {
    double s = 1.0;
    for (double v : rhs_) s = std::max(s, std::abs(v));
    return s;
  }

  double column_entry(std::size_t j, std::size_t row) const {
    if (j < n_struct_) return inst_.f_at(j, row);
    if (j < n_struct_ + m_) return j - n_struct_ == row ? 1.0 : 0.0;
    return j - n_struct_ - m_ == row ? art_sign_[row] : 0.0;
  }

  std::vector<double> nonbasic_values() const {
    std::vector<double> x(n_total_);
    for (std::size_t j = 0; j < n_total_; ++j) {
      x[j] = at_upper_[j] ? upper_[j] : lower_[j];
    }
    return x;
  }

  std::vector<std::vector<double>> basis_inverse() const {
    std::vector<std::vector<double>> aug(m_, std::vector<double>(2 * m_, 0.0));
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t c = 0; c < m_; ++c) {
        aug[r][c] = column_entry(basis_[c], r);
      }
      aug[r][m_ + r] = 1.0;
    }
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m_; ++r) {
        if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
      }
      std::swap(aug[col], aug[piv]);
      const double d = aug[col][col];
      if (std::abs(d) < 1e-13) {
        throw std::runtime_error("simplex: singular basis");
      }
      for (std::size_t c = 0; c < 2 * m_; ++c) aug[col][c] /= d;
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double factor = aug[r][col];
        if (factor == 0.0) continue;
        for (std::size_t c = 0; c < 2 * m_; ++c) {
          aug[r][c] -= factor * aug[col][c];
        }
      }
    }
    std::vector<std::vector<double>> binv(m_, std::vector<double>(m_));
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t c = 0; c < m_; ++c) binv[r][c] = aug[r][m_ + c];
    }
    return binv;
  }

  std::vector<double> basic_values(const std::vector<double>& x_nonbasic) const {
    std::vector<double> v = rhs_;
    for (std::size_t j = 0; j < n_total_; ++j) {
      if (is_basic_[j]) continue;
      const double xj = x_nonbasic[j];
      if (xj == 0.0) continue;
      for (std::size_t r = 0; r < m_; ++r) {
        v[r] -= column_entry(j, r) * xj;
      }
    }
    const auto binv = basis_inverse();
    std::vector<double> xb(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t r = 0; r < m_; ++r) xb[k] += binv[k][r] * v[r];
    }
    return xb;
  }

  double objective() const {
    const std::vector<double> x = nonbasic_values();
    const std::vector<double> xb = basic_values(x);
    double obj = 0.0;
    for (std::size_t j = 0; j < n_total_; ++j) {
      if (!is_basic_[j]) obj += cost_[j] * x[j];
    }
    for (std::size_t k = 0; k < m_; ++k) obj += cost_[basis_[k]] * xb[k];
    return obj;
  }

  void run() {
    const std::size_t max_iter = 200 * (n_total_ + 10);
    std::size_t stall = 0;
    double last_obj = objective();
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      const bool bland = stall > 50;
      if (!iterate(bland)) return;  // optimal
      const double obj = objective();
      if (obj < last_obj - 1e-13 * std::max(1.0, std::abs(last_obj))) {
        stall = 0;
        last_obj = obj;
      } else {
        ++stall;
      }
    }
    throw std::runtime_error("simplex: iteration limit exceeded");
  }

  /// One pricing + ratio-test step; returns false at optimality.
  bool iterate(bool bland) {
    const auto binv = basis_inverse();
    std::vector<double> y(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t r = 0; r < m_; ++r) y[r] += cost_[basis_[k]] * binv[k][r];
    }

    std::size_t enter = n_total_;
    double best_score = kCostTol;
    int enter_dir = 0;
    for (std::size_t j = 0; j < n_total_; ++j) {
      if (is_basic_[j]) continue;
      if (upper_[j] == lower_[j]) continue;  // fixed (retired artificials)
      double d = cost_[j];
      if (j < n_struct_) {
        for (std::size_t r = 0; r < m_; ++r) d -= y[r] * inst_.f_at(j, r);
      } else if (j < n_struct_ + m_) {
        d -= y[j - n_struct_];
      } else {
        d -= y[j - n_struct_ - m_] * art_sign_[j - n_struct_ - m_];
      }
      int dir = 0;
      double score = 0.0;
      if (!at_upper_[j] && d < -kCostTol) {
        dir = 1;
        score = -d;
      } else if (at_upper_[j] && d > kCostTol) {
        dir = -1;
        score = d;
      }
      if (dir == 0) continue;
      if (bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (score > best_score) {
        best_score = score;
        enter = j;
        enter_dir = dir;
      }
    }
    if (enter == n_total_) return false;

    // Direction of basic variables as the entering variable moves.
    std::vector<double> col(m_);
    for (std::size_t r = 0; r < m_; ++r) col[r] = column_entry(enter, r);
    std::vector<double> w(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t r = 0; r < m_; ++r) w[k] += binv[k][r] * col[r];
    }

    const std::vector<double> x = nonbasic_values();
    const std::vector<double> xb = basic_values(x);

    double limit = upper_[enter] - lower_[enter];  // bound-to-bound flip
    std::size_t leave = m_;
    bool leave_to_upper = false;
    for (std::size_t k = 0; k < m_; ++k) {
      const double rate = static_cast<double>(enter_dir) * w[k];
      if (std::abs(rate) < kPivotTol) continue;
      const std::size_t jb = basis_[k];
      double step;
      bool to_upper;
      if (rate > 0.0) {  // basic decreases toward its lower bound
        step = (xb[k] - lower_[jb]) / rate;
        to_upper = false;
      } else {  // basic increases toward its upper bound
        step = (upper_[jb] - xb[k]) / (-rate);
        to_upper = true;
      }
      step = std::max(step, 0.0);
      if (step < limit - 1e-13) {
        limit = step;
        leave = k;
        leave_to_upper = to_upper;
      }
    }

    if (leave == m_) {
      // Entering variable runs to its opposite bound; basis unchanged.
      at_upper_[enter] = !at_upper_[enter];
      return true;
    }
    const std::size_t leaving = basis_[leave];
    is_basic_[leaving] = false;
    at_upper_[leaving] = leave_to_upper;
    basis_[leave] = enter;
    is_basic_[enter] = true;
    // A variable entering from its upper bound keeps at_upper_ meaningless
    // once basic; clear it for cleanliness.
    at_upper_[enter] = false;
    return true;
  }

  const LpInstance& inst_;
  std::size_t m_;
  std::size_t n_struct_;
  std::size_t n_total_;
  std::vector<double> lower_, upper_, cost_, rhs_, range_, art_sign_;
  std::vector<bool> at_upper_, is_basic_;
  std::vector<std::size_t> basis_;
};

double dual_value(const LpInstance& inst, const std::vector<double>& v) {
  const double n = static_cast<double>(inst.n);
  double hinge = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    double t = -inst.eta[i];
    for (std::size_t k = 0; k < inst.K; ++k) t += v[k] * inst.f_at(i, k);
    if (t > 0.0) hinge += t;
  }
  double value = -hinge / n;
  for (std::size_t k = 0; k < inst.K; ++k) {
    value += v[k] * inst.c_star[k] - std::abs(v[k]) * inst.delta;
  }
  return value;
}

std::vector<double> dual_supergradient(const LpInstance& inst,
                                       const std::vector<double>& v) {
  const double n = static_cast<double>(inst.n);
  std::vector<double> g(inst.K, 0.0);
  for (std::size_t i = 0; i < inst.n; ++i) {
    double t = -inst.eta[i];
    for (std::size_t k = 0; k < inst.K; ++k) t += v[k] * inst.f_at(i, k);
    if (t > 0.0) {
      for (std::size_t k = 0; k < inst.K; ++k) g[k] -= inst.f_at(i, k) / n;
    }
  }
  for (std::size_t k = 0; k < inst.K; ++k) {
    g[k] += inst.c_star[k];
    if (v[k] > 0.0) {
      g[k] -= inst.delta;
    } else if (v[k] < 0.0) {
      g[k] += inst.delta;
    } else if (std::abs(g[k]) <= inst.delta) {
      g[k] = 0.0;
    } else {
      g[k] -= inst.delta * (g[k] > 0.0 ? 1.0 : -1.0);
    }
  }
  return g;
}

void consider_dual_point(const LpInstance& inst, std::vector<double> v,
                         std::vector<double>& best_v, double& best_val) {
  const double val = dual_value(inst, v);
  if (val > best_val) {
    best_val = val;
    best_v = std::move(v);
  }
}

/// Exact maximizer for K=1: the concave piecewise-linear dual peaks at a
/// kink, either v=0 or v = eta_i / f_i.
void dual_exact_1d(const LpInstance& inst, std::vector<double>& best_v,
                   double& best_val) {
  consider_dual_point(inst, {0.0}, best_v, best_val);
  for (std::size_t i = 0; i < inst.n; ++i) {
    const double f = inst.f_at(i, 0);
    if (f == 0.0) continue;
    consider_dual_point(inst, {inst.eta[i] / f}, best_v, best_val);
  }
}

/// Exact maximizer for K=2 on small instances: evaluate every intersection
/// of kink lines {v.f_i = eta_i} and the axes.
void dual_exact_2d(const LpInstance& inst, std::vector<double>& best_v,
                   double& best_val) {
  struct Line {
    double a, b, c;  // a v0 + b v1 = c
  };
  std::vector<Line> lines;
  for (std::size_t i = 0; i < inst.n; ++i) {
    lines.push_back({inst.f_at(i, 0), inst.f_at(i, 1), inst.eta[i]});
  }
  lines.push_back({1.0, 0.0, 0.0});
  lines.push_back({0.0, 1.0, 0.0});
  consider_dual_point(inst, {0.0, 0.0}, best_v, best_val);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const Line& p = lines[i];
      const Line& q = lines[j];
      const double det = p.a * q.b - p.b * q.a;
      const double scale = std::max({std::abs(p.a), std::abs(p.b),
                                     std::abs(q.a), std::abs(q.b), 1e-300});
      if (std::abs(det) < 1e-12 * scale * scale) continue;
      const double v0 = (p.c * q.b - p.b * q.c) / det;
      const double v1 = (p.a * q.c - p.c * q.a) / det;
      if (!std::isfinite(v0) || !std::isfinite(v1)) continue;
      consider_dual_point(inst, {v0, v1}, best_v, best_val);
    }
  }
}

void dual_subgradient(const LpInstance& inst, std::vector<double>& best_v,
                      double& best_val) {
  Rng rng(12345);
  for (int restart = 0; restart < 4; ++restart) {
    std::vector<double> v(inst.K, 0.0);
    if (restart > 0) {
      for (auto& c : v) c = rng.uniform(-2.0, 2.0);
    }
    double step = 1.0;
    for (int t = 0; t < 4000; ++t) {
      consider_dual_point(inst, v, best_v, best_val);
      const auto g = dual_supergradient(inst, v);
      double norm = 0.0;
      for (double c : g) norm += c * c;
      norm = std::sqrt(norm);
      if (norm < 1e-14) break;
      const double rate = step / (1.0 + 0.02 * t) / norm;
      for (std::size_t k = 0; k < inst.K; ++k) v[k] += rate * g[k];
    }
    consider_dual_point(inst, v, best_v, best_val);
  }
}

}  // namespace

void LpInstance::validate() const {
  if (n == 0) throw std::invalid_argument("lp: empty instance");
  if (K == 0) throw std::invalid_argument("lp: no components");
  if (eta.size() != n || f.size() != n * K || c_star.size() != K) {
    throw std::invalid_argument("lp: inconsistent dimensions");
  }
  if (delta < 0.0) throw std::invalid_argument("lp: delta must be >= 0");
  for (double e : eta) {
    if (!(e > 0.0)) throw std::invalid_argument("lp: eta must be positive");
  }
}

std::vector<double> LpSolution::rule_weights() const {
  const std::size_t K = dual.size() / 2;
  std::vector<double> w(K);
  for (std::size_t k = 0; k < K; ++k) w[k] = dual[k] - dual[K + k];
  return w;
}

LpSolution solve_primal(const LpInstance& inst) {
  inst.validate();
  LpSolution sol;
  BoundedSimplex simplex(inst);
  if (!simplex.solve()) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  sol.status = LpStatus::optimal;
  sol.kappa = simplex.structural_values();
  double obj = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) obj += inst.eta[i] * sol.kappa[i];
  sol.objective = obj / static_cast<double>(inst.n);

  // Simplex row duals scale with the unnormalized rows; the flip weight on
  // scores is w = y, split into the nonnegative pair the rule formula uses.
  const std::vector<double> y = simplex.row_duals();
  sol.dual.assign(2 * inst.K, 0.0);
  for (std::size_t k = 0; k < inst.K; ++k) {
    sol.dual[k] = y[k] > 0.0 ? y[k] : 0.0;
    sol.dual[inst.K + k] = y[k] < 0.0 ? -y[k] : 0.0;
  }
  return sol;
}

DualSolution solve_dual(const LpInstance& inst) {
  inst.validate();
  std::vector<double> best_v(inst.K, 0.0);
  double best_val = dual_value(inst, best_v);
  if (inst.K == 1) {
    dual_exact_1d(inst, best_v, best_val);
  } else if (inst.K == 2 && inst.n <= 600) {
    dual_exact_2d(inst, best_v, best_val);
    dual_subgradient(inst, best_v, best_val);
  } else {
    dual_subgradient(inst, best_v, best_val);
  }
  DualSolution out;
  out.value = best_val;
  out.z.assign(2 * inst.K, 0.0);
  for (std::size_t k = 0; k < inst.K; ++k) {
    out.z[k] = best_v[k] > 0.0 ? best_v[k] : 0.0;
    out.z[inst.K + k] = best_v[k] < 0.0 ? -best_v[k] : 0.0;
  }
  return out;
}

BruteForceResult brute_force(const LpInstance& inst, std::size_t max_n) {
  inst.validate();
  if (inst.n > max_n) {
    throw std::invalid_argument("brute_force: n exceeds max_n");
  }
  BruteForceResult best;
  const double n = static_cast<double>(inst.n);
  const std::uint64_t total = 1ull << inst.n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double obj = 0.0;
    std::vector<double> load(inst.K, 0.0);
    for (std::size_t i = 0; i < inst.n; ++i) {
      if (mask >> i & 1u) {
        obj += inst.eta[i];
        for (std::size_t k = 0; k < inst.K; ++k) load[k] += inst.f_at(i, k);
      }
    }
    bool ok = true;
    for (std::size_t k = 0; k < inst.K && ok; ++k) {
      ok = std::abs(inst.c_star[k] - load[k] / n) <= inst.delta;
    }
    if (!ok) continue;
    obj /= n;
    if (best.status == LpStatus::infeasible || obj < best.objective) {
      best.status = LpStatus::optimal;
      best.objective = obj;
      best.kappa.assign(inst.n, 0);
      for (std::size_t i = 0; i < inst.n; ++i) {
        best.kappa[i] = static_cast<std::uint8_t>(mask >> i & 1u);
      }
    }
  }
  return best;
}

ModificationRule rule_from_dual(const std::vector<double>& dual_2k,
                                double delta) {
  if (dual_2k.empty() || dual_2k.size() % 2 != 0) {
    throw std::invalid_argument("rule_from_dual: dual must have 2K entries");
  }
  const std::size_t K = dual_2k.size() / 2;
  ModificationRule rule;
  rule.z.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    rule.z[k] = dual_2k[k] - dual_2k[K + k];
  }
  rule.provenance.algorithm = "dual";
  rule.provenance.delta = delta;
  rule.validate();
  return rule;
}

LpInstance lp_instance_from_scores(const BiasScores& scores,
                                   const std::vector<double>& c_star,
                                   double delta) {
  if (c_star.size() != scores.K) {
    throw std::invalid_argument("lp_instance_from_scores: arity mismatch");
  }
  LpInstance inst;
  inst.n = scores.n;
  inst.K = scores.K;
  inst.eta = scores.eta;
  inst.f = scores.f;
  inst.c_star = c_star;
  inst.delta = delta;
  inst.validate();
  return inst;
}

std::vector<double> model_baseline_disparities(const BiasScores& scores) {
  std::vector<double> c(scores.K, 0.0);
  for (std::size_t i = 0; i < scores.n; ++i) {
    if (!scores.yhat[i]) continue;
    for (std::size_t k = 0; k < scores.K; ++k) c[k] += scores.group_fn(i, k);
  }
  for (auto& v : c) v /= static_cast<double>(scores.n);
  return c;
}

LpInstance empirical_lp_instance(const BiasScores& scores,
                                 const LabeledDataset& val,
                                 const CriterionSpec& criterion, double delta) {
  if (scores.n != val.n) {
    throw std::invalid_argument("empirical_lp_instance: size mismatch");
  }
  LpInstance inst;
  inst.n = scores.n;
  inst.K = criterion.K();
  inst.eta = scores.eta;
  inst.f = empirical_group_functions(scores.yhat, val, criterion);
  std::vector<std::uint8_t> yhat(scores.yhat.begin(), scores.yhat.end());
  for (const auto& c : criterion.components) {
    inst.c_star.push_back(signed_disparity(yhat, val, c));
  }
  inst.delta = delta;
  inst.validate();
  return inst;
}

}  // namespace fairpost
