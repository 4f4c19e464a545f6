#include "fairpost/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fairpost/rng.hpp"

namespace fairpost {

FitMethod parse_fit_method(const std::string& name) {
  if (name == "threshold") return FitMethod::threshold;
  if (name == "pairs") return FitMethod::pairs;
  if (name == "directions") return FitMethod::directions;
  throw std::invalid_argument("unknown fit method '" + name +
                              "' (expected threshold, pairs, or directions)");
}

std::string fit_method_name(FitMethod method) {
  switch (method) {
    case FitMethod::threshold: return "threshold";
    case FitMethod::pairs: return "pairs";
    case FitMethod::directions: return "directions";
  }
  return "?";
}

namespace {

constexpr double kGapGuard = 64.0 * std::numeric_limits<double>::epsilon();

/// Integer bookkeeping shared by all fitters: flip effects on the correct
/// count and on each component's per-side positive counts.
struct SweepData {
  std::size_t n = 0;
  std::size_t K = 0;
  std::int64_t base_correct = 0;
  std::vector<std::int64_t> base_pos_a, base_pos_b;  // per component
  std::vector<std::int64_t> n_a, n_b;
  std::vector<std::int8_t> correct_delta;  // per point
  std::vector<std::int8_t> side;           // n x K: 0=a, 1=b, 2=neither
  std::vector<std::int8_t> pos_delta;      // per point: 1 - 2*yhat
};

SweepData build_sweep_data(const BiasScores& scores, const LabeledDataset& val,
                           const CriterionSpec& criterion) {
  if (scores.n != val.n) {
    throw std::invalid_argument("fit: scores and validation sizes differ");
  }
  if (scores.n == 0) throw std::invalid_argument("fit: empty validation set");
  if (scores.K != criterion.K()) {
    throw std::invalid_argument("fit: scores arity does not match criterion");
  }
  SweepData d;
  d.n = scores.n;
  d.K = scores.K;
  d.base_pos_a.assign(d.K, 0);
  d.base_pos_b.assign(d.K, 0);
  d.n_a.assign(d.K, 0);
  d.n_b.assign(d.K, 0);
  d.correct_delta.resize(d.n);
  d.side.resize(d.n * d.K);
  d.pos_delta.resize(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    const bool correct = scores.yhat[i] == val.labels[i];
    d.base_correct += correct;
    d.correct_delta[i] = correct ? -1 : 1;
    d.pos_delta[i] = static_cast<std::int8_t>(1 - 2 * scores.yhat[i]);
    for (std::size_t k = 0; k < d.K; ++k) {
      const Side s = criterion.components[k].side_of(val, i);
      d.side[i * d.K + k] = static_cast<std::int8_t>(s);
      if (s == Side::a) {
        ++d.n_a[k];
        d.base_pos_a[k] += scores.yhat[i];
      } else if (s == Side::b) {
        ++d.n_b[k];
        d.base_pos_b[k] += scores.yhat[i];
      }
    }
  }
  for (std::size_t k = 0; k < d.K; ++k) {
    if (d.n_a[k] == 0 || d.n_b[k] == 0) {
      throw std::runtime_error("fit: component '" +
                               criterion.components[k].name +
                               "' has an empty group on the validation set");
    }
  }
  return d;
}

struct Book {
  const SweepData* data;
  std::int64_t correct;
  std::vector<std::int64_t> pos_a, pos_b;
  std::int64_t flips;

  explicit Book(const SweepData& d)
      : data(&d),
        correct(d.base_correct),
        pos_a(d.base_pos_a),
        pos_b(d.base_pos_b),
        flips(0) {}

  void reset() {
    correct = data->base_correct;
    pos_a = data->base_pos_a;
    pos_b = data->base_pos_b;
    flips = 0;
  }

  void flip(std::size_t i) {
    correct += data->correct_delta[i];
    ++flips;
    for (std::size_t k = 0; k < data->K; ++k) {
      const std::int8_t s = data->side[i * data->K + k];
      if (s == 0) {
        pos_a[k] += data->pos_delta[i];
      } else if (s == 1) {
        pos_b[k] += data->pos_delta[i];
      }
    }
  }

  double cc() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < data->K; ++k) {
      const double c =
          static_cast<double>(pos_a[k]) / static_cast<double>(data->n_a[k]) -
          static_cast<double>(pos_b[k]) / static_cast<double>(data->n_b[k]);
      worst = std::max(worst, std::abs(c));
    }
    return worst;
  }
};

struct CandidateStats {
  std::int64_t correct = 0;
  double cc = 0.0;
  std::int64_t flips = 0;
};

CandidateStats stats_of(const Book& book) {
  return {book.correct, book.cc(), book.flips};
}

/// Ties go to the earlier candidate in canonical enumeration order, so both
/// comparisons demand strict improvement.
bool better_feasible(const CandidateStats& a, const CandidateStats& b) {
  if (a.correct != b.correct) return a.correct > b.correct;
  if (a.cc != b.cc) return a.cc < b.cc;
  return a.flips < b.flips;
}

bool better_fallback(const CandidateStats& a, const CandidateStats& b) {
  if (a.cc != b.cc) return a.cc < b.cc;
  if (a.correct != b.correct) return a.correct > b.correct;
  return a.flips < b.flips;
}

struct DeltaTracker {
  double delta;
  bool has_feasible = false;
  CandidateStats best;
  std::vector<double> best_z;
  bool has_any = false;
  CandidateStats fallback;
  std::vector<double> fallback_z;

  void consider(const CandidateStats& stats, const std::vector<double>& z) {
    if (stats.cc <= delta) {
      if (!has_feasible || better_feasible(stats, best)) {
        has_feasible = true;
        best = stats;
        best_z = z;
      }
    }
    if (!has_any || better_fallback(stats, fallback)) {
      has_any = true;
      fallback = stats;
      fallback_z = z;
    }
  }
};

ModificationRule finalize_rule(const DeltaTracker& tracker,
                               const std::string& algorithm,
                               std::uint64_t seed, const BiasScores& scores,
                               const LabeledDataset& val,
                               const CriterionSpec& criterion) {
  ModificationRule rule;
  const bool feasible = tracker.has_feasible;
  const CandidateStats& stats = feasible ? tracker.best : tracker.fallback;
  rule.z = feasible ? tracker.best_z : tracker.fallback_z;
  rule.provenance.algorithm = algorithm;
  rule.provenance.delta = tracker.delta;
  rule.provenance.seed = seed;
  rule.provenance.feasible = feasible;

  // The fitter's incremental counts must agree with an end-to-end
  // application of the returned rule; candidate guards make this exact.
  const Predictions applied = apply_rule(rule, scores);
  const EvalReport report = composite(applied, val, criterion);
  const auto n = static_cast<double>(scores.n);
  if (report.flip_count != stats.flips ||
      std::llround(report.accuracy * n) != stats.correct) {
    throw std::logic_error("fit: sweep bookkeeping does not match rule "
                           "application (degenerate score gaps?)");
  }
  rule.provenance.val_accuracy = report.accuracy;
  rule.provenance.val_cc = report.cc;
  rule.provenance.val_flips = report.flip_count;
  return rule;
}

ThresholdFamily threshold_family_impl(std::span<const double> values,
                                      double scale) {
  ThresholdFamily fam;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  auto candidate = [&](double lo, double hi) {
    const double t = 0.5 * (lo + hi);
    const double guard = kGapGuard * std::max({scale, std::abs(lo), std::abs(hi)});
    if (t > lo && t < hi && hi - lo >= guard) return t;
    return std::numeric_limits<double>::quiet_NaN();
  };

  // Flip {v > t}: walk distinct positive values downward; the candidate for
  // value v sits between v and the next distinct value below (clipped at 0).
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    const double v = *it;
    if (!(v > 0.0)) break;
    const auto next = it + 1;
    const double lo = (next != sorted.rend()) ? std::max(*next, 0.0) : 0.0;
    fam.pos_values.push_back(v);
    fam.pos_t.push_back(candidate(lo, v));
  }
  // Flip {v < t}: walk distinct negative values upward.
  for (auto it = sorted.begin(); it != sorted.end(); ++it) {
    const double v = *it;
    if (!(v < 0.0)) break;
    const auto next = it + 1;
    const double hi = (next != sorted.end()) ? std::min(*next, 0.0) : 0.0;
    fam.neg_values.push_back(v);
    fam.neg_t.push_back(candidate(v, hi));
  }
  return fam;
}

/// Sweeps both threshold families over per-point `values`, invoking
/// `consider(t, book)` at every valid candidate.  The candidate with
/// threshold t flips exactly the points already folded into the book.
template <typename Consider>
void sweep_values(const SweepData& data, std::span<const double> values,
                  double scale, Consider&& consider) {
  const ThresholdFamily fam = threshold_family_impl(values, scale);

  std::vector<std::size_t> order(data.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });

  Book book(data);
  std::size_t pos = 0;  // cursor into `order`, descending values
  for (std::size_t j = 0; j < fam.pos_values.size(); ++j) {
    const double v = fam.pos_values[j];
    while (pos < data.n && values[order[pos]] == v) {
      book.flip(order[pos]);
      ++pos;
    }
    if (!std::isnan(fam.pos_t[j])) consider(fam.pos_t[j], book);
  }

  book.reset();
  std::size_t neg = data.n;  // cursor walking `order` backwards, ascending
  for (std::size_t j = 0; j < fam.neg_values.size(); ++j) {
    const double v = fam.neg_values[j];
    while (neg > 0 && values[order[neg - 1]] == v) {
      --neg;
      book.flip(order[neg]);
    }
    if (!std::isnan(fam.neg_t[j])) consider(fam.neg_t[j], book);
  }
}

std::vector<double> scaled_direction(std::span<const double> w, double t) {
  std::vector<double> z(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) z[k] = w[k] / t;
  return z;
}

double direction_scale(const BiasScores& scores, std::span<const double> w) {
  double scale = 0.0;
  for (std::size_t i = 0; i < scores.n; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < scores.K; ++k) {
      sum += std::abs(w[k] * scores.score(i, k));
    }
    scale = std::max(scale, sum);
  }
  return scale;
}

std::vector<ModificationRule> fit_threshold_multi(
    const BiasScores& scores, const LabeledDataset& val,
    const CriterionSpec& criterion, const std::vector<double>& deltas) {
  if (scores.K != 1) {
    throw std::invalid_argument("fit_threshold requires K=1 scores");
  }
  const SweepData data = build_sweep_data(scores, val, criterion);

  std::vector<DeltaTracker> trackers;
  for (double delta : deltas) {
    if (!(delta >= 0.0)) throw std::invalid_argument("fit: delta must be >= 0");
    trackers.push_back(DeltaTracker{delta});
  }

  const Book base(data);
  const CandidateStats base_stats = stats_of(base);
  const std::vector<double> zero{0.0};
  for (auto& tr : trackers) tr.consider(base_stats, zero);

  sweep_values(data, scores.s, direction_scale(scores, std::vector<double>{1.0}),
               [&](double t, const Book& book) {
                 const CandidateStats st = stats_of(book);
                 const std::vector<double> z{1.0 / t};
                 for (auto& tr : trackers) tr.consider(st, z);
               });

  std::vector<ModificationRule> rules;
  for (const auto& tr : trackers) {
    rules.push_back(finalize_rule(tr, "threshold", 0, scores, val, criterion));
  }
  return rules;
}

std::vector<ModificationRule> fit_directions_multi(
    const BiasScores& scores, const LabeledDataset& val,
    const CriterionSpec& criterion, const std::vector<double>& deltas,
    std::size_t n_dirs, std::uint64_t seed) {
  if (scores.K < 2) {
    throw std::invalid_argument("fit_directions requires K>=2 scores");
  }
  if (n_dirs < 2) {
    throw std::invalid_argument("fit_directions requires n_dirs >= 2");
  }
  const SweepData data = build_sweep_data(scores, val, criterion);

  std::vector<DeltaTracker> trackers;
  for (double delta : deltas) {
    if (!(delta >= 0.0)) throw std::invalid_argument("fit: delta must be >= 0");
    trackers.push_back(DeltaTracker{delta});
  }

  const Book base(data);
  const CandidateStats base_stats = stats_of(base);
  const std::vector<double> zero(scores.K, 0.0);
  for (auto& tr : trackers) tr.consider(base_stats, zero);

  const auto dirs = make_directions(scores.K, n_dirs, seed);
  std::vector<double> proj(scores.n);
  for (const auto& w : dirs) {
    for (std::size_t i = 0; i < scores.n; ++i) {
      double p = 0.0;
      for (std::size_t k = 0; k < scores.K; ++k) p += w[k] * scores.score(i, k);
      proj[i] = p;
    }
    const double scale = direction_scale(scores, w);
    sweep_values(data, proj, scale, [&](double t, const Book& book) {
      const CandidateStats st = stats_of(book);
      const std::vector<double> z = scaled_direction(w, t);
      for (auto& tr : trackers) tr.consider(st, z);
    });
  }

  std::vector<ModificationRule> rules;
  for (const auto& tr : trackers) {
    rules.push_back(finalize_rule(tr, "directions", seed, scores, val, criterion));
  }
  return rules;
}

std::vector<ModificationRule> fit_line_pairs_multi(
    const BiasScores& scores, const LabeledDataset& val,
    const CriterionSpec& criterion, const std::vector<double>& deltas,
    std::size_t M, std::uint64_t seed) {
  if (scores.K != 2) {
    throw std::invalid_argument("fit_line_pairs requires K=2 scores");
  }
  if (M < 2) throw std::invalid_argument("fit_line_pairs requires M >= 2");
  const SweepData data = build_sweep_data(scores, val, criterion);

  std::vector<DeltaTracker> trackers;
  for (double delta : deltas) {
    if (!(delta >= 0.0)) throw std::invalid_argument("fit: delta must be >= 0");
    trackers.push_back(DeltaTracker{delta});
  }

  const Book base(data);
  const CandidateStats base_stats = stats_of(base);
  const std::vector<double> zero{0.0, 0.0};
  for (auto& tr : trackers) tr.consider(base_stats, zero);

  std::vector<std::size_t> sample;
  if (M >= scores.n) {
    sample.resize(scores.n);
    std::iota(sample.begin(), sample.end(), 0);
  } else {
    sample = sample_without_replacement(scores.n, M, seed);
  }

  // Column copies plus per-point int8 deltas keep the O(M^2 N) inner loop
  // branch-light.
  const std::size_t n = scores.n;
  std::vector<double> s0(n), s1(n);
  std::vector<std::int8_t> da0(n, 0), db0(n, 0), da1(n, 0), db1(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    s0[i] = scores.score(i, 0);
    s1[i] = scores.score(i, 1);
    const std::int8_t pd = data.pos_delta[i];
    if (data.side[i * 2] == 0) da0[i] = pd;
    if (data.side[i * 2] == 1) db0[i] = pd;
    if (data.side[i * 2 + 1] == 0) da1[i] = pd;
    if (data.side[i * 2 + 1] == 1) db1[i] = pd;
  }

  std::vector<double> z(2);
  for (std::size_t a = 0; a + 1 < sample.size(); ++a) {
    const std::size_t ia = sample[a];
    const double p0 = s0[ia], p1 = s1[ia];
    for (std::size_t b = a + 1; b < sample.size(); ++b) {
      const std::size_t ib = sample[b];
      // Normal to the segment; the offset's sign picks the half-plane away
      // from the score-space origin, the only side 1{z.s > 1} can express.
      const double n0 = p1 - s1[ib];
      const double n1 = s0[ib] - p0;
      const double c = n0 * p0 + n1 * p1;
      if (c == 0.0) continue;
      const double z0 = n0 / c;
      const double z1 = n1 / c;
      if (!std::isfinite(z0) || !std::isfinite(z1)) continue;

      std::int64_t correct = data.base_correct;
      std::int64_t pa0 = data.base_pos_a[0], pb0 = data.base_pos_b[0];
      std::int64_t pa1 = data.base_pos_a[1], pb1 = data.base_pos_b[1];
      std::int64_t flips = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (z0 * s0[i] + z1 * s1[i] > 1.0) {
          correct += data.correct_delta[i];
          pa0 += da0[i];
          pb0 += db0[i];
          pa1 += da1[i];
          pb1 += db1[i];
          ++flips;
        }
      }
      const double c0 =
          static_cast<double>(pa0) / static_cast<double>(data.n_a[0]) -
          static_cast<double>(pb0) / static_cast<double>(data.n_b[0]);
      const double c1 =
          static_cast<double>(pa1) / static_cast<double>(data.n_a[1]) -
          static_cast<double>(pb1) / static_cast<double>(data.n_b[1]);
      const CandidateStats st{correct, std::max(std::abs(c0), std::abs(c1)),
                              flips};
      z[0] = z0;
      z[1] = z1;
      for (auto& tr : trackers) tr.consider(st, z);
    }
  }

  std::vector<ModificationRule> rules;
  for (const auto& tr : trackers) {
    rules.push_back(finalize_rule(tr, "pairs", seed, scores, val, criterion));
  }
  return rules;
}

}  // namespace

ThresholdFamily threshold_family(std::span<const double> values, double scale) {
  return threshold_family_impl(values, scale);
}

ModificationRule fit_threshold(const BiasScores& scores,
                               const LabeledDataset& val,
                               const CriterionSpec& criterion, double delta) {
  return fit_threshold_multi(scores, val, criterion, {delta}).front();
}

ModificationRule fit_line_pairs(const BiasScores& scores,
                                const LabeledDataset& val,
                                const CriterionSpec& criterion, double delta,
                                std::size_t M, std::uint64_t seed) {
  return fit_line_pairs_multi(scores, val, criterion, {delta}, M, seed).front();
}

ModificationRule fit_directions(const BiasScores& scores,
                                const LabeledDataset& val,
                                const CriterionSpec& criterion, double delta,
                                std::size_t n_dirs, std::uint64_t seed) {
  return fit_directions_multi(scores, val, criterion, {delta}, n_dirs, seed)
      .front();
}

void fit_threshold_trace(const BiasScores& scores, const LabeledDataset& val,
                         const CriterionSpec& criterion,
                         const std::function<void(const SweepState&)>& visit) {
  if (scores.K != 1) {
    throw std::invalid_argument("fit_threshold_trace requires K=1 scores");
  }
  const SweepData data = build_sweep_data(scores, val, criterion);
  const Book base(data);
  SweepState state;
  state.z = {0.0};
  state.correct = base.correct;
  state.pos_a = base.pos_a;
  state.pos_b = base.pos_b;
  state.flips = 0;
  visit(state);
  sweep_values(data, scores.s, direction_scale(scores, std::vector<double>{1.0}),
               [&](double t, const Book& book) {
                 SweepState st;
                 st.z = {1.0 / t};
                 st.correct = book.correct;
                 st.pos_a = book.pos_a;
                 st.pos_b = book.pos_b;
                 st.flips = book.flips;
                 visit(st);
               });
}

std::vector<FrontierPoint> frontier(const BiasScores& val_scores,
                                    const LabeledDataset& val,
                                    const BiasScores* test_scores,
                                    const LabeledDataset* test,
                                    const CriterionSpec& criterion,
                                    const std::vector<double>& deltas,
                                    FitMethod method,
                                    const SearchParams& params) {
  if (deltas.empty()) throw std::invalid_argument("frontier: no deltas given");
  if ((test_scores == nullptr) != (test == nullptr)) {
    throw std::invalid_argument("frontier: test scores and labels go together");
  }

  std::vector<ModificationRule> rules;
  switch (method) {
    case FitMethod::threshold:
      rules = fit_threshold_multi(val_scores, val, criterion, deltas);
      break;
    case FitMethod::pairs:
      rules = fit_line_pairs_multi(val_scores, val, criterion, deltas,
                                   params.M, params.seed);
      break;
    case FitMethod::directions:
      rules = fit_directions_multi(val_scores, val, criterion, deltas,
                                   params.n_dirs, params.seed);
      break;
  }

  std::vector<FrontierPoint> points;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    FrontierPoint pt;
    pt.delta = deltas[d];
    pt.rule = rules[d];
    pt.val_report = composite(apply_rule(pt.rule, val_scores), val, criterion);
    if (test_scores) {
      pt.test_report =
          composite(apply_rule(pt.rule, *test_scores), *test, criterion);
    }
    points.push_back(std::move(pt));
  }
  return points;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t m,
                                                    std::uint64_t seed) {
  if (m > n) throw std::invalid_argument("sample size exceeds population");
  Rng rng(seed);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return pool;
}

std::vector<std::vector<double>> make_directions(std::size_t K,
                                                 std::size_t n_dirs,
                                                 std::uint64_t seed) {
  std::vector<std::vector<double>> dirs;
  dirs.reserve(n_dirs);
  if (K == 2) {
    for (std::size_t j = 0; j < n_dirs; ++j) {
      const double angle = 2.0 * 3.14159265358979323846 *
                           static_cast<double>(j) / static_cast<double>(n_dirs);
      dirs.push_back({std::cos(angle), std::sin(angle)});
    }
    return dirs;
  }
  Rng rng(seed);
  while (dirs.size() < n_dirs) {
    std::vector<double> w(K);
    double norm2 = 0.0;
    for (auto& v : w) {
      v = rng.normal();
      norm2 += v * v;
    }
    if (norm2 <= 1e-24) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : w) v *= inv;
    dirs.push_back(std::move(w));
  }
  return dirs;
}

}  // namespace fairpost
