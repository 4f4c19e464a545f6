// Acceptance suite: one self-contained check per criterion, one PASS/FAIL
// line each.  Exit status is the number of failed criteria (dataset-gated
// checks print SKIP and do not fail).
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "fairpost/metrics.hpp"
#include "fairpost/oracle.hpp"
#include "fairpost/rng.hpp"
#include "fairpost/scores.hpp"
#include "fairpost/search.hpp"
#include "fairpost/synth.hpp"

using namespace fairpost;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

void skip(int number, const std::string& name, const std::string& detail) {
  std::printf("[SKIP] %d %s: %s\n", number, name.c_str(), detail.c_str());
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

LabeledDataset random_dataset(std::size_t n, Rng& rng) {
  LabeledDataset ds;
  ds.n = n;
  ds.attribute_names = {"A"};
  ds.attribute_values.emplace_back();
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels.push_back(rng.uniform01() < 0.5 ? 0 : 1);
    ds.attribute_values[0].push_back(rng.uniform01() < 0.5 ? 0 : 1);
  }
  ds.labels[0] = 0; ds.attribute_values[0][0] = 0;
  ds.labels[1] = 0; ds.attribute_values[0][1] = 1;
  ds.labels[2] = 1; ds.attribute_values[0][2] = 0;
  ds.labels[3] = 1; ds.attribute_values[0][3] = 1;
  return ds;
}

BiasScores random_scores(const LabeledDataset& ds,
                         const CriterionSpec& criterion, Rng& rng) {
  ProbTable probs;
  probs.n = ds.n;
  for (std::size_t i = 0; i < ds.n; ++i) probs.p_y.push_back(rng.uniform01());
  probs.p_a.assign(criterion.K(), {});
  probs.p_b.assign(criterion.K(), {});
  for (std::size_t k = 0; k < criterion.K(); ++k) {
    for (std::size_t i = 0; i < ds.n; ++i) {
      probs.p_a[k].push_back(rng.uniform01());
      probs.p_b[k].push_back(rng.uniform01());
    }
  }
  return bias_scores(probs, estimate_priors(ds, criterion));
}

// ------------------------------------------------------------------ 1
void criterion_identities() {
  Rng rng(101);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 200;
    const auto ds = random_dataset(n, rng);
    const auto criterion = rep % 2 == 0 ? CriterionSpec::demographic_parity("A")
                                        : CriterionSpec::equalized_odds("A");
    const auto scores = random_scores(ds, criterion, rng);
    ModificationRule rule;
    for (std::size_t k = 0; k < criterion.K(); ++k) {
      rule.z.push_back(rng.uniform(-3.0, 3.0));
    }
    const auto out = apply_rule(rule, scores);
    const auto after = composite(out, ds, criterion);
    const auto before = composite(scores.yhat, ds, criterion);

    double acc_delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.flip[i]) acc_delta += 1.0 - 2.0 * (scores.yhat[i] == ds.labels[i]);
    }
    worst = std::max(worst, std::abs(after.accuracy - before.accuracy -
                                     acc_delta / static_cast<double>(n)));

    const auto f_emp = empirical_group_functions(scores.yhat, ds, criterion);
    for (std::size_t k = 0; k < criterion.K(); ++k) {
      double flip_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (out.flip[i]) flip_sum += f_emp[i * criterion.K() + k];
      }
      worst = std::max(worst, std::abs(after.disparities[k] -
                                       (before.disparities[k] -
                                        flip_sum / static_cast<double>(n))));
    }
  }
  report(1, "update-identities", worst <= 1e-12,
         "max residual " + fmt(worst) + " over 100 instances (tol 1e-12)");
}

// ------------------------------------------------------------------ 2
void criterion_sweep_equivalence() {
  Rng rng(102);
  std::int64_t candidates = 0;
  bool ok = true;
  for (int rep = 0; rep < 50 && ok; ++rep) {
    const std::size_t n = 10 + static_cast<std::size_t>(rng.below(120));
    const auto ds = random_dataset(n, rng);
    const auto criterion = CriterionSpec::demographic_parity("A");
    const auto scores = random_scores(ds, criterion, rng);
    fit_threshold_trace(scores, ds, criterion, [&](const SweepState& st) {
      ++candidates;
      ModificationRule rule;
      rule.z = st.z;
      const auto out = apply_rule(rule, scores);
      std::int64_t correct = 0, flips = 0;
      for (std::size_t i = 0; i < n; ++i) {
        correct += out.pred[i] == ds.labels[i];
        flips += out.flip[i];
      }
      if (correct != st.correct || flips != st.flips) ok = false;
      const auto& comp = criterion.components[0];
      std::int64_t pos_a = 0, pos_b = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const Side side = comp.side_of(ds, i);
        if (side == Side::a) pos_a += out.pred[i];
        if (side == Side::b) pos_b += out.pred[i];
      }
      if (pos_a != st.pos_a[0] || pos_b != st.pos_b[0]) ok = false;
    });
  }
  report(2, "sweep-equivalence", ok,
         "incremental counts equal naive recomputation at " +
             std::to_string(candidates) + " candidates over 50 instances");
}

// ------------------------------------------------------------------ 3
void criterion_oracle_equivalence() {
  Rng rng(103);
  double worst_gap = 0.0;
  bool ok = true;
  int solved = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(11));
    const std::size_t K = 1 + static_cast<std::size_t>(rng.below(2));
    LpInstance inst;
    inst.n = n;
    inst.K = K;
    for (std::size_t i = 0; i < n; ++i) inst.eta.push_back(rng.uniform(0.05, 1.0));
    for (std::size_t i = 0; i < n * K; ++i) inst.f.push_back(rng.uniform(-2.0, 2.0));
    for (std::size_t k = 0; k < K; ++k) inst.c_star.push_back(rng.uniform(-1.0, 1.0));
    inst.delta = rng.uniform(0.0, 0.6);

    const auto lp = solve_primal(inst);
    const auto brute = brute_force(inst);
    if (lp.status == LpStatus::infeasible) {
      if (brute.status != LpStatus::infeasible) ok = false;
      continue;
    }
    ++solved;
    int fractional = 0;
    for (double k : lp.kappa) fractional += k > 1e-9 && k < 1.0 - 1e-9;
    if (brute.status == LpStatus::optimal) {
      if (brute.objective < lp.objective - 1e-9) ok = false;
      if (fractional == 0 &&
          std::abs(brute.objective - lp.objective) > 1e-9) {
        ok = false;
      }
    }
    const auto dual = solve_dual(inst);
    worst_gap = std::max(worst_gap, std::abs(dual.value - lp.objective));
  }
  ok = ok && worst_gap <= 1e-7;
  report(3, "oracle-equivalence", ok,
         std::to_string(solved) + " solved instances, worst duality gap " +
             fmt(worst_gap) + " (tol 1e-7)");
}

// --------------------------------------------------------------- 4 & 5
struct SynthInstance {
  LabeledDataset ds;
  CriterionSpec criterion;
  BiasScores scores;
  EvalReport base;
};

SynthInstance pinned_instance() {
  SynthInstance si;
  const auto spec = GaussianMixtureSpec::default_spec();
  si.ds = sample(spec, 131);
  const auto classes = joint_class_labels(si.ds, "A");
  SoftmaxHyper hyper;  // rate 0.1, 5000 iterations, l2 1e-4
  const auto model =
      fit_softmax(si.ds.features, si.ds.n, 2, classes, 4, hyper);
  si.criterion = estimate_priors(si.ds, CriterionSpec::equalized_odds("A"));
  const auto probs = predict_probs(model, si.ds.features, si.ds.n, si.criterion);
  si.scores = bias_scores(probs, si.criterion);
  std::vector<std::uint8_t> yhat(si.scores.yhat.begin(), si.scores.yhat.end());
  si.base = composite(yhat, si.ds, si.criterion);
  return si;
}

void criterion_search_vs_oracle(const SynthInstance& si) {
  double worst = 0.0;
  std::string detail;
  for (double delta : {0.15, 0.01}) {
    const auto lp =
        solve_primal(empirical_lp_instance(si.scores, si.ds, si.criterion, delta));
    const double implied = si.base.accuracy - lp.objective;
    const auto pairs =
        fit_line_pairs(si.scores, si.ds, si.criterion, delta, si.scores.n, 0);
    const auto dirs =
        fit_directions(si.scores, si.ds, si.criterion, delta, 256, 0);
    const double gp = std::abs(pairs.provenance.val_accuracy - implied);
    const double gd = std::abs(dirs.provenance.val_accuracy - implied);
    worst = std::max({worst, gp, gd});
    detail += "d=" + fmt(delta) + " implied=" + fmt(implied) +
              " pairs=" + fmt(pairs.provenance.val_accuracy) +
              " dirs=" + fmt(dirs.provenance.val_accuracy) + "; ";
  }
  report(4, "search-vs-oracle", worst <= 0.01,
         detail + "worst gap " + fmt(worst) + " (tol 0.01)");
}

void criterion_unflip(const SynthInstance& si) {
  const auto loose =
      solve_primal(empirical_lp_instance(si.scores, si.ds, si.criterion, 0.15));
  const auto tight =
      solve_primal(empirical_lp_instance(si.scores, si.ds, si.criterion, 0.01));
  int flips_loose = 0, flips_tight = 0, unflipped = 0, unflipped_support = 0;
  for (std::size_t i = 0; i < si.scores.n; ++i) {
    const bool a = loose.kappa[i] >= 1.0 - 1e-9;
    const bool b = tight.kappa[i] >= 1.0 - 1e-9;
    flips_loose += a;
    flips_tight += b;
    unflipped += a && !b;
    unflipped_support += (loose.kappa[i] > 1e-9) && (tight.kappa[i] <= 1e-9);
  }
  const bool pass = unflipped > 0 || unflipped_support > 0;
  report(5, "unflip-nonnested", pass,
         "base EO " + fmt(si.base.cc) + ", flips " +
             std::to_string(flips_loose) + " @0.15 vs " +
             std::to_string(flips_tight) +
             " @0.01, flipped-then-unflipped " + std::to_string(unflipped) +
             " (support " + std::to_string(unflipped_support) +
             "); the plug-in base EO of this construction concentrates far "
             "below 0.15, so the loose constraint barely binds");
}

// ------------------------------------------------------------------ 6
void criterion_group_aware() {
  Rng rng(106);
  int violations = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 50 + static_cast<std::size_t>(rng.below(50));
    LabeledDataset ds;
    ds.n = n;
    ds.attribute_names = {"A"};
    ds.attribute_values.emplace_back();
    ProbTable probs;
    probs.n = n;
    probs.p_a.assign(1, {});
    probs.p_b.assign(1, {});
    for (std::size_t i = 0; i < n; ++i) {
      const int a = rng.uniform01() < 0.5 ? 0 : 1;
      const int y = rng.uniform01() < 0.5 ? 0 : 1;
      ds.attribute_values[0].push_back(static_cast<std::uint8_t>(a));
      ds.labels.push_back(static_cast<std::uint8_t>(y));
      const double p_y = rng.uniform01();
      probs.p_y.push_back(p_y);
      probs.p_a[0].push_back(a == 0 ? p_y : 0.0);
      probs.p_b[0].push_back(a == 1 ? p_y : 0.0);
    }
    ds.labels[0] = 1; ds.attribute_values[0][0] = 0;
    probs.p_y[0] = 0.9; probs.p_a[0][0] = 0.9; probs.p_b[0][0] = 0.0;
    ds.labels[1] = 1; ds.attribute_values[0][1] = 1;
    probs.p_y[1] = 0.8; probs.p_a[0][1] = 0.0; probs.p_b[0][1] = 0.8;

    const auto criterion =
        estimate_priors(ds, CriterionSpec::equalized_opportunity("A"));
    const auto scores = bias_scores(probs, criterion);
    const auto rule =
        fit_threshold(scores, ds, criterion, rng.uniform(0.02, 0.25));
    const auto out = apply_rule(rule, scores);
    for (int g = 0; g < 2; ++g) {
      for (std::size_t i = 0; i < n; ++i) {
        if (ds.attribute_values[0][i] != g) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (ds.attribute_values[0][j] != g) continue;
          if (probs.p_y[i] < probs.p_y[j] && out.pred[i] > out.pred[j]) {
            ++violations;
          }
        }
      }
    }
  }
  report(6, "group-aware-reduction", violations == 0,
         std::to_string(violations) +
             " threshold violations over 20 instances with deterministic "
             "group probabilities");
}

// ------------------------------------------------------------------ 7
void criterion_adherence_scaling() {
  const auto spec = GaussianMixtureSpec::default_spec();
  const double delta = 0.05;
  const std::vector<std::size_t> sizes{500, 2000, 8000};
  std::vector<double> excess(sizes.size(), 0.0);
  const int n_seeds = 20;
  for (int s = 0; s < n_seeds; ++s) {
    const auto test = sample(spec.scaled(100000), 7000 + s);
    const auto test_criterion =
        estimate_priors(test, CriterionSpec::demographic_parity("A"));
    const auto test_probs =
        true_posteriors(spec, test.features, test.n, test_criterion);
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      const auto val = sample(spec.scaled(sizes[j]), 9000 + 31 * s + j);
      const auto criterion =
          estimate_priors(val, CriterionSpec::demographic_parity("A"));
      const auto val_probs =
          true_posteriors(spec, val.features, val.n, criterion);
      const auto val_scores = bias_scores(val_probs, criterion);
      const auto rule = fit_threshold(val_scores, val, criterion, delta);
      const auto test_scores = bias_scores(test_probs, criterion);
      const auto out = apply_rule(rule, test_scores);
      const auto test_report = composite(out, test, test_criterion);
      excess[j] += std::max(0.0, test_report.cc - delta);
    }
  }
  for (auto& e : excess) e /= n_seeds;
  const bool pass = excess[0] > excess[1] && excess[1] > excess[2];
  report(7, "adherence-scaling", pass,
         "mean test excess over " + std::to_string(n_seeds) +
             " seeds: N=500 -> " + fmt(excess[0]) + ", N=2000 -> " +
             fmt(excess[1]) + ", N=8000 -> " + fmt(excess[2]));
}

// ------------------------------------------------------------------ 8
void criterion_corruption() {
  const auto spec = GaussianMixtureSpec::default_spec();
  const double delta = 0.05;
  const auto train = sample(spec, 801);
  const auto val = sample(spec, 802);
  const auto test = sample(spec.scaled(20000), 803);

  const auto classes = joint_class_labels(train, "A");
  SoftmaxHyper hyper;
  const auto model = fit_softmax(train.features, train.n, 2, classes, 4, hyper);
  const auto criterion =
      estimate_priors(train, CriterionSpec::demographic_parity("A"));
  const auto val_probs = predict_probs(model, val.features, val.n, criterion);
  const auto test_probs = predict_probs(model, test.features, test.n, criterion);
  const auto test_criterion =
      estimate_priors(test, CriterionSpec::demographic_parity("A"));

  double acc_at_zero = 0.0, acc_at_max = 0.0, worst_dp = 0.0;
  std::string detail;
  for (int step = 0; step <= 5; ++step) {
    const double alpha = 0.02 * step;
    const auto vp = corrupt(val_probs, alpha, 900 + step);
    const auto tp = corrupt(test_probs, alpha, 950 + step);
    const auto vs = bias_scores(vp, criterion);
    const auto ts = bias_scores(tp, criterion);
    const auto rule = fit_threshold(vs, val, criterion, delta);
    const auto out = apply_rule(rule, ts);
    const auto report_t = composite(out, test, test_criterion);
    if (step == 0) acc_at_zero = report_t.accuracy;
    if (step == 5) acc_at_max = report_t.accuracy;
    worst_dp = std::max(worst_dp, report_t.cc);
    detail += "a=" + fmt(alpha) + ":acc=" + fmt(report_t.accuracy) +
              ",dp=" + fmt(report_t.cc) + " ";
  }
  const bool pass =
      acc_at_zero - acc_at_max <= 0.02 && worst_dp <= delta + 0.03;
  report(8, "corruption-robustness", pass,
         detail + "drop " + fmt(acc_at_zero - acc_at_max) +
             " (tol 0.02), worst test DP " + fmt(worst_dp) + " (tol " +
             fmt(delta + 0.03) + ")");
}

// ------------------------------------------------------------------ 9
void criterion_gradient_check() {
  Rng rng(109);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 4 + static_cast<std::size_t>(rng.below(12));
    const std::size_t dim = 1 + static_cast<std::size_t>(rng.below(3));
    const std::size_t C = 2 + static_cast<std::size_t>(rng.below(3));
    std::vector<double> X(n * dim);
    for (auto& v : X) v = rng.uniform(-2.0, 2.0);
    std::vector<int> classes(n);
    for (auto& c : classes) c = static_cast<int>(rng.below(C));
    std::vector<double> W((dim + 1) * C);
    for (auto& w : W) w = rng.uniform(-1.0, 1.0);
    const double l2 = rng.uniform(0.0, 0.01);
    std::vector<double> grad;
    softmax_loss_grad(W, X, n, dim, classes, C, l2, &grad);
    const double h = 1e-6;
    for (std::size_t j = 0; j < W.size(); ++j) {
      std::vector<double> Wp = W, Wm = W;
      Wp[j] += h;
      Wm[j] -= h;
      const double fd = (softmax_loss_grad(Wp, X, n, dim, classes, C, l2, nullptr) -
                         softmax_loss_grad(Wm, X, n, dim, classes, C, l2, nullptr)) /
                        (2.0 * h);
      const double scale = std::max({std::abs(fd), std::abs(grad[j]), 1.0});
      worst = std::max(worst, std::abs(grad[j] - fd) / scale);
    }
  }
  report(9, "gradient-check", worst <= 1e-5,
         "worst relative error " + fmt(worst) + " over 50 problems (tol 1e-5)");
}

// ----------------------------------------------------------------- 10
void criterion_adult() {
  const char* dir = std::getenv("FAIRPOST_ADULT_DIR");
  if (dir == nullptr) {
    skip(10, "adult-dp-frontier",
         "set FAIRPOST_ADULT_DIR to a directory with adult_train.csv, "
         "adult_val.csv, adult_test.csv (columns: features..., Y, A)");
    return;
  }
  const std::string base(dir);
  const DatasetSchema schema{"Y", {"A"}, {}, true};
  const auto train = load_labeled(base + "/adult_train.csv", schema);
  const auto val = load_labeled(base + "/adult_val.csv", schema);
  const auto test = load_labeled(base + "/adult_test.csv", schema);

  const auto classes = joint_class_labels(train, "A");
  SoftmaxHyper hyper;
  const auto model = fit_softmax(train.features, train.n, train.feature_dim,
                                 classes, 4, hyper);
  auto criterion = estimate_priors(train, CriterionSpec::demographic_parity("A"));
  const auto val_scores = bias_scores(
      predict_probs(model, val.features, val.n, criterion), criterion);
  const auto test_scores = bias_scores(
      predict_probs(model, test.features, test.n, criterion), criterion);
  const auto points =
      frontier(val_scores, val, &test_scores, &test, criterion,
               {0.10, 0.05, 0.01}, FitMethod::threshold, {});
  bool pass = true;
  std::string detail;
  for (const auto& pt : points) {
    const double test_dp = pt.test_report->cc;
    pass = pass && test_dp <= pt.delta + 0.02;
    detail += "d=" + fmt(pt.delta) + ":test_dp=" + fmt(test_dp) +
              ",acc=" + fmt(pt.test_report->accuracy) + " ";
  }
  report(10, "adult-dp-frontier", pass, detail + "(tol delta + 0.02)");
}

}  // namespace

int main() {
  criterion_identities();
  criterion_sweep_equivalence();
  criterion_oracle_equivalence();
  const auto si = pinned_instance();
  criterion_search_vs_oracle(si);
  criterion_unflip(si);
  criterion_group_aware();
  criterion_adherence_scaling();
  criterion_corruption();
  criterion_gradient_check();
  criterion_adult();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
  } else {
    std::printf("all criteria passed\n");
  }
  return g_failures;
}
