// Command-line front end: synth, train-aux, score, fit, apply, eval,
// frontier, oracle, corrupt, render.  Every run writes a provenance JSON
// beside its primary output with the exact configuration and library
// version, so any artifact can be regenerated.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairpost/csv.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/metrics.hpp"
#include "fairpost/oracle.hpp"
#include "fairpost/render.hpp"
#include "fairpost/rule.hpp"
#include "fairpost/scores.hpp"
#include "fairpost/search.hpp"
#include "fairpost/synth.hpp"
#include "fairpost/version.hpp"

using json = nlohmann::ordered_json;
using namespace fairpost;

namespace {

struct CommonOpts {
  std::string label = "Y";
  std::string attr = "A";
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--label", opts->label, "Label column name");
  cmd->add_option("--attr", opts->attr, "Sensitive attribute column name");
}

DatasetSchema schema_of(const CommonOpts& opts, bool features) {
  DatasetSchema schema;
  schema.label = opts.label;
  schema.attributes = {opts.attr};
  schema.features_rest = features;
  return schema;
}

void write_provenance(const std::string& out_path, const std::string& command,
                      const json& options) {
  json prov;
  prov["tool"] = "fairpost";
  prov["version"] = kVersion;
  prov["command"] = command;
  prov["options"] = options;
  std::ofstream out(out_path + ".provenance.json");
  out << prov.dump(2) << "\n";
}

double parse_delta(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  const double d = parse_double(text, "--delta");
  if (!(d > 0.0 && d <= 1.0)) {
    throw CLI::ValidationError(
        "--delta", "delta must lie in (0, 1] or be 'inf' (got " + text + ")");
  }
  return d;
}

std::string fmt(double v) { return format_double(v); }

void print_report(const std::string& name, const EvalReport& report,
                  const CriterionSpec& criterion) {
  std::printf("%saccuracy: %s\n", name.c_str(), fmt(report.accuracy).c_str());
  for (std::size_t k = 0; k < report.disparities.size(); ++k) {
    std::printf("%sdisparity_%s: %s\n", name.c_str(),
                criterion.components[k].name.c_str(),
                fmt(report.disparities[k]).c_str());
  }
  std::printf("%scc: %s\n", name.c_str(), fmt(report.cc).c_str());
  std::printf("%sflips: %lld\n", name.c_str(),
              static_cast<long long>(report.flip_count));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness post-processing via instance-level bias scores"};
  app.require_subcommand(1);

  std::string stage = "startup";
  try {
    // ---------------------------------------------------------------- synth
    auto* synth_cmd = app.add_subcommand(
        "synth", "Sample the synthetic two-group Gaussian benchmark");
    std::uint64_t synth_seed = 0;
    bool synth_seed_set = false;
    std::size_t synth_n = 0;
    std::string synth_out;
    synth_cmd->add_option("--seed", synth_seed, "RNG seed")
        ->each([&](const std::string&) { synth_seed_set = true; });
    synth_cmd->add_option("--n", synth_n,
                          "Total sample size (cells scaled proportionally)");
    synth_cmd->add_option("--out", synth_out, "Output CSV")->required();
    synth_cmd->callback([&] {
      stage = "synth";
      if (!synth_seed_set) {
        throw CLI::ValidationError("--seed", "synth is stochastic: --seed is required");
      }
      auto spec = GaussianMixtureSpec::default_spec();
      if (synth_n > 0) spec = spec.scaled(synth_n);
      const auto ds = sample(spec, synth_seed);
      save_labeled(synth_out, ds);
      write_provenance(synth_out, "synth",
                       {{"seed", synth_seed}, {"n", ds.n}, {"out", synth_out}});
      std::printf("synth: wrote %zu rows to %s\n", ds.n, synth_out.c_str());
    });

    // ------------------------------------------------------------ train-aux
    auto* train_cmd = app.add_subcommand(
        "train-aux", "Train the 4-class auxiliary model and emit probabilities");
    CommonOpts train_common;
    std::string train_data, train_apply, train_out, train_criterion = "eo";
    SoftmaxHyper hyper;
    add_common(train_cmd, &train_common);
    train_cmd->add_option("--data", train_data, "Training CSV")
        ->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--apply-to", train_apply,
                          "Rows to score (defaults to the training file)")
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--criterion", train_criterion, "dp, eop, or eo");
    train_cmd->add_option("--lr", hyper.learning_rate, "Learning rate");
    train_cmd->add_option("--iters", hyper.iterations, "Gradient steps");
    train_cmd->add_option("--l2", hyper.l2, "Ridge strength");
    train_cmd->add_option("--seed", hyper.seed, "Recorded seed");
    train_cmd->add_option("--out", train_out, "Output probability CSV")->required();
    train_cmd->callback([&] {
      stage = "train-aux";
      const auto schema = schema_of(train_common, true);
      const auto train = load_labeled(train_data, schema);
      const auto classes = joint_class_labels(train, train_common.attr);
      const auto model =
          fit_softmax(train.features, train.n, train.feature_dim, classes, 4, hyper);
      const auto target = train_apply.empty()
                              ? train
                              : load_labeled(train_apply, schema);
      const auto criterion =
          make_criterion(parse_criterion_kind(train_criterion), train_common.attr);
      const auto probs =
          predict_probs(model, target.features, target.n, criterion);
      save_probs(train_out, probs, criterion);
      write_provenance(train_out, "train-aux",
                       {{"data", train_data},
                        {"apply_to", train_apply},
                        {"criterion", train_criterion},
                        {"lr", hyper.learning_rate},
                        {"iters", hyper.iterations},
                        {"l2", hyper.l2},
                        {"seed", hyper.seed},
                        {"out", train_out}});
      std::printf("train-aux: wrote %zu rows to %s\n", target.n, train_out.c_str());
    });

    // ----------------------------------------------------------------- score
    auto* score_cmd = app.add_subcommand(
        "score", "Compute bias scores from a probability table");
    CommonOpts score_common;
    std::string score_probs, score_priors, score_out, score_criterion = "dp";
    double eta_floor = kDefaultEtaFloor;
    add_common(score_cmd, &score_common);
    score_cmd->add_option("--probs", score_probs, "Probability CSV")
        ->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--criterion", score_criterion, "dp, eop, or eo");
    score_cmd->add_option("--priors-from", score_priors,
                          "Labeled CSV for empirical group priors")
        ->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--eta-floor", eta_floor, "Confidence floor");
    score_cmd->add_option("--out", score_out, "Output score CSV")->required();
    score_cmd->callback([&] {
      stage = "score";
      auto criterion =
          make_criterion(parse_criterion_kind(score_criterion), score_common.attr);
      const auto prior_ds =
          load_labeled(score_priors, schema_of(score_common, false));
      criterion = estimate_priors(prior_ds, criterion);
      const auto probs = load_probs(score_probs, criterion);
      const auto scores = bias_scores(probs, criterion, eta_floor);
      save_scores(score_out, scores);
      write_provenance(score_out, "score",
                       {{"probs", score_probs},
                        {"criterion", score_criterion},
                        {"priors_from", score_priors},
                        {"eta_floor", eta_floor},
                        {"out", score_out}});
      std::printf("score: wrote %zu rows to %s\n", scores.n, score_out.c_str());
    });

    // ------------------------------------------------------------------- fit
    auto* fit_cmd = app.add_subcommand(
        "fit", "Fit a modification rule on a validation set");
    CommonOpts fit_common;
    std::string fit_scores, fit_val, fit_out, fit_criterion = "dp";
    std::string fit_method = "threshold";
    std::vector<std::string> fit_deltas;
    SearchParams fit_params;
    bool fit_seed_set = false;
    double fit_eta_floor = kDefaultEtaFloor;
    add_common(fit_cmd, &fit_common);
    fit_cmd->add_option("--scores", fit_scores, "Score CSV")
        ->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--val", fit_val, "Validation CSV")
        ->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--criterion", fit_criterion, "dp, eop, or eo");
    fit_cmd->add_option("--delta", fit_deltas, "Target level (repeatable)")
        ->required();
    fit_cmd->add_option("--method", fit_method, "threshold, pairs, or directions");
    fit_cmd->add_option("--M", fit_params.M, "Pair-search subsample size");
    fit_cmd->add_option("--n-dirs", fit_params.n_dirs, "Direction count");
    fit_cmd->add_option("--seed", fit_params.seed, "RNG seed")
        ->each([&](const std::string&) { fit_seed_set = true; });
    fit_cmd->add_option("--eta-floor", fit_eta_floor, "Recorded eta floor");
    fit_cmd->add_option("--out", fit_out,
                        "Rule file (suffix _<delta> added for multiple deltas)")
        ->required();
    fit_cmd->callback([&] {
      stage = "fit";
      const auto method = parse_fit_method(fit_method);
      const auto criterion =
          make_criterion(parse_criterion_kind(fit_criterion), fit_common.attr);
      const auto scores = load_scores(fit_scores);
      const auto val = load_labeled(fit_val, schema_of(fit_common, false));
      const bool stochastic =
          (method == FitMethod::pairs && fit_params.M < scores.n) ||
          (method == FitMethod::directions && scores.K > 2);
      if (stochastic && !fit_seed_set) {
        throw CLI::ValidationError(
            "--seed", "this fit subsamples candidates: --seed is required");
      }
      std::vector<double> deltas;
      for (const auto& d : fit_deltas) deltas.push_back(parse_delta(d));
      const auto points = frontier(scores, val, nullptr, nullptr, criterion,
                                   deltas, method, fit_params);
      for (const auto& pt : points) {
        std::string path = fit_out;
        if (points.size() > 1) path += "_" + fmt(pt.delta);
        save_rule(path, pt.rule);
        write_provenance(path, "fit",
                         {{"scores", fit_scores},
                          {"val", fit_val},
                          {"criterion", fit_criterion},
                          {"delta", pt.delta},
                          {"method", fit_method},
                          {"M", fit_params.M},
                          {"n_dirs", fit_params.n_dirs},
                          {"seed", fit_params.seed},
                          {"eta_floor", fit_eta_floor},
                          {"out", path}});
        std::printf(
            "fit: delta=%s accuracy=%s cc=%s flips=%lld feasible=%d -> %s\n",
            fmt(pt.delta).c_str(), fmt(pt.val_report.accuracy).c_str(),
            fmt(pt.val_report.cc).c_str(),
            static_cast<long long>(pt.val_report.flip_count),
            pt.rule.provenance.feasible ? 1 : 0, path.c_str());
      }
    });

    // ----------------------------------------------------------------- apply
    auto* apply_cmd = app.add_subcommand(
        "apply", "Apply a fitted rule to scored instances");
    std::string apply_rule_path, apply_scores, apply_out;
    apply_cmd->add_option("--rule", apply_rule_path, "Rule file")
        ->required()->check(CLI::ExistingFile);
    apply_cmd->add_option("--scores", apply_scores, "Score CSV")
        ->required()->check(CLI::ExistingFile);
    apply_cmd->add_option("--out", apply_out, "Output prediction CSV")->required();
    apply_cmd->callback([&] {
      stage = "apply";
      const auto rule = load_rule(apply_rule_path);
      const auto scores = load_scores(apply_scores);
      const auto out = apply_rule(rule, scores);
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < scores.n; ++i) {
        rows.push_back({out.pred[i] ? "1" : "0", out.flip[i] ? "1" : "0"});
      }
      write_csv(apply_out, {"pred", "flip"}, rows);
      write_provenance(apply_out, "apply",
                       {{"rule", apply_rule_path},
                        {"scores", apply_scores},
                        {"out", apply_out}});
      std::printf("apply: wrote %zu rows (%lld flips) to %s\n", scores.n,
                  static_cast<long long>(out.flip_count()), apply_out.c_str());
    });

    // ------------------------------------------------------------------ eval
    auto* eval_cmd = app.add_subcommand(
        "eval", "Evaluate predictions against labels and groups");
    CommonOpts eval_common;
    std::string eval_pred, eval_data, eval_json, eval_criterion = "dp";
    add_common(eval_cmd, &eval_common);
    eval_cmd->add_option("--pred", eval_pred, "Prediction CSV")
        ->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--data", eval_data, "Labeled CSV")
        ->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--criterion", eval_criterion, "dp, eop, or eo");
    eval_cmd->add_option("--json", eval_json, "Machine-readable output path");
    eval_cmd->callback([&] {
      stage = "eval";
      const auto criterion =
          make_criterion(parse_criterion_kind(eval_criterion), eval_common.attr);
      const auto ds = load_labeled(eval_data, schema_of(eval_common, false));
      const CsvTable table = read_csv(eval_pred);
      const std::size_t pred_col = table.column("pred");
      const bool has_flips = table.has_column("flip");
      Predictions preds;
      for (std::size_t i = 0; i < table.n_rows(); ++i) {
        preds.pred.push_back(static_cast<std::uint8_t>(parse_binary(
            table.rows[i][pred_col], eval_pred + " row " + std::to_string(i + 1))));
        if (has_flips) {
          preds.flip.push_back(static_cast<std::uint8_t>(parse_binary(
              table.rows[i][table.column("flip")],
              eval_pred + " row " + std::to_string(i + 1))));
        }
      }
      if (!has_flips) preds.flip.assign(preds.pred.size(), 0);
      const auto report = composite(preds, ds, criterion);
      print_report("", report, criterion);
      if (!eval_json.empty()) {
        json j;
        j["accuracy"] = report.accuracy;
        for (std::size_t k = 0; k < criterion.K(); ++k) {
          j["disparity_" + criterion.components[k].name] = report.disparities[k];
        }
        j["cc"] = report.cc;
        j["flips"] = report.flip_count;
        std::ofstream out(eval_json);
        out << j.dump(2) << "\n";
        write_provenance(eval_json, "eval",
                         {{"pred", eval_pred},
                          {"data", eval_data},
                          {"criterion", eval_criterion},
                          {"json", eval_json}});
      }
    });

    // -------------------------------------------------------------- frontier
    auto* frontier_cmd = app.add_subcommand(
        "frontier", "Sweep deltas and tabulate the accuracy/criterion frontier");
    CommonOpts fr_common;
    std::string fr_scores, fr_val, fr_test_scores, fr_test, fr_out;
    std::string fr_criterion = "dp", fr_method = "threshold";
    std::vector<std::string> fr_deltas;
    SearchParams fr_params;
    bool fr_seed_set = false;
    add_common(frontier_cmd, &fr_common);
    frontier_cmd->add_option("--scores", fr_scores, "Validation score CSV")
        ->required()->check(CLI::ExistingFile);
    frontier_cmd->add_option("--val", fr_val, "Validation CSV")
        ->required()->check(CLI::ExistingFile);
    frontier_cmd->add_option("--test-scores", fr_test_scores, "Test score CSV")
        ->check(CLI::ExistingFile);
    frontier_cmd->add_option("--test", fr_test, "Test CSV")
        ->check(CLI::ExistingFile);
    frontier_cmd->add_option("--criterion", fr_criterion, "dp, eop, or eo");
    frontier_cmd->add_option("--delta", fr_deltas, "Levels (repeatable)")
        ->required();
    frontier_cmd->add_option("--method", fr_method,
                             "threshold, pairs, or directions");
    frontier_cmd->add_option("--M", fr_params.M, "Pair-search subsample size");
    frontier_cmd->add_option("--n-dirs", fr_params.n_dirs, "Direction count");
    frontier_cmd->add_option("--seed", fr_params.seed, "RNG seed")
        ->each([&](const std::string&) { fr_seed_set = true; });
    frontier_cmd->add_option("--out", fr_out, "Output table CSV")->required();
    frontier_cmd->callback([&] {
      stage = "frontier";
      const auto method = parse_fit_method(fr_method);
      const auto criterion =
          make_criterion(parse_criterion_kind(fr_criterion), fr_common.attr);
      const auto scores = load_scores(fr_scores);
      const auto val = load_labeled(fr_val, schema_of(fr_common, false));
      if (fr_test_scores.empty() != fr_test.empty()) {
        throw CLI::ValidationError("--test", "--test-scores and --test go together");
      }
      const bool stochastic =
          (method == FitMethod::pairs && fr_params.M < scores.n) ||
          (method == FitMethod::directions && scores.K > 2);
      if (stochastic && !fr_seed_set) {
        throw CLI::ValidationError(
            "--seed", "this fit subsamples candidates: --seed is required");
      }
      std::vector<double> deltas;
      for (const auto& d : fr_deltas) deltas.push_back(parse_delta(d));

      std::optional<BiasScores> test_scores;
      std::optional<LabeledDataset> test_ds;
      if (!fr_test.empty()) {
        test_scores = load_scores(fr_test_scores);
        test_ds = load_labeled(fr_test, schema_of(fr_common, false));
      }
      const auto points = frontier(
          scores, val, test_scores ? &*test_scores : nullptr,
          test_ds ? &*test_ds : nullptr, criterion, deltas, method, fr_params);

      std::vector<std::vector<std::string>> rows;
      for (const auto& pt : points) {
        rows.push_back({fmt(pt.delta), fmt(pt.val_report.accuracy),
                        fmt(pt.val_report.cc),
                        pt.test_report ? fmt(pt.test_report->accuracy) : "",
                        pt.test_report ? fmt(pt.test_report->cc) : "",
                        std::to_string(pt.val_report.flip_count)});
      }
      write_csv(fr_out, {"delta", "val_acc", "val_cc", "test_acc", "test_cc",
                         "flips"}, rows);
      write_provenance(fr_out, "frontier",
                       {{"scores", fr_scores},
                        {"val", fr_val},
                        {"test_scores", fr_test_scores},
                        {"test", fr_test},
                        {"criterion", fr_criterion},
                        {"deltas", fr_deltas},
                        {"method", fr_method},
                        {"M", fr_params.M},
                        {"n_dirs", fr_params.n_dirs},
                        {"seed", fr_params.seed},
                        {"out", fr_out}});
      std::printf("frontier: wrote %zu points to %s\n", points.size(),
                  fr_out.c_str());
    });

    // ---------------------------------------------------------------- oracle
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "Solve the exact LP on scored validation instances");
    CommonOpts or_common;
    std::string or_scores, or_val, or_out, or_rule_out;
    std::string or_criterion = "dp", or_baseline = "empirical";
    double or_delta = 0.05;
    bool or_empirical_f = false;
    add_common(oracle_cmd, &or_common);
    oracle_cmd->add_option("--scores", or_scores, "Score CSV")
        ->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--val", or_val, "Labeled CSV")
        ->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--criterion", or_criterion, "dp, eop, or eo");
    oracle_cmd->add_option("--delta", or_delta, "Constraint level");
    oracle_cmd->add_option("--baseline", or_baseline,
                           "Baseline disparities: empirical or model");
    oracle_cmd->add_flag("--empirical-f", or_empirical_f,
                         "Use indicator group functions instead of the model's");
    oracle_cmd->add_option("--out", or_out, "Output kappa CSV")->required();
    oracle_cmd->add_option("--rule-out", or_rule_out, "Induced rule file");
    oracle_cmd->callback([&] {
      stage = "oracle";
      const auto criterion =
          make_criterion(parse_criterion_kind(or_criterion), or_common.attr);
      const auto scores = load_scores(or_scores);
      const auto val = load_labeled(or_val, schema_of(or_common, false));
      LpInstance inst;
      if (or_empirical_f) {
        inst = empirical_lp_instance(scores, val, criterion, or_delta);
        if (or_baseline == "model") {
          inst.c_star = model_baseline_disparities(scores);
        }
      } else {
        std::vector<double> c_star;
        if (or_baseline == "model") {
          c_star = model_baseline_disparities(scores);
        } else if (or_baseline == "empirical") {
          const auto with_priors = estimate_priors(val, criterion);
          std::vector<std::uint8_t> yhat(scores.yhat.begin(), scores.yhat.end());
          for (const auto& c : with_priors.components) {
            c_star.push_back(signed_disparity(yhat, val, c));
          }
        } else {
          throw CLI::ValidationError("--baseline", "expected empirical or model");
        }
        inst = lp_instance_from_scores(scores, c_star, or_delta);
      }
      const auto sol = solve_primal(inst);
      if (sol.status == LpStatus::infeasible) {
        throw std::runtime_error("LP infeasible at delta=" + fmt(or_delta));
      }
      std::vector<std::vector<std::string>> rows;
      for (double k : sol.kappa) rows.push_back({fmt(k)});
      write_csv(or_out, {"kappa"}, rows);
      write_provenance(or_out, "oracle",
                       {{"scores", or_scores},
                        {"val", or_val},
                        {"criterion", or_criterion},
                        {"delta", or_delta},
                        {"baseline", or_baseline},
                        {"empirical_f", or_empirical_f},
                        {"out", or_out}});
      std::printf("objective: %s\n", fmt(sol.objective).c_str());
      for (std::size_t k = 0; k < sol.dual.size(); ++k) {
        std::printf("dual_%zu: %s\n", k, fmt(sol.dual[k]).c_str());
      }
      std::size_t fractional = 0;
      for (double k : sol.kappa) {
        if (k > 1e-9 && k < 1.0 - 1e-9) ++fractional;
      }
      std::printf("fractional: %zu\n", fractional);
      if (!or_rule_out.empty()) {
        auto rule = rule_from_dual(sol.dual, or_delta);
        rule.provenance.seed = 0;
        save_rule(or_rule_out, rule);
        std::printf("rule: %s\n", or_rule_out.c_str());
      }
    });

    // --------------------------------------------------------------- corrupt
    auto* corrupt_cmd = app.add_subcommand(
        "corrupt", "Add Unif(-alpha, 2 alpha) noise to a probability table");
    CommonOpts co_common;
    std::string co_probs, co_out, co_criterion = "dp";
    double co_alpha = 0.0;
    std::uint64_t co_seed = 0;
    bool co_seed_set = false;
    add_common(corrupt_cmd, &co_common);
    corrupt_cmd->add_option("--probs", co_probs, "Probability CSV")
        ->required()->check(CLI::ExistingFile);
    corrupt_cmd->add_option("--criterion", co_criterion, "dp, eop, or eo");
    corrupt_cmd->add_option("--alpha", co_alpha, "Corruption intensity")
        ->required();
    corrupt_cmd->add_option("--seed", co_seed, "RNG seed")
        ->each([&](const std::string&) { co_seed_set = true; });
    corrupt_cmd->add_option("--out", co_out, "Output CSV")->required();
    corrupt_cmd->callback([&] {
      stage = "corrupt";
      if (co_alpha > 0.0 && !co_seed_set) {
        throw CLI::ValidationError("--seed",
                                   "corrupt is stochastic: --seed is required");
      }
      const auto criterion =
          make_criterion(parse_criterion_kind(co_criterion), co_common.attr);
      const auto probs = load_probs(co_probs, criterion);
      const auto out = corrupt(probs, co_alpha, co_seed);
      save_probs(co_out, out, criterion);
      write_provenance(co_out, "corrupt",
                       {{"probs", co_probs},
                        {"criterion", co_criterion},
                        {"alpha", co_alpha},
                        {"seed", co_seed},
                        {"out", co_out}});
      std::printf("corrupt: wrote %zu rows to %s\n", out.n, co_out.c_str());
    });

    // ---------------------------------------------------------------- render
    auto* render_cmd = app.add_subcommand(
        "render", "Emit an SVG scatter or frontier figure");
    std::string re_kind = "scatter", re_scores, re_data, re_rule, re_table,
                re_out;
    CommonOpts re_common;
    add_common(render_cmd, &re_common);
    render_cmd->add_option("--kind", re_kind, "scatter or frontier");
    render_cmd->add_option("--scores", re_scores, "Score CSV (scatter)")
        ->check(CLI::ExistingFile);
    render_cmd->add_option("--data", re_data, "Labeled CSV for cell colors")
        ->check(CLI::ExistingFile);
    render_cmd->add_option("--rule", re_rule, "Rule file to draw")
        ->check(CLI::ExistingFile);
    render_cmd->add_option("--table", re_table, "Frontier CSV (frontier)")
        ->check(CLI::ExistingFile);
    render_cmd->add_option("--out", re_out, "Output SVG")->required();
    render_cmd->callback([&] {
      stage = "render";
      if (re_kind == "scatter") {
        if (re_scores.empty()) {
          throw CLI::ValidationError("--scores", "scatter needs --scores");
        }
        const auto scores = load_scores(re_scores);
        std::optional<LabeledDataset> ds;
        if (!re_data.empty()) {
          ds = load_labeled(re_data, schema_of(re_common, false));
        }
        std::optional<ModificationRule> rule;
        if (!re_rule.empty()) rule = load_rule(re_rule);
        render_scatter(scores, ds ? &*ds : nullptr, rule ? &*rule : nullptr,
                       re_out);
      } else if (re_kind == "frontier") {
        if (re_table.empty()) {
          throw CLI::ValidationError("--table", "frontier needs --table");
        }
        const CsvTable table = read_csv(re_table);
        std::vector<FrontierPoint> points;
        for (std::size_t i = 0; i < table.n_rows(); ++i) {
          FrontierPoint pt;
          const auto& row = table.rows[i];
          pt.delta = parse_double(row[table.column("delta")], "delta");
          pt.val_report.accuracy =
              parse_double(row[table.column("val_acc")], "val_acc");
          pt.val_report.cc = parse_double(row[table.column("val_cc")], "val_cc");
          const auto& ta = row[table.column("test_acc")];
          if (!ta.empty()) {
            EvalReport test;
            test.accuracy = parse_double(ta, "test_acc");
            test.cc = parse_double(row[table.column("test_cc")], "test_cc");
            pt.test_report = test;
          }
          points.push_back(std::move(pt));
        }
        render_frontier(points, re_out);
      } else {
        throw CLI::ValidationError("--kind", "expected scatter or frontier");
      }
      write_provenance(re_out, "render",
                       {{"kind", re_kind},
                        {"scores", re_scores},
                        {"data", re_data},
                        {"rule", re_rule},
                        {"table", re_table},
                        {"out", re_out}});
      std::printf("render: wrote %s\n", re_out.c_str());
    });

    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fairpost %s: %s\n", stage.c_str(), e.what());
    return 1;
  }
}
