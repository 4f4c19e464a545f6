#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairpost/csv.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/prob_table.hpp"
#include "test_util.hpp"

using namespace fairpost;
using fairpost::test::TempDir;
using fairpost::test::write_file;

TEST_CASE("load_labeled parses a small file") {
  TempDir tmp("core");
  write_file(tmp.path("d.csv"), "Y,A\n1,0\n0,1\n1,1\n");
  const auto ds = load_labeled(tmp.path("d.csv"), {"Y", {"A"}, {}, false});
  CHECK(ds.n == 3);
  CHECK(ds.labels == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(ds.attribute("A") == std::vector<std::uint8_t>{0, 1, 1});
}

TEST_CASE("load_labeled rejects non-binary attribute, naming the row") {
  TempDir tmp("core");
  write_file(tmp.path("d.csv"), "Y,A\n1,0\n0,2\n");
  try {
    load_labeled(tmp.path("d.csv"), {"Y", {"A"}, {}, false});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    CHECK(std::string(e.what()).find("A") != std::string::npos);
  }
}

TEST_CASE("load_labeled rejects missing columns and ragged rows") {
  TempDir tmp("core");
  write_file(tmp.path("missing.csv"), "Y\n1\n");
  CHECK_THROWS_AS(load_labeled(tmp.path("missing.csv"), {"Y", {"A"}, {}, false}),
                  ParseError);
  write_file(tmp.path("ragged.csv"), "Y,A\n1,0\n1\n");
  CHECK_THROWS_AS(load_labeled(tmp.path("ragged.csv"), {"Y", {"A"}, {}, false}),
                  ParseError);
}

TEST_CASE("load_labeled reads feature columns") {
  TempDir tmp("core");
  write_file(tmp.path("d.csv"), "x0,x1,Y,A\n0.5,-1.25,1,0\n2,3,0,1\n");
  const auto ds =
      load_labeled(tmp.path("d.csv"), {"Y", {"A"}, {}, true});
  CHECK(ds.feature_dim == 2);
  CHECK(ds.feature(0, 0) == 0.5);
  CHECK(ds.feature(0, 1) == -1.25);
  CHECK(ds.feature(1, 1) == 3.0);
}

TEST_CASE("labeled round-trip is bit-exact") {
  TempDir tmp("core");
  Rng rng(41);
  LabeledDataset ds = fairpost::test::random_dataset(64, rng);
  ds.feature_names = {"x0", "x1"};
  ds.feature_dim = 2;
  for (std::size_t i = 0; i < 2 * ds.n; ++i) {
    ds.features.push_back(rng.uniform(-50.0, 50.0) * rng.uniform01());
  }
  save_labeled(tmp.path("d.csv"), ds);
  const auto back = load_labeled(tmp.path("d.csv"), {"Y", {"A"}, {}, true});
  CHECK(back.labels == ds.labels);
  CHECK(back.attribute_values == ds.attribute_values);
  REQUIRE(back.features.size() == ds.features.size());
  for (std::size_t i = 0; i < ds.features.size(); ++i) {
    CHECK(back.features[i] == ds.features[i]);
  }
}

TEST_CASE("estimate_priors: 50/50 split gives (0.5, 0.5)") {
  LabeledDataset ds;
  ds.n = 4;
  ds.labels = {0, 1, 0, 1};
  ds.attribute_names = {"A"};
  ds.attribute_values = {{0, 0, 1, 1}};
  const auto spec =
      estimate_priors(ds, CriterionSpec::demographic_parity("A"));
  CHECK(spec.components[0].prior_a == 0.5);
  CHECK(spec.components[0].prior_b == 0.5);
}

TEST_CASE("estimate_priors: EO joint priors from the four cell counts") {
  LabeledDataset ds;
  ds.attribute_names = {"A"};
  ds.attribute_values.emplace_back();
  auto add = [&](int y, int a, int count) {
    for (int i = 0; i < count; ++i) {
      ds.labels.push_back(static_cast<std::uint8_t>(y));
      ds.attribute_values[0].push_back(static_cast<std::uint8_t>(a));
    }
  };
  add(1, 0, 500);
  add(1, 1, 100);
  add(0, 0, 100);
  add(0, 1, 500);
  ds.n = ds.labels.size();
  const auto spec = estimate_priors(ds, CriterionSpec::equalized_odds("A"));
  // Component "1" pairs (Y=1,A=0) against (Y=1,A=1).
  CHECK(spec.components[1].prior_a == doctest::Approx(500.0 / 1200.0).epsilon(1e-15));
  CHECK(spec.components[1].prior_b == doctest::Approx(100.0 / 1200.0).epsilon(1e-15));
  CHECK(spec.components[0].prior_a == doctest::Approx(100.0 / 1200.0).epsilon(1e-15));
  for (const auto& c : spec.components) {
    CHECK(c.prior_a + c.prior_b <= 1.0 + 1e-15);
  }
}

TEST_CASE("estimate_priors: degenerate single-group data is an error") {
  LabeledDataset ds;
  ds.n = 3;
  ds.labels = {0, 1, 1};
  ds.attribute_names = {"A"};
  ds.attribute_values = {{0, 0, 0}};
  CHECK_THROWS(estimate_priors(ds, CriterionSpec::demographic_parity("A")));
}

TEST_CASE("estimate_priors: DP priors sum to one on binary attributes") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto ds = fairpost::test::random_dataset(50, rng);
    const auto spec =
        estimate_priors(ds, CriterionSpec::demographic_parity("A"));
    CHECK(spec.components[0].prior_a + spec.components[0].prior_b ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("load_probs reads a DP table") {
  TempDir tmp("probs");
  write_file(tmp.path("p.csv"), "p_y,p_a0,p_b0\n0.9,0.6,0.4\n0.2,0.5,0.5\n");
  const auto probs =
      load_probs(tmp.path("p.csv"), CriterionSpec::demographic_parity("A"));
  CHECK(probs.n == 2);
  CHECK(probs.K() == 1);
  CHECK(probs.p_y[0] == 0.9);
  CHECK(probs.p_a[0][1] == 0.5);
}

TEST_CASE("load_probs rejects out-of-range probabilities") {
  TempDir tmp("probs");
  write_file(tmp.path("p.csv"), "p_y,p_a0,p_b0\n1.2,0.5,0.5\n");
  CHECK_THROWS_AS(
      load_probs(tmp.path("p.csv"), CriterionSpec::demographic_parity("A")),
      ParseError);
}

TEST_CASE("load_probs rejects missing component columns") {
  TempDir tmp("probs");
  write_file(tmp.path("p.csv"), "p_y,p_a0,p_b0\n0.5,0.5,0.5\n");
  CHECK_THROWS_AS(
      load_probs(tmp.path("p.csv"), CriterionSpec::equalized_odds("A")),
      ParseError);
}

TEST_CASE("four joint cells map onto the two EO components") {
  // Cells p(Y=y, A=a | x) for two instances, hand-mapped: component 0 pairs
  // the Y=0 cells, component 1 the Y=1 cells.
  const double cells[2][4] = {
      // (0,0), (0,1), (1,0), (1,1)
      {0.1, 0.2, 0.3, 0.4},
      {0.25, 0.25, 0.25, 0.25},
  };
  TempDir tmp("probs");
  std::string text = "p_y,p_a0,p_b0,p_a1,p_b1\n";
  for (const auto& c : cells) {
    const double p_y = c[2] + c[3];
    text += format_double(p_y) + "," + format_double(c[0]) + "," +
            format_double(c[1]) + "," + format_double(c[2]) + "," +
            format_double(c[3]) + "\n";
  }
  write_file(tmp.path("p.csv"), text);
  const auto probs =
      load_probs(tmp.path("p.csv"), CriterionSpec::equalized_odds("A"));
  CHECK(probs.K() == 2);
  CHECK(probs.p_a[0][0] == 0.1);
  CHECK(probs.p_b[0][0] == 0.2);
  CHECK(probs.p_a[1][0] == 0.3);
  CHECK(probs.p_b[1][0] == 0.4);
  CHECK(probs.p_y[0] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("probs round-trip is bit-exact") {
  TempDir tmp("probs");
  Rng rng(11);
  const auto criterion = CriterionSpec::equalized_odds("A");
  const ProbTable probs = fairpost::test::random_probs(40, 2, rng);
  save_probs(tmp.path("p.csv"), probs, criterion);
  const auto back = load_probs(tmp.path("p.csv"), criterion);
  CHECK(back.p_y == probs.p_y);
  CHECK(back.p_a == probs.p_a);
  CHECK(back.p_b == probs.p_b);
}
