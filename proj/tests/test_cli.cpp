// End-to-end tests driving the installed binary through std::system.  The
// test runner passes the binary path via FAIRPOST_CLI.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "fairpost/csv.hpp"
#include "test_util.hpp"

using namespace fairpost;
using fairpost::test::TempDir;
using fairpost::test::write_file;

namespace {

std::string cli_path() {
  const char* env = std::getenv("FAIRPOST_CLI");
  REQUIRE_MESSAGE(env != nullptr, "FAIRPOST_CLI must point at the binary");
  return env;
}

int run(const std::string& args, const std::string& log) {
  const std::string cmd = cli_path() + " " + args + " > \"" + log +
                          "\" 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("full pipeline runs end to end with exit 0") {
  TempDir tmp("pipeline");
  const std::string log = tmp.path("log.txt");
  CHECK(run("synth --seed 7 --n 600 --out " + tmp.path("d.csv"), log) == 0);
  CHECK(run("train-aux --data " + tmp.path("d.csv") +
                " --criterion eo --iters 500 --out " + tmp.path("p.csv"),
            log) == 0);
  CHECK(run("score --probs " + tmp.path("p.csv") +
                " --criterion eo --priors-from " + tmp.path("d.csv") +
                " --out " + tmp.path("s.csv"),
            log) == 0);
  CHECK(run("fit --scores " + tmp.path("s.csv") + " --val " + tmp.path("d.csv") +
                " --criterion eo --delta 0.1 --method pairs --M 80 --seed 3" +
                " --out " + tmp.path("rule.txt"),
            log) == 0);
  CHECK(run("apply --rule " + tmp.path("rule.txt") + " --scores " +
                tmp.path("s.csv") + " --out " + tmp.path("preds.csv"),
            log) == 0);
  CHECK(run("eval --pred " + tmp.path("preds.csv") + " --data " +
                tmp.path("d.csv") + " --criterion eo --json " +
                tmp.path("report.json"),
            log) == 0);
  const std::string out = slurp(log);
  CHECK(out.find("accuracy:") != std::string::npos);
  CHECK(std::filesystem::exists(tmp.path("report.json")));
  // Every stage left a provenance record beside its output.
  for (const auto& f : {"d.csv", "p.csv", "s.csv", "rule.txt", "preds.csv",
                        "report.json"}) {
    CHECK(std::filesystem::exists(tmp.path(std::string(f) +
                                           ".provenance.json")));
  }
}

TEST_CASE("delta outside (0,1] is rejected") {
  TempDir tmp("delta");
  const std::string log = tmp.path("log.txt");
  REQUIRE(run("synth --seed 3 --n 60 --out " + tmp.path("d.csv"), log) == 0);
  REQUIRE(run("train-aux --data " + tmp.path("d.csv") +
                  " --criterion dp --iters 200 --out " + tmp.path("p.csv"),
              log) == 0);
  REQUIRE(run("score --probs " + tmp.path("p.csv") +
                  " --criterion dp --priors-from " + tmp.path("d.csv") +
                  " --out " + tmp.path("s.csv"),
              log) == 0);
  CHECK(run("fit --scores " + tmp.path("s.csv") + " --val " + tmp.path("d.csv") +
                " --criterion dp --delta 2 --out " + tmp.path("r.txt"),
            log) != 0);
  CHECK(slurp(log).find("delta") != std::string::npos);
  // 'inf' is the spelled unconstrained level.
  CHECK(run("fit --scores " + tmp.path("s.csv") + " --val " + tmp.path("d.csv") +
                " --criterion dp --delta inf --out " + tmp.path("r.txt"),
            log) == 0);
}

TEST_CASE("missing seed on stochastic steps is an error naming the flag") {
  TempDir tmp("seed");
  const std::string log = tmp.path("log.txt");
  CHECK(run("synth --n 60 --out " + tmp.path("d.csv"), log) != 0);
  CHECK(slurp(log).find("--seed") != std::string::npos);
}

TEST_CASE("unknown flags and missing files fail with nonzero status") {
  TempDir tmp("errs");
  const std::string log = tmp.path("log.txt");
  CHECK(run("synth --seed 1 --frobnicate --out " + tmp.path("d.csv"), log) != 0);
  CHECK(run("score --probs " + tmp.path("absent.csv") +
                " --criterion dp --priors-from " + tmp.path("absent.csv") +
                " --out " + tmp.path("s.csv"),
            log) != 0);
}

TEST_CASE("identical configuration reproduces byte-identical outputs") {
  TempDir tmp("determinism");
  const std::string log = tmp.path("log.txt");
  REQUIRE(run("synth --seed 11 --n 240 --out " + tmp.path("a.csv"), log) == 0);
  REQUIRE(run("synth --seed 11 --n 240 --out " + tmp.path("b.csv"), log) == 0);
  CHECK(slurp(tmp.path("a.csv")) == slurp(tmp.path("b.csv")));
  REQUIRE(run("synth --seed 12 --n 240 --out " + tmp.path("c.csv"), log) == 0);
  CHECK(slurp(tmp.path("a.csv")) != slurp(tmp.path("c.csv")));

  // The whole chain, rerun, byte-identical artifacts.
  for (const char* tag : {"x", "y"}) {
    const std::string t(tag);
    REQUIRE(run("train-aux --data " + tmp.path("a.csv") +
                    " --criterion eo --iters 300 --out " + tmp.path(t + "p.csv"),
                log) == 0);
    REQUIRE(run("score --probs " + tmp.path(t + "p.csv") +
                    " --criterion eo --priors-from " + tmp.path("a.csv") +
                    " --out " + tmp.path(t + "s.csv"),
                log) == 0);
    REQUIRE(run("fit --scores " + tmp.path(t + "s.csv") + " --val " +
                    tmp.path("a.csv") +
                    " --criterion eo --delta 0.1 --method pairs --M 40"
                    " --seed 5 --out " + tmp.path(t + "r.txt"),
                log) == 0);
  }
  CHECK(slurp(tmp.path("xp.csv")) == slurp(tmp.path("yp.csv")));
  CHECK(slurp(tmp.path("xs.csv")) == slurp(tmp.path("ys.csv")));
  CHECK(slurp(tmp.path("xr.txt")) == slurp(tmp.path("yr.txt")));
}

TEST_CASE("oracle subcommand emits kappa, duals, and an induced rule") {
  TempDir tmp("oracle");
  const std::string log = tmp.path("log.txt");
  REQUIRE(run("synth --seed 5 --n 300 --out " + tmp.path("d.csv"), log) == 0);
  REQUIRE(run("train-aux --data " + tmp.path("d.csv") +
                  " --criterion dp --iters 400 --out " + tmp.path("p.csv"),
              log) == 0);
  REQUIRE(run("score --probs " + tmp.path("p.csv") +
                  " --criterion dp --priors-from " + tmp.path("d.csv") +
                  " --out " + tmp.path("s.csv"),
              log) == 0);
  REQUIRE(run("oracle --scores " + tmp.path("s.csv") + " --val " +
                  tmp.path("d.csv") +
                  " --criterion dp --delta 0.02 --empirical-f --out " +
                  tmp.path("kappa.csv") + " --rule-out " + tmp.path("r.txt"),
              log) == 0);
  const std::string out = slurp(log);
  CHECK(out.find("objective:") != std::string::npos);
  CHECK(out.find("dual_0:") != std::string::npos);
  const CsvTable kappa = read_csv(tmp.path("kappa.csv"));
  CHECK(kappa.n_rows() == 300);
  CHECK(std::filesystem::exists(tmp.path("r.txt")));
}

TEST_CASE("render produces valid standalone SVG files") {
  TempDir tmp("render");
  const std::string log = tmp.path("log.txt");
  REQUIRE(run("synth --seed 9 --n 120 --out " + tmp.path("d.csv"), log) == 0);
  REQUIRE(run("train-aux --data " + tmp.path("d.csv") +
                  " --criterion eo --iters 300 --out " + tmp.path("p.csv"),
              log) == 0);
  REQUIRE(run("score --probs " + tmp.path("p.csv") +
                  " --criterion eo --priors-from " + tmp.path("d.csv") +
                  " --out " + tmp.path("s.csv"),
              log) == 0);
  REQUIRE(run("fit --scores " + tmp.path("s.csv") + " --val " + tmp.path("d.csv") +
                  " --criterion eo --delta 0.2 --method directions"
                  " --n-dirs 16 --out " + tmp.path("r.txt"),
              log) == 0);
  REQUIRE(run("render --kind scatter --scores " + tmp.path("s.csv") +
                  " --data " + tmp.path("d.csv") + " --rule " + tmp.path("r.txt") +
                  " --out " + tmp.path("fig.svg"),
              log) == 0);
  const std::string svg = slurp(tmp.path("fig.svg"));
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t circles = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1)) {
    ++circles;
  }
  CHECK(circles == 120);
  // One straight separating line beyond the two axis strokes.
  std::size_t lines = 0;
  for (std::size_t pos = svg.find("<line"); pos != std::string::npos;
       pos = svg.find("<line", pos + 1)) {
    ++lines;
  }
  CHECK(lines == 3);

  REQUIRE(run("frontier --scores " + tmp.path("s.csv") + " --val " +
                  tmp.path("d.csv") +
                  " --criterion eo --delta 0.2 --delta 0.1 --delta 0.05"
                  " --method directions --n-dirs 16 --out " + tmp.path("fr.csv"),
              log) == 0);
  REQUIRE(run("render --kind frontier --table " + tmp.path("fr.csv") +
                  " --out " + tmp.path("fr.svg"),
              log) == 0);
  const std::string fr = slurp(tmp.path("fr.svg"));
  std::size_t markers = 0;
  for (std::size_t pos = fr.find("<circle"); pos != std::string::npos;
       pos = fr.find("<circle", pos + 1)) {
    ++markers;
  }
  CHECK(markers == 3);
}

TEST_CASE("render scatter accepts an empty score file") {
  TempDir tmp("empty");
  const std::string log = tmp.path("log.txt");
  write_file(tmp.path("s.csv"), "yhat,eta,s0,s1,f0,f1\n");
  CHECK(run("render --kind scatter --scores " + tmp.path("s.csv") + " --out " +
                tmp.path("fig.svg"),
            log) == 0);
  const std::string svg = slurp(tmp.path("fig.svg"));
  CHECK(svg.find("</svg>") != std::string::npos);
}
