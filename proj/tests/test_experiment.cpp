/*
 * Copyright 2026 sbrtune authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "sbr/error.hpp"
#include "sbr/experiment.hpp"
#include "sbr/metrics.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace sbr;
namespace fs = std::filesystem;

namespace {

std::string data_path(const std::string& name) {
  return std::string(SBR_TEST_DATA_DIR) + "/" + name;
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("sbr_exp_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_csv(const fs::path& dir, const std::string& name,
                      const Dataset& ds) {
  fs::path p = dir / name;
  std::ofstream out(p);
  out << "id";
  for (const auto& n : ds.feature_names) out << ',' << n;
  out << ",label\n";
  for (const auto& r : ds.records) {
    out << r.id;
    for (double v : r.features) out << ',' << format_full(v);
    out << ',' << r.label << "\n";
  }
  return p.string();
}

std::string write_text(const fs::path& dir, const std::string& name,
                       const std::string& text) {
  fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p.string();
}

ResultRow row(const std::string& treatment, std::uint64_t seed, double pd,
              double pf, double prec, double f, double g, long ifa) {
  ResultRow r;
  r.project = "demo";
  r.filter = "train";
  r.treatment = treatment;
  r.seed = seed;
  r.eval.pd = pd;
  r.eval.pf = pf;
  r.eval.prec = prec;
  r.eval.f = f;
  r.eval.g = g;
  r.eval.ifa = ifa;
  return r;
}

// The 2x2 fixture behind the committed golden files: treatment x clearly
// beats treatment y on every metric.
std::vector<ResultRow> golden_rows() {
  std::vector<ResultRow> rows = {
      row("x", 1, 0.8, 0.2, 0.7, 0.6, 0.8, 1),
      row("x", 2, 0.9, 0.3, 0.8, 0.7, 0.9, 3),
      row("y", 1, 0.2, 0.8, 0.1, 0.15, 0.2, 7),
      row("y", 2, 0.3, 0.9, 0.2, 0.25, 0.3, 9),
  };
  rows[0].deciles = {1, 1, 1, 1, 1, 1, 1, 1, 1, 0.5};
  rows[0].deciles_defined = true;
  return rows;
}

ExperimentConfig valid_config() {
  ExperimentConfig cfg;
  cfg.train_path = "a.csv";
  cfg.test_path = "b.csv";
  cfg.seeds = {1};
  return cfg;
}

}  // namespace

TEST_CASE("the five treatments, in menu order") {
  const auto& t = treatment_names();
  REQUIRE(t.size() == 5);
  CHECK(t[0] == "farsec-baseline");
  CHECK(t[1] == "de-learner");
  CHECK(t[2] == "preproc-only");
  CHECK(t[3] == "de-preproc");
  CHECK(t[4] == "swift");
}

TEST_CASE("ExperimentConfig::validate rejects each bad field") {
  CHECK_NOTHROW(valid_config().validate());
  auto broken = [](auto mutate) {
    ExperimentConfig cfg;
    cfg.train_path = "a.csv";
    cfg.test_path = "b.csv";
    cfg.seeds = {1};
    mutate(cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  };
  broken([](ExperimentConfig& c) { c.train_path = ""; });
  broken([](ExperimentConfig& c) { c.test_path = ""; });
  broken([](ExperimentConfig& c) { c.filter_name = "farsek"; });
  broken([](ExperimentConfig& c) { c.treatment = "tuned"; });
  broken([](ExperimentConfig& c) { c.goal = "auc"; });
  broken([](ExperimentConfig& c) { c.seeds.clear(); });
  broken([](ExperimentConfig& c) { c.opt.optimizer = "pso"; });
  broken([](ExperimentConfig& c) { c.opt.folds = 1; });
  broken([](ExperimentConfig& c) { c.opt.epsilon = 0.0; });
  broken([](ExperimentConfig& c) { c.opt.n1 = 0; });
  broken([](ExperimentConfig& c) { c.opt.n2 = 0; });
  broken([](ExperimentConfig& c) { c.opt.np = -1; });
  broken([](ExperimentConfig& c) { c.opt.iters = 0; });
}

TEST_CASE("farsec-baseline on separable data is perfect and seed-free") {
  fs::path dir = scratch_dir("baseline");
  ExperimentConfig cfg;
  cfg.train_path =
      write_csv(dir, "train.csv", sbrtest::synth_reports(60, 4, 0.3, 6.0, 201));
  cfg.test_path =
      write_csv(dir, "test.csv", sbrtest::synth_reports(40, 4, 0.3, 6.0, 202));
  cfg.treatment = "farsec-baseline";
  cfg.seeds = {1, 2};
  cfg.opt.folds = 3;
  cfg.project = "sep";

  Report r = run_experiment(cfg);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.project == "sep");
    CHECK(row.filter == "train");
    CHECK(row.treatment == "farsec-baseline");
    CHECK(row.eval.pd == doctest::Approx(1.0));
    CHECK(row.eval.pf == doctest::Approx(0.0));
    CHECK(row.eval.g == doctest::Approx(1.0));
    CHECK(row.eval.ifa == 0);
    REQUIRE(row.deciles_defined);
    CHECK(map_of_deciles(row.deciles) == doctest::Approx(1.0));
  }
  // the baseline ignores the seed entirely
  CHECK(r.rows[0].eval.prec == r.rows[1].eval.prec);
  REQUIRE(r.medians.size() == 1);
  CHECK(r.medians[0].g == doctest::Approx(1.0));
  REQUIRE(r.ranks.size() == 6);  // one treatment, six metrics
  for (const auto& rr : r.ranks) CHECK(rr.rank == 1);
  REQUIRE(r.runtime.size() == 1);
  CHECK(r.runtime[0].minutes >= 0.0);
}

TEST_CASE("g in every result row is consistent with pd and pf") {
  fs::path dir = scratch_dir("gcheck");
  ExperimentConfig cfg;
  cfg.train_path =
      write_csv(dir, "train.csv", sbrtest::synth_reports(50, 4, 0.3, 1.0, 211));
  cfg.test_path =
      write_csv(dir, "test.csv", sbrtest::synth_reports(40, 4, 0.3, 1.0, 212));
  cfg.treatment = "preproc-only";
  cfg.seeds = {3};
  cfg.opt.folds = 3;
  Report r = run_experiment(cfg);
  for (const auto& row : r.rows)
    CHECK(row.eval.g ==
          doctest::Approx(g_measure(row.eval.pd, row.eval.pf)).epsilon(1e-12));
}

TEST_CASE("propagated errors carry the treatment and seed") {
  fs::path dir = scratch_dir("context");
  ExperimentConfig cfg;
  cfg.train_path =
      write_csv(dir, "train.csv", sbrtest::synth_reports(30, 4, 0.3, 1.0, 221));
  cfg.test_path =  // different feature space: final fit must fail
      write_csv(dir, "test.csv", sbrtest::synth_reports(20, 5, 0.3, 1.0, 222));
  cfg.treatment = "farsec-baseline";
  cfg.seeds = {1};
  cfg.opt.folds = 3;
  try {
    run_experiment(cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("treatment farsec-baseline") != std::string::npos);
    CHECK(msg.find("seed 1") != std::string::npos);
  }
}

TEST_CASE("emit_report matches the hand-computed golden files") {
  Report r = rank_only_report(golden_rows());
  RuntimeRow rx{"demo", "train", "x", 0.25};
  RuntimeRow ry{"demo", "train", "y", 0.5};
  r.runtime = {rx, ry};

  fs::path dir = scratch_dir("golden");
  emit_report(r, dir.string());
  for (const char* name : {"results.csv", "medians.csv", "ranks.csv",
                           "map_deciles.csv", "runtime.csv"}) {
    CAPTURE(name);
    CHECK(sbrtest::slurp((dir / name).string()) ==
          sbrtest::slurp(data_path(std::string("golden/") + name)));
  }
}

TEST_CASE("emit_report is byte-stable across calls") {
  Report r = rank_only_report(golden_rows());
  fs::path d1 = scratch_dir("stable1"), d2 = scratch_dir("stable2");
  emit_report(r, d1.string());
  emit_report(r, d2.string());
  for (const char* name : {"results.csv", "medians.csv", "ranks.csv",
                           "map_deciles.csv", "runtime.csv"})
    CHECK(sbrtest::slurp((d1 / name).string()) ==
          sbrtest::slurp((d2 / name).string()));
}

TEST_CASE("load_result_rows round-trips emitted results") {
  Report r = rank_only_report(golden_rows());
  fs::path dir = scratch_dir("roundtrip");
  emit_report(r, dir.string());
  auto rows = load_result_rows((dir / "results.csv").string());
  REQUIRE(rows.size() == r.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].project == r.rows[i].project);
    CHECK(rows[i].filter == r.rows[i].filter);
    CHECK(rows[i].treatment == r.rows[i].treatment);
    CHECK(rows[i].seed == r.rows[i].seed);
    CHECK(rows[i].eval.pd == r.rows[i].eval.pd);
    CHECK(rows[i].eval.pf == r.rows[i].eval.pf);
    CHECK(rows[i].eval.prec == r.rows[i].eval.prec);
    CHECK(rows[i].eval.f == r.rows[i].eval.f);
    CHECK(rows[i].eval.g == r.rows[i].eval.g);
    CHECK(rows[i].eval.ifa == r.rows[i].eval.ifa);
  }
  // and ranking the reloaded rows reproduces the ranks exactly
  Report again = rank_only_report(rows);
  REQUIRE(again.ranks.size() == r.ranks.size());
  for (std::size_t i = 0; i < again.ranks.size(); ++i) {
    CHECK(again.ranks[i].metric == r.ranks[i].metric);
    CHECK(again.ranks[i].treatment == r.ranks[i].treatment);
    CHECK(again.ranks[i].rank == r.ranks[i].rank);
  }
}

TEST_CASE("load_result_rows rejects malformed files") {
  fs::path dir = scratch_dir("badcsv");
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_result_rows((dir / "nope.csv").string()), IoError);
  }
  SUBCASE("wrong header") {
    auto p = write_text(dir, "h.csv", "project,filter\ndemo,train\n");
    CHECK_THROWS_AS(load_result_rows(p), SchemaError);
  }
  SUBCASE("wrong column count") {
    auto p = write_text(dir, "c.csv",
                        "project,filter,treatment,seed,pd,pf,prec,f,g,ifa\n"
                        "demo,train,x,1,0.5\n");
    CHECK_THROWS_AS(load_result_rows(p), SchemaError);
  }
  SUBCASE("non-numeric metric names the row") {
    auto p = write_text(dir, "n.csv",
                        "project,filter,treatment,seed,pd,pf,prec,f,g,ifa\n"
                        "demo,train,x,1,oops,0,0,0,0,0\n");
    try {
      load_result_rows(p);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
  }
  SUBCASE("no data rows") {
    auto p = write_text(dir, "e.csv",
                        "project,filter,treatment,seed,pd,pf,prec,f,g,ifa\n");
    CHECK_THROWS_AS(load_result_rows(p), ValidationError);
  }
}

TEST_CASE("identical treatments share rank 1 on every metric") {
  std::vector<ResultRow> rows = {
      row("p", 1, 0.5, 0.2, 0.6, 0.5, 0.6, 2),
      row("p", 2, 0.6, 0.3, 0.7, 0.6, 0.7, 4),
      row("q", 1, 0.5, 0.2, 0.6, 0.5, 0.6, 2),
      row("q", 2, 0.6, 0.3, 0.7, 0.6, 0.7, 4),
  };
  Report r = rank_only_report(rows);
  REQUIRE(r.ranks.size() == 12);
  for (const auto& rr : r.ranks) CHECK(rr.rank == 1);
}

TEST_CASE("medians are the per-treatment per-metric middles") {
  std::vector<ResultRow> rows = {
      row("t", 1, 0.1, 0.9, 0.3, 0.2, 0.15, 9),
      row("t", 2, 0.9, 0.1, 0.5, 0.6, 0.85, 1),
      row("t", 3, 0.4, 0.5, 0.4, 0.4, 0.45, 5),
  };
  Report r = rank_only_report(rows);
  REQUIRE(r.medians.size() == 1);
  CHECK(r.medians[0].pd == 0.4);
  CHECK(r.medians[0].pf == 0.5);
  CHECK(r.medians[0].prec == 0.4);
  CHECK(r.medians[0].f == 0.4);
  CHECK(r.medians[0].g == 0.45);
  CHECK(r.medians[0].ifa == 5.0);
}

TEST_CASE("run_bench covers all five treatments with contiguous ranks") {
  fs::path dir = scratch_dir("bench");
  ExperimentConfig cfg;
  cfg.train_path =
      write_csv(dir, "train.csv", sbrtest::synth_reports(60, 4, 0.25, 1.2, 231));
  cfg.test_path =
      write_csv(dir, "test.csv", sbrtest::synth_reports(40, 4, 0.25, 1.2, 232));
  cfg.seeds = {1, 2};
  cfg.opt.np = 4;
  cfg.opt.iters = 1;
  cfg.opt.n1 = 2;
  cfg.opt.n2 = 2;
  cfg.opt.folds = 3;
  cfg.project = "bench";

  Report r = run_bench(cfg);
  CHECK(r.rows.size() == 10);
  CHECK(r.medians.size() == 5);
  CHECK(r.runtime.size() == 5);
  REQUIRE(r.ranks.size() == 30);

  std::set<std::string> seen;
  for (const auto& row : r.rows) seen.insert(row.treatment);
  CHECK(seen.size() == 5);

  for (const char* metric : {"pd", "pf", "prec", "f", "g", "ifa"}) {
    std::set<int> ranks;
    int top = 0;
    for (const auto& rr : r.ranks)
      if (rr.metric == metric) {
        ranks.insert(rr.rank);
        top = std::max(top, rr.rank);
      }
    CHECK(*ranks.begin() == 1);           // someone is first
    CHECK(int(ranks.size()) == top);      // no gaps
  }
}

TEST_CASE("an experiment end to end is bit-reproducible") {
  CHECK(sbrtest::prop_experiment_determinism());
}
