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

#include "sbr/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sbr/error.hpp"
#include "sbr/filters.hpp"
#include "sbr/rng.hpp"
#include "sbr/stats.hpp"

namespace sbr {

const std::vector<std::string>& treatment_names() {
  static const std::vector<std::string> names = {
      "farsec-baseline", "de-learner", "preproc-only", "de-preproc", "swift"};
  return names;
}

void ExperimentConfig::validate() const {
  if (train_path.empty() || test_path.empty())
    throw ConfigError("train and test paths are required");
  const auto& filters = filter_names();
  if (std::find(filters.begin(), filters.end(), filter_name) == filters.end())
    throw ConfigError("unknown filter: " + filter_name);
  const auto& treatments = treatment_names();
  if (std::find(treatments.begin(), treatments.end(), treatment) ==
      treatments.end())
    throw ConfigError("unknown treatment: " + treatment);
  static const std::vector<std::string> goals = {"g", "pd", "pf", "f", "prec"};
  if (std::find(goals.begin(), goals.end(), goal) == goals.end())
    throw ConfigError("unknown goal: " + goal);
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (opt.optimizer != "swift" && opt.optimizer != "de3" &&
      opt.optimizer != "de10")
    throw ConfigError("unknown optimizer: " + opt.optimizer);
  if (opt.folds < 2) throw ConfigError("folds must be >= 2");
  if (!(opt.epsilon > 0)) throw ConfigError("epsilon must be > 0");
  if (opt.n1 < 1 || opt.n2 < 1) throw ConfigError("n1 and n2 must be >= 1");
  if (opt.np < 0) throw ConfigError("np must be >= 0");
  if (opt.iters < 1) throw ConfigError("iters must be >= 1");
}

namespace {

// Pipelines that cannot run on the filtered data (too few minority reports
// for SMOTE, non-positive features under box-cox, one-class folds) score the
// floor value instead of aborting the search.
Objective harness_objective(const Dataset& train, const FoldAssignment& folds,
                            const std::string& goal) {
  double sign = goal_sign(goal);
  return [&train, &folds, goal, sign](const PipelineSpec& p) {
    try {
      return sign * evaluate_pipeline(p, train, folds, goal);
    } catch (const ValidationError&) {
      return -1.0;
    } catch (const OversamplingError&) {
      return -1.0;
    } catch (const TrainingError&) {
      return -1.0;
    }
  };
}

PipelineSpec default_pipeline(const std::string& pre_id,
                              const std::string& learner_id) {
  PipelineSpec p;
  p.pre = default_assignment(pre_id);
  p.learner = default_assignment(learner_id);
  return p;
}

long np_for(const OptimizerSettings& opt, const std::string& item_id) {
  return opt.np > 0 ? opt.np : default_np_for(item_id);
}

}  // namespace

PipelineSpec tune_treatment(const std::string& treatment, const Dataset& train,
                            const OptimizerSettings& opt,
                            const std::string& goal, std::uint64_t seed) {
  const ParamSpace& space = default_param_space();
  FoldAssignment folds = split_folds(train, int(opt.folds), seed);
  Objective obj = harness_objective(train, folds, goal);

  if (treatment == "farsec-baseline") return default_pipeline("None", "NB");

  if (treatment == "swift") {
    SwiftConfig cfg;
    cfg.epsilon = opt.epsilon;
    cfg.n1 = opt.n1;
    cfg.n2 = opt.n2;
    cfg.seed = seed;
    OptimizerTrace t = swift_optimize(space, obj, cfg);
    return t.best_spec;
  }

  long iters = opt.optimizer == "de10" ? 10 : opt.iters;

  if (treatment == "de-learner" || treatment == "de-preproc") {
    bool learner_side = treatment == "de-learner";
    PipelineSpec best;
    double best_v = 0;
    bool has_best = false;
    std::size_t idx = 0;
    for (const auto& item : space.items) {
      bool is_learner = item.kind == ItemKind::Learner;
      if (is_learner != learner_side) continue;
      if (!learner_side && item.id == "None") continue;  // nothing to tune
      PipelineSpec base = learner_side ? default_pipeline("None", item.id)
                                       : default_pipeline(item.id, "NB");
      DeConfig cfg;
      cfg.np = np_for(opt, item.id);
      cfg.iters = iters;
      cfg.seed = derive_seed(seed, 0x1DE, idx);
      OptimizerTrace t = de_optimize(single_item_space(item.id), base, obj, cfg);
      if (t.has_best && (!has_best || t.best_value > best_v)) {
        best = t.best_spec;
        best_v = t.best_value;
        has_best = true;
      }
      ++idx;
    }
    if (!has_best) throw ConfigError("no tunable items for " + treatment);
    return best;
  }

  if (treatment == "preproc-only") {
    PipelineSpec best;
    double best_v = 0;
    bool has_best = false;
    for (const auto& item : space.items) {
      if (item.kind == ItemKind::Learner || item.id == "None") continue;
      PipelineSpec p = default_pipeline(item.id, "NB");
      double v = obj(p);
      if (!has_best || v > best_v) {
        best = p;
        best_v = v;
        has_best = true;
      }
    }
    if (!has_best) throw ConfigError("no pre-processors in menu");
    return best;
  }

  throw ConfigError("unknown treatment: " + treatment);
}

namespace {

ResultRow score_seed(const std::string& project, const std::string& filter,
                     const std::string& treatment, const Dataset& filtered,
                     const Dataset& test, const OptimizerSettings& opt,
                     const std::string& goal, std::uint64_t seed) {
  PipelineSpec best = tune_treatment(treatment, filtered, opt, goal, seed);
  auto [eval, ranked] = final_fit_and_test(best, filtered, test, seed);
  ResultRow row;
  row.project = project;
  row.filter = filter;
  row.treatment = treatment;
  row.seed = seed;
  row.eval = eval;
  try {
    row.deciles = map_deciles(ranked);
    row.deciles_defined = true;
  } catch (const ValidationError&) {
    row.deciles = {};
    row.deciles_defined = false;
  }
  return row;
}

double median_metric(const std::vector<ResultRow>& rows,
                     double (*pick)(const ResultRow&)) {
  std::vector<double> vals;
  vals.reserve(rows.size());
  for (const auto& r : rows) vals.push_back(pick(r));
  return median_of(vals);
}

MedianRow medians_of(const std::vector<ResultRow>& rows) {
  MedianRow m;
  m.project = rows.front().project;
  m.filter = rows.front().filter;
  m.treatment = rows.front().treatment;
  m.pd = median_metric(rows, [](const ResultRow& r) { return r.eval.pd; });
  m.pf = median_metric(rows, [](const ResultRow& r) { return r.eval.pf; });
  m.prec = median_metric(rows, [](const ResultRow& r) { return r.eval.prec; });
  m.f = median_metric(rows, [](const ResultRow& r) { return r.eval.f; });
  m.g = median_metric(rows, [](const ResultRow& r) { return r.eval.g; });
  m.ifa =
      median_metric(rows, [](const ResultRow& r) { return double(r.eval.ifa); });
  return m;
}

struct MetricDef {
  const char* name;
  double (*pick)(const ResultRow&);
  bool lower_is_better;
};

const std::array<MetricDef, 6>& metric_defs() {
  static const std::array<MetricDef, 6> defs = {{
      {"pd", [](const ResultRow& r) { return r.eval.pd; }, false},
      {"pf", [](const ResultRow& r) { return r.eval.pf; }, true},
      {"prec", [](const ResultRow& r) { return r.eval.prec; }, false},
      {"f", [](const ResultRow& r) { return r.eval.f; }, false},
      {"g", [](const ResultRow& r) { return r.eval.g; }, false},
      {"ifa", [](const ResultRow& r) { return double(r.eval.ifa); }, true},
  }};
  return defs;
}

template <typename T>
std::vector<T> unique_in_order(const std::vector<ResultRow>& rows,
                               T (*pick)(const ResultRow&)) {
  std::vector<T> out;
  for (const auto& r : rows) {
    T v = pick(r);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

std::vector<RankRow> make_ranks(const std::vector<ResultRow>& rows) {
  std::vector<RankRow> out;
  using Key = std::pair<std::string, std::string>;
  std::vector<Key> scopes;
  for (const auto& r : rows) {
    Key k{r.project, r.filter};
    if (std::find(scopes.begin(), scopes.end(), k) == scopes.end())
      scopes.push_back(k);
  }
  auto treatment_of = +[](const ResultRow& r) { return r.treatment; };
  for (const auto& def : metric_defs()) {
    for (const auto& scope : scopes) {
      std::vector<ResultRow> in_scope;
      for (const auto& r : rows)
        if (r.project == scope.first && r.filter == scope.second)
          in_scope.push_back(r);
      std::vector<std::string> treatments =
          unique_in_order<std::string>(in_scope, treatment_of);
      std::vector<TreatmentSamples> groups;
      std::vector<double> medians;
      for (const auto& t : treatments) {
        TreatmentSamples g;
        g.name = t;
        std::vector<double> raw;
        for (const auto& r : in_scope)
          if (r.treatment == t) raw.push_back(def.pick(r));
        medians.push_back(median_of(raw));
        for (double v : raw)
          g.values.push_back(def.lower_is_better ? -v : v);
        groups.push_back(std::move(g));
      }
      RankAssignment ranks = scott_knott(groups);
      for (std::size_t i = 0; i < treatments.size(); ++i) {
        RankRow rr;
        rr.metric = def.name;
        rr.project = scope.first;
        rr.filter = scope.second;
        rr.treatment = treatments[i];
        rr.median = medians[i];
        rr.rank = ranks.rank_of.at(treatments[i]);
        out.push_back(rr);
      }
    }
  }
  return out;
}

Report run_treatments(const ExperimentConfig& cfg,
                      const std::vector<std::string>& treatments) {
  cfg.validate();
  Dataset train = load_dataset(cfg.train_path);
  Dataset test = load_dataset(cfg.test_path);
  std::string project =
      cfg.project.empty()
          ? std::filesystem::path(cfg.train_path).stem().string()
          : cfg.project;

  Dataset filtered = apply_named_filter(train, cfg.filter_name);
  std::cerr << "filter " << cfg.filter_name << ": " << train.size() << " -> "
            << filtered.size() << " training reports\n";

  Report report;
  for (const auto& treatment : treatments) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<ResultRow> rows;
    for (std::uint64_t seed : cfg.seeds) {
      try {
        rows.push_back(score_seed(project, cfg.filter_name, treatment,
                                  filtered, test, cfg.opt, cfg.goal, seed));
      } catch (const ConfigError& e) {
        throw ConfigError("treatment " + treatment + " seed " +
                          std::to_string(seed) + ": " + e.what());
      } catch (const Error& e) {
        throw Error("treatment " + treatment + " seed " +
                    std::to_string(seed) + ": " + e.what());
      }
      std::cerr << treatment << " seed " << seed << ": g="
                << format_value(rows.back().eval.g) << "\n";
    }
    auto t1 = std::chrono::steady_clock::now();
    report.medians.push_back(medians_of(rows));
    RuntimeRow rt;
    rt.project = project;
    rt.filter = cfg.filter_name;
    rt.treatment = treatment;
    rt.minutes = std::chrono::duration<double>(t1 - t0).count() / 60.0;
    report.runtime.push_back(rt);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  report.ranks = make_ranks(report.rows);
  return report;
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
  return run_treatments(cfg, {cfg.treatment});
}

Report run_bench(const ExperimentConfig& cfg) {
  return run_treatments(cfg, treatment_names());
}

namespace {

constexpr const char* kResultsHeader =
    "project,filter,treatment,seed,pd,pf,prec,f,g,ifa";

void write_results(const Report& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << kResultsHeader << "\n";
  for (const auto& row : r.rows) {
    out << row.project << ',' << row.filter << ',' << row.treatment << ','
        << row.seed << ',' << format_value(row.eval.pd) << ','
        << format_value(row.eval.pf) << ',' << format_value(row.eval.prec)
        << ',' << format_value(row.eval.f) << ',' << format_value(row.eval.g)
        << ',' << row.eval.ifa << "\n";
  }
}

void write_medians(const Report& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "project,filter,treatment,pd,pf,prec,f,g,ifa\n";
  for (const auto& m : r.medians) {
    out << m.project << ',' << m.filter << ',' << m.treatment << ','
        << format_value(m.pd) << ',' << format_value(m.pf) << ','
        << format_value(m.prec) << ',' << format_value(m.f) << ','
        << format_value(m.g) << ',' << format_value(m.ifa) << "\n";
  }
}

void write_ranks(const Report& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "metric,project,filter,treatment,median,rank\n";
  for (const auto& row : r.ranks) {
    out << row.metric << ',' << row.project << ',' << row.filter << ','
        << row.treatment << ',' << format_value(row.median) << ',' << row.rank
        << "\n";
  }
}

void write_deciles(const Report& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "project,filter,treatment,seed";
  for (int d = 1; d <= 10; ++d) out << ",d" << d * 10;
  out << ",map\n";
  for (const auto& row : r.rows) {
    if (!row.deciles_defined) continue;
    out << row.project << ',' << row.filter << ',' << row.treatment << ','
        << row.seed;
    for (double d : row.deciles) out << ',' << format_value(d);
    out << ',' << format_value(map_of_deciles(row.deciles)) << "\n";
  }
}

void write_runtime(const Report& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "project,filter,treatment,minutes\n";
  for (const auto& row : r.runtime) {
    out << row.project << ',' << row.filter << ',' << row.treatment << ','
        << format_value(row.minutes) << "\n";
  }
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_metric(const std::string& cell, const std::string& path,
                    std::size_t line_no) {
  char* end = nullptr;
  double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw ParseError(path + " row " + std::to_string(line_no) +
                     ": non-numeric value '" + cell + "'");
  return v;
}

}  // namespace

void emit_report(const Report& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::filesystem::path base(dir);
  write_results(r, (base / "results.csv").string());
  write_medians(r, (base / "medians.csv").string());
  write_ranks(r, (base / "ranks.csv").string());
  write_deciles(r, (base / "map_deciles.csv").string());
  write_runtime(r, (base / "runtime.csv").string());
}

std::vector<ResultRow> load_result_rows(const std::string& results_csv) {
  std::ifstream in(results_csv, std::ios::binary);
  if (!in) throw IoError("cannot read " + results_csv);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(results_csv + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader)
    throw SchemaError(results_csv + ": unexpected header '" + line + "'");

  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split_commas(line);
    if (cells.size() != 10)
      throw SchemaError(results_csv + " row " + std::to_string(line_no) +
                        ": expected 10 columns, got " +
                        std::to_string(cells.size()));
    ResultRow row;
    row.project = cells[0];
    row.filter = cells[1];
    row.treatment = cells[2];
    row.seed =
        std::uint64_t(parse_metric(cells[3], results_csv, line_no));
    row.eval.pd = parse_metric(cells[4], results_csv, line_no);
    row.eval.pf = parse_metric(cells[5], results_csv, line_no);
    row.eval.prec = parse_metric(cells[6], results_csv, line_no);
    row.eval.f = parse_metric(cells[7], results_csv, line_no);
    row.eval.g = parse_metric(cells[8], results_csv, line_no);
    row.eval.ifa = long(parse_metric(cells[9], results_csv, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(results_csv + ": no result rows");
  return rows;
}

Report rank_only_report(const std::vector<ResultRow>& rows) {
  Report report;
  report.rows = rows;
  using Key = std::array<std::string, 3>;
  std::vector<Key> keys;
  for (const auto& r : rows) {
    Key k{r.project, r.filter, r.treatment};
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      keys.push_back(k);
  }
  for (const auto& k : keys) {
    std::vector<ResultRow> group;
    for (const auto& r : rows)
      if (r.project == k[0] && r.filter == k[1] && r.treatment == k[2])
        group.push_back(r);
    report.medians.push_back(medians_of(group));
  }
  report.ranks = make_ranks(rows);
  return report;
}

}  // namespace sbr
