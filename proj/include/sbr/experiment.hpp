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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sbr/dataset.hpp"
#include "sbr/metrics.hpp"
#include "sbr/optimize.hpp"

namespace sbr {

struct OptimizerSettings {
  std::string optimizer = "swift";  // swift | de3 | de10
  double epsilon = 0.2;
  long n1 = 12;
  long n2 = 30;
  long np = 0;     // 0: per-item default population
  long iters = 3;  // de3; de10 uses 10
  long folds = 10;
};

const std::vector<std::string>& treatment_names();  // the five treatments

struct ExperimentConfig {
  std::string train_path, test_path;
  std::string filter_name = "train";
  std::string treatment = "swift";
  std::string goal = "g";
  std::vector<std::uint64_t> seeds;
  OptimizerSettings opt;
  std::string out_dir;
  std::string project;  // row label; basename of train_path when empty

  void validate() const;  // throws ConfigError
};

struct ResultRow {
  std::string project, filter, treatment;
  std::uint64_t seed = 0;
  EvalResult eval;
  std::array<double, 10> deciles{};
  bool deciles_defined = false;
};

struct MedianRow {
  std::string project, filter, treatment;
  double pd = 0, pf = 0, prec = 0, f = 0, g = 0, ifa = 0;
};

struct RankRow {
  std::string metric, project, filter, treatment;
  double median = 0;
  int rank = 0;
};

struct RuntimeRow {
  std::string project, filter, treatment;
  double minutes = 0;
};

struct Report {
  std::vector<ResultRow> rows;
  std::vector<MedianRow> medians;
  std::vector<RankRow> ranks;
  std::vector<RuntimeRow> runtime;
};

// One treatment across all seeds: filter the training data, tune per the
// treatment, final-fit, evaluate held out; then medians and ranks.
Report run_experiment(const ExperimentConfig& cfg);

// All five treatments on the same data, ranked against each other.
Report run_bench(const ExperimentConfig& cfg);

// Writes results.csv, medians.csv, ranks.csv, map_deciles.csv, runtime.csv;
// byte-identical for the same Report.
void emit_report(const Report& r, const std::string& dir);

// Rebuilds medians and ranks from previously written per-seed rows.
std::vector<ResultRow> load_result_rows(const std::string& results_csv);
Report rank_only_report(const std::vector<ResultRow>& rows);

// The per-treatment tuned pipeline for one seed (exposed for tests).
PipelineSpec tune_treatment(const std::string& treatment, const Dataset& train,
                            const OptimizerSettings& opt,
                            const std::string& goal, std::uint64_t seed);

}  // namespace sbr
