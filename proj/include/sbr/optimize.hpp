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

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sbr/dataset.hpp"
#include "sbr/metrics.hpp"
#include "sbr/pipeline.hpp"

namespace sbr {

struct DeConfig {
  long np = 10;       // population size (>= 4)
  double f = 0.8;     // differential weight
  double cr = 0.9;    // crossover probability
  long iters = 3;     // generations (3 or 10 in the standard setups)
  std::uint64_t seed = 1;
};

struct SwiftConfig {
  double epsilon = 0.2;  // dominance width
  long n1 = 12;          // item-ranking evaluations
  long n2 = 30;          // numeric-refinement evaluations
  std::uint64_t seed = 1;
};

struct TraceEntry {
  PipelineSpec spec;
  double value = 0;
  bool flagged = false;  // an undefined metric was counted as 0 underneath
};

struct OptimizerTrace {
  std::vector<TraceEntry> entries;  // in evaluation order; length = budget
  PipelineSpec best_spec;
  double best_value = 0;
  bool has_best = false;
  std::map<std::string, double> final_weights;       // SWIFT items
  std::vector<std::vector<double>> final_population; // DE, snapped values
};

// Tuner-facing objective: already oriented for maximization.
using Objective = std::function<double(const PipelineSpec&)>;

// Differential evolution over the one item in `space`; the other half of the
// pipeline is taken from `base` untouched. Individuals are stored snapped
// (ints integral, categoricals valid), mutation runs on the snapped values
// and clips to bounds. Replacement needs objective(trial) >= current;
// the incumbent updates only on strict improvement. Trace length is
// np * (iters + 1) (initial population + each generation).
OptimizerTrace de_optimize(const ParamSpace& space, const PipelineSpec& base,
                           const Objective& objective, const DeConfig& cfg);

// The dual optimizer. Stage 1: all item weights = 0. Stage 2, n1 rounds:
// sample a learner and a pre-processor with mass max(w,0)+1, parameters
// uniform; evaluate; update both chosen items' weights against the set of all
// prior values v_p (first match wins):
//   no priors               -> +1
//   v > v_p + eps for all   -> +1
//   v > v_p + eps for some  ->  0   (better than part of history: shielded)
//   |v - v_p| <= eps for any-> -1   (adds nothing new)
//   otherwise               ->  0   (novel but worse than everything)
// Stage 3, n2 rounds on only the top-weight learner and pre-processor (ties:
// earlier in menu; weights frozen): numeric parameters sample from intervals
// that shrink on strict incumbent improvement - the endpoint farther from the
// improving value b moves to (b+endpoint)/2 (equidistant: hi moves).
// Trace length is exactly n1 + n2.
OptimizerTrace swift_optimize(const ParamSpace& space,
                              const Objective& objective,
                              const SwiftConfig& cfg);

// Convenience wrapper: objective = goal-oriented mean cross-validation value
// of evaluate_pipeline (pf is negated so higher is always better).
OptimizerTrace swift_optimize(const ParamSpace& space, const Dataset& train,
                              const FoldAssignment& folds,
                              const std::string& goal, const SwiftConfig& cfg);

// Re-applies the stage-2 weight-update rule to the first n1 trace entries;
// equality with OptimizerTrace::final_weights is the replay invariant.
std::map<std::string, double> replay_weights(const std::vector<TraceEntry>& t,
                                             double epsilon, long n1);

// Mean goal value over cross-validation folds: per fold, fit the
// pre-processor on the training part only, transform both parts (SMOTE
// instead resamples the training part), train the learner, score the held-out
// fold. Goal is one of g, pd, pf, f, prec; a fold whose metric is undefined
// contributes 0 and flags the evaluation. Pure in (p, train, folds, goal).
double evaluate_pipeline(const PipelineSpec& p, const Dataset& train,
                         const FoldAssignment& folds, const std::string& goal,
                         bool* flagged = nullptr);

// Fit on the full training set, evaluate once on the held-out test set.
// Returns the metric block and the score-ranked test records (IFA is filled
// from the predicted-positive prefix of that ranking).
std::pair<EvalResult, RankedList> final_fit_and_test(const PipelineSpec& p,
                                                     const Dataset& train,
                                                     const Dataset& test,
                                                     std::uint64_t seed);

// goal sign for maximization: -1 for pf, +1 for everything else.
double goal_sign(const std::string& goal);

}  // namespace sbr
