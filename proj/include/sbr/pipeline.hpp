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
#include <string>
#include <vector>

#include "sbr/core.hpp"
#include "sbr/learners.hpp"
#include "sbr/preprocess.hpp"

namespace sbr {

enum class ItemKind { Learner, Preprocessor };

struct ParamRange {
  enum Type { Int, Real, Cat, Bool };
  std::string name;
  Type type = Real;
  double lo = 0, hi = 0;              // Int/Real bounds (inclusive)
  std::vector<std::string> choices;   // Cat
  PValue default_value = 0.0;
  bool has_default = true;       // false: default is "absent" (None/auto)
};

struct ParamItem {
  std::string id;  // learner or pre-processor name
  ItemKind kind = ItemKind::Learner;
  std::vector<ParamRange> params;
};

struct ParamSpace {
  std::vector<ParamItem> items;
};

// One concrete choice of item + hyperparameters.
struct Assignment {
  std::string item_id;
  ParamMap params;
};

// One pre-processor (possibly "None") plus one learner.
struct PipelineSpec {
  Assignment pre;      // item_id is a PreKind name
  Assignment learner;  // item_id is a LearnerKind name
};

// The full tuning menu: every learner and pre-processor with its default and
// range. Menu order is the tie-break order ("earlier in menu wins"):
// learners RF, KNN, NB, LR, MLP; pre-processors Normalizer, StandardScaler,
// MinMaxScaler, MaxAbsScaler, RobustScaler, QuantileTransformer,
// PowerTransformer, Binarizer, PolynomialFeatures, SMOTE, None (last, so a
// real pre-processor wins weight ties).
const ParamSpace& default_param_space();

// Single-item sub-spaces for per-item tuners; throws ConfigError on unknown
// ids.
ParamSpace single_item_space(const std::string& item_id);

const ParamItem& find_item(const std::string& item_id);

// Assignment with every defaulted parameter filled in (absent-style defaults
// like unlimited depth stay absent).
Assignment default_assignment(const std::string& item_id);

LearnerSpec to_learner_spec(const Assignment& a);
PreprocessorSpec to_preprocessor_spec(const Assignment& a);

// Stable text form used as the evaluation-cache key and in trace dumps.
std::string canonical_key(const PipelineSpec& p);

// Default DE population size per tuned item (larger menus get larger
// populations); uniform fallback 10 * n_params floored at 10 for items
// without a pinned value.
long default_np_for(const std::string& item_id);

}  // namespace sbr
