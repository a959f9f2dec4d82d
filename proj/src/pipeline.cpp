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

#include "sbr/pipeline.hpp"

#include <sstream>

#include "sbr/error.hpp"

namespace sbr {

namespace {

ParamRange int_range(std::string name, double dflt, double lo, double hi) {
  ParamRange r;
  r.name = std::move(name);
  r.type = ParamRange::Int;
  r.lo = lo;
  r.hi = hi;
  r.default_value = dflt;
  return r;
}

ParamRange int_range_absent(std::string name, double lo, double hi) {
  ParamRange r = int_range(std::move(name), lo, lo, hi);
  r.has_default = false;  // default means "unset" (no limit)
  return r;
}

ParamRange real_range(std::string name, double dflt, double lo, double hi) {
  ParamRange r;
  r.name = std::move(name);
  r.type = ParamRange::Real;
  r.lo = lo;
  r.hi = hi;
  r.default_value = dflt;
  return r;
}

ParamRange real_range_absent(std::string name, double lo, double hi) {
  ParamRange r = real_range(std::move(name), lo, lo, hi);
  r.has_default = false;
  return r;
}

ParamRange cat_range(std::string name, std::string dflt,
                     std::vector<std::string> choices) {
  ParamRange r;
  r.name = std::move(name);
  r.type = ParamRange::Cat;
  r.choices = std::move(choices);
  r.default_value = std::move(dflt);
  return r;
}

ParamRange bool_range(std::string name, bool dflt) {
  ParamRange r;
  r.name = std::move(name);
  r.type = ParamRange::Bool;
  r.default_value = dflt;
  return r;
}

ParamSpace build_menu() {
  ParamSpace s;
  auto learner = [&](std::string id, std::vector<ParamRange> params) {
    s.items.push_back({std::move(id), ItemKind::Learner, std::move(params)});
  };
  auto pre = [&](std::string id, std::vector<ParamRange> params) {
    s.items.push_back(
        {std::move(id), ItemKind::Preprocessor, std::move(params)});
  };

  learner("RF", {int_range("n_estimators", 10, 10, 150),
                 int_range("min_samples_leaf", 1, 1, 20),
                 int_range("min_samples_split", 2, 2, 20),
                 int_range_absent("max_leaf_nodes", 2, 50),
                 real_range_absent("max_features", 0.01, 1.0),
                 int_range_absent("max_depth", 1, 10)});
  learner("KNN", {int_range("leaf_size", 30, 10, 100),
                  int_range("n_neighbors", 5, 1, 10)});
  learner("NB", {real_range("var_smoothing", 1e-9, 0.0, 1.0)});
  learner("LR", {real_range("C", 1.0, 1.0, 10.0),
                 int_range("max_iter", 100, 50, 200)});
  learner("MLP", {real_range("alpha", 1e-4, 1e-4, 1e-3),
                  real_range("learning_rate_init", 1e-3, 1e-3, 1e-2),
                  real_range("power_t", 0.5, 0.1, 1.0),
                  int_range("max_iter", 200, 50, 300),
                  real_range("momentum", 0.9, 0.1, 1.0),
                  int_range("n_iter_no_change", 10, 1, 100)});

  pre("Normalizer", {cat_range("norm", "l2", {"l1", "l2", "max"}),
                     bool_range("copy", true)});
  pre("StandardScaler", {bool_range("copy", true), bool_range("with_mean", true),
                         bool_range("with_std", true)});
  pre("MinMaxScaler", {bool_range("copy", true),
                       real_range("min", 0.0, -5.0, 0.0),
                       real_range("max", 1.0, 1.0, 5.0)});
  pre("MaxAbsScaler", {bool_range("copy", true)});
  pre("RobustScaler", {bool_range("with_centering", true),
                       bool_range("with_scaling", true),
                       real_range("q_min", 25.0, 10.0, 40.0),
                       real_range("q_max", 75.0, 60.0, 90.0),
                       bool_range("copy", true)});
  pre("QuantileTransformer",
      {int_range("n_quantiles", 1000, 10, 2000),
       cat_range("output_distribution", "uniform", {"uniform", "normal"}),
       bool_range("ignore_implicit_zeros", false),
       int_range("subsample", 100000, 100, 150000),
       bool_range("copy", true)});
  pre("PowerTransformer",
      {cat_range("method", "yeo-johnson", {"yeo-johnson", "box-cox"}),
       bool_range("standardize", true), bool_range("copy", true)});
  pre("Binarizer",
      {real_range("threshold", 0.0, 0.0, 10.0), bool_range("copy", true)});
  pre("PolynomialFeatures", {int_range("degree", 2, 2, 4),
                             bool_range("interaction_only", false),
                             bool_range("include_bias", true),
                             cat_range("order", "C", {"C", "F"})});
  pre("SMOTE", {int_range("k", 5, 1, 20), int_range("m", 50, 50, 400),
                real_range("r", 2.0, 1.0, 6.0)});
  pre("None", {});
  return s;
}

}  // namespace

const ParamSpace& default_param_space() {
  static const ParamSpace space = build_menu();
  return space;
}

const ParamItem& find_item(const std::string& item_id) {
  for (const auto& item : default_param_space().items)
    if (item.id == item_id) return item;
  throw ConfigError("unknown menu item: " + item_id);
}

ParamSpace single_item_space(const std::string& item_id) {
  ParamSpace s;
  s.items.push_back(find_item(item_id));
  return s;
}

Assignment default_assignment(const std::string& item_id) {
  const ParamItem& item = find_item(item_id);
  Assignment a;
  a.item_id = item_id;
  for (const auto& r : item.params)
    if (r.has_default) a.params[r.name] = r.default_value;
  return a;
}

LearnerSpec to_learner_spec(const Assignment& a) {
  return {learner_kind_from(a.item_id), a.params};
}

PreprocessorSpec to_preprocessor_spec(const Assignment& a) {
  return {pre_kind_from(a.item_id), a.params};
}

std::string canonical_key(const PipelineSpec& p) {
  auto one = [](const Assignment& a) {
    std::ostringstream os;
    os << a.item_id << '{';
    bool first = true;
    for (const auto& [k, v] : a.params) {
      if (!first) os << ',';
      first = false;
      os << k << '=' << pv_to_string(v);
    }
    os << '}';
    return os.str();
  };
  return "pre=" + one(p.pre) + ";learner=" + one(p.learner);
}

long default_np_for(const std::string& item_id) {
  if (item_id == "RF" || item_id == "MLP") return 60;
  if (item_id == "LR" || item_id == "SMOTE") return 30;
  if (item_id == "KNN") return 20;
  if (item_id == "NB") return 10;
  long k = long(find_item(item_id).params.size());
  return std::max(10L, 10L * k);
}

}  // namespace sbr
