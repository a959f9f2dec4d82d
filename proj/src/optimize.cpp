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

#include "sbr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include "sbr/error.hpp"
#include "sbr/rng.hpp"

namespace sbr {

namespace {

double snap_dim(const ParamRange& r, double v) {
  switch (r.type) {
    case ParamRange::Real:
      return std::clamp(v, r.lo, r.hi);
    case ParamRange::Int:
      return double(std::llround(std::clamp(v, r.lo, r.hi)));
    case ParamRange::Bool:
      return std::clamp(v, 0.0, 1.0) >= 0.5 ? 1.0 : 0.0;
    case ParamRange::Cat: {
      double hi = double(r.choices.size() - 1);
      return double(std::llround(std::clamp(v, 0.0, hi)));
    }
  }
  return v;
}

double init_dim(const ParamRange& r, Rng& rng) {
  switch (r.type) {
    case ParamRange::Real:
      return rng.uniform(r.lo, r.hi);
    case ParamRange::Int:
      return double(rng.uniform_int((long long)r.lo, (long long)r.hi));
    case ParamRange::Bool:
      return double(rng.index(2));
    case ParamRange::Cat:
      return double(rng.index(r.choices.size()));
  }
  return 0;
}

PValue dim_to_value(const ParamRange& r, double snapped) {
  switch (r.type) {
    case ParamRange::Real:
    case ParamRange::Int:
      return snapped;
    case ParamRange::Bool:
      return snapped >= 0.5;
    case ParamRange::Cat:
      return r.choices[std::size_t(snapped)];
  }
  return snapped;
}

// Uniform parameter draw from the full menu range.
PValue sample_param(const ParamRange& r, Rng& rng) {
  return dim_to_value(r, init_dim(r, rng));
}

Assignment sample_assignment(const ParamItem& item, Rng& rng) {
  Assignment a;
  a.item_id = item.id;
  for (const auto& r : item.params) a.params[r.name] = sample_param(r, rng);
  return a;
}

// Shared trace bookkeeping: every objective call is logged (cache hits too,
// so budgets stay comparable) and the incumbent needs strict improvement.
struct Driver {
  const Objective& objective;
  OptimizerTrace trace;
  std::map<std::string, double> cache;

  explicit Driver(const Objective& obj) : objective(obj) {}

  double eval(const PipelineSpec& spec) {
    std::string key = canonical_key(spec);
    auto it = cache.find(key);
    double v;
    if (it != cache.end()) {
      v = it->second;
    } else {
      v = objective(spec);
      cache.emplace(std::move(key), v);
    }
    trace.entries.push_back({spec, v, false});
    if (!trace.has_best || v > trace.best_value) {
      trace.best_value = v;
      trace.best_spec = spec;
      trace.has_best = true;
    }
    return v;
  }
};

int weight_delta(double v, const std::vector<double>& priors, double eps) {
  if (priors.empty()) return 1;
  bool beats_all = true, beats_some = false, within_any = false;
  for (double p : priors) {
    if (v > p + eps)
      beats_some = true;
    else
      beats_all = false;
    if (std::fabs(v - p) <= eps) within_any = true;
  }
  if (beats_all) return 1;
  if (beats_some) return 0;  // partial win shields against the tabu rule
  if (within_any) return -1;
  return 0;
}

const ParamItem* sample_item(const std::vector<const ParamItem*>& group,
                             const std::map<std::string, double>& weights,
                             Rng& rng) {
  double total = 0;
  for (const ParamItem* it : group)
    total += std::max(weights.at(it->id), 0.0) + 1.0;
  double r = rng.uniform() * total;
  double acc = 0;
  for (const ParamItem* it : group) {
    acc += std::max(weights.at(it->id), 0.0) + 1.0;
    if (r < acc) return it;
  }
  return group.back();
}

const ParamItem* top_item(const std::vector<const ParamItem*>& group,
                          const std::map<std::string, double>& weights) {
  const ParamItem* best = group.front();
  for (const ParamItem* it : group)
    if (weights.at(it->id) > weights.at(best->id)) best = it;  // ties: earlier
  return best;
}

}  // namespace

OptimizerTrace de_optimize(const ParamSpace& space, const PipelineSpec& base,
                           const Objective& objective, const DeConfig& cfg) {
  if (space.items.size() != 1)
    throw ConfigError("de_optimize tunes exactly one item");
  if (cfg.np < 4) throw ConfigError("de needs np >= 4");
  if (cfg.iters < 0) throw ConfigError("de iters must be >= 0");
  if (!(cfg.f > 0 && cfg.f <= 2)) throw ConfigError("de f must be in (0,2]");
  if (!(cfg.cr >= 0 && cfg.cr <= 1))
    throw ConfigError("de cr must be in [0,1]");

  const ParamItem& item = space.items[0];
  const auto& dims = item.params;
  const std::size_t d = dims.size();
  const std::size_t np = std::size_t(cfg.np);

  auto spec_of = [&](const std::vector<double>& ind) {
    Assignment a;
    a.item_id = item.id;
    for (std::size_t j = 0; j < d; ++j)
      a.params[dims[j].name] = dim_to_value(dims[j], ind[j]);
    PipelineSpec p = base;
    (item.kind == ItemKind::Learner ? p.learner : p.pre) = std::move(a);
    return p;
  };

  Rng rng(derive_seed(cfg.seed, 0xDE0));
  Driver drv(objective);

  std::vector<std::vector<double>> pop(np, std::vector<double>(d));
  std::vector<double> val(np);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < d; ++j) pop[i][j] = init_dim(dims[j], rng);
    val[i] = drv.eval(spec_of(pop[i]));
  }

  std::vector<double> trial(d);
  for (long gen = 0; gen < cfg.iters; ++gen) {
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t a, b, c;
      do a = rng.index(np); while (a == i);
      do b = rng.index(np); while (b == i || b == a);
      do c = rng.index(np); while (c == i || c == a || c == b);
      std::size_t jrand = d == 0 ? 0 : rng.index(d);
      for (std::size_t j = 0; j < d; ++j) {
        bool cross = rng.uniform() < cfg.cr;  // drawn for every component
        trial[j] = (cross || j == jrand)
                       ? snap_dim(dims[j],
                                  pop[a][j] + cfg.f * (pop[b][j] - pop[c][j]))
                       : pop[i][j];
      }
      double tv = drv.eval(spec_of(trial));
      if (tv >= val[i]) {  // >= lets the population drift across plateaus
        pop[i] = trial;
        val[i] = tv;
      }
    }
  }

  drv.trace.final_population = std::move(pop);
  return drv.trace;
}

OptimizerTrace swift_optimize(const ParamSpace& space,
                              const Objective& objective,
                              const SwiftConfig& cfg) {
  if (cfg.n1 < 1 || cfg.n2 < 1)
    throw ConfigError("swift needs n1 >= 1 and n2 >= 1");
  if (!(cfg.epsilon > 0)) throw ConfigError("swift epsilon must be > 0");

  std::vector<const ParamItem*> learners, pres;
  for (const auto& item : space.items)
    (item.kind == ItemKind::Learner ? learners : pres).push_back(&item);
  if (learners.empty() || pres.empty())
    throw ConfigError("swift needs at least one learner and one pre-processor");
  if (cfg.n1 < long(space.items.size()))
    std::cerr << "warning: n1 " << cfg.n1 << " cannot visit all "
              << space.items.size() << " menu items\n";

  Rng rng(derive_seed(cfg.seed, 0x511F7));
  Driver drv(objective);

  std::map<std::string, double> weights;
  for (const auto& item : space.items) weights[item.id] = 0.0;

  // Stage 2: item ranking. Every prior value, whatever the items, is part of
  // the dominance comparison.
  std::vector<double> priors;
  for (long round = 0; round < cfg.n1; ++round) {
    const ParamItem* l = sample_item(learners, weights, rng);
    const ParamItem* p = sample_item(pres, weights, rng);
    PipelineSpec spec;
    spec.learner = sample_assignment(*l, rng);
    spec.pre = sample_assignment(*p, rng);
    double v = drv.eval(spec);
    int delta = weight_delta(v, priors, cfg.epsilon);
    weights[l->id] += delta;
    weights[p->id] += delta;
    priors.push_back(v);
  }

  // Stage 3: numeric refinement on the winners only; weights stay frozen.
  const ParamItem* top_l = top_item(learners, weights);
  const ParamItem* top_p = top_item(pres, weights);

  struct NumDim {
    const ParamRange* range;
    double lo, hi;
  };
  auto collect = [](const ParamItem* item) {
    std::vector<NumDim> dims;
    for (const auto& r : item->params)
      if (r.type == ParamRange::Int || r.type == ParamRange::Real)
        dims.push_back({&r, r.lo, r.hi});
    return dims;
  };
  std::vector<NumDim> num_l = collect(top_l), num_p = collect(top_p);

  auto sample_refined = [&](const ParamItem& item, std::vector<NumDim>& nums,
                            std::vector<double>& drawn) {
    Assignment a;
    a.item_id = item.id;
    std::size_t ni = 0;
    drawn.clear();
    for (const auto& r : item.params) {
      if (r.type == ParamRange::Int || r.type == ParamRange::Real) {
        NumDim& nd = nums[ni++];
        double b = rng.uniform(nd.lo, nd.hi);
        if (r.type == ParamRange::Int) b = double(std::llround(b));
        b = std::clamp(b, r.lo, r.hi);
        drawn.push_back(b);
        a.params[r.name] = b;
      } else {
        a.params[r.name] = sample_param(r, rng);
      }
    }
    return a;
  };

  auto shrink = [](std::vector<NumDim>& nums, const std::vector<double>& drawn) {
    for (std::size_t i = 0; i < nums.size(); ++i) {
      NumDim& nd = nums[i];
      // integer rounding can leave b a hair outside the interval
      double b = std::clamp(drawn[i], nd.lo, nd.hi);
      if (b - nd.lo > nd.hi - b)
        nd.lo = 0.5 * (b + nd.lo);
      else
        nd.hi = 0.5 * (b + nd.hi);  // equidistant: hi moves
    }
  };

  std::vector<double> drawn_l, drawn_p;
  for (long round = 0; round < cfg.n2; ++round) {
    PipelineSpec spec;
    spec.learner = sample_refined(*top_l, num_l, drawn_l);
    spec.pre = sample_refined(*top_p, num_p, drawn_p);
    bool had_best = drv.trace.has_best;
    double prev_best = drv.trace.best_value;
    double v = drv.eval(spec);
    if (!had_best || v > prev_best) {
      shrink(num_l, drawn_l);
      shrink(num_p, drawn_p);
    }
  }

  drv.trace.final_weights = std::move(weights);
  return drv.trace;
}

OptimizerTrace swift_optimize(const ParamSpace& space, const Dataset& train,
                              const FoldAssignment& folds,
                              const std::string& goal, const SwiftConfig& cfg) {
  std::map<std::string, bool> flag_by_key;
  double sign = goal_sign(goal);
  Objective obj = [&](const PipelineSpec& p) {
    bool flagged = false;
    double v = evaluate_pipeline(p, train, folds, goal, &flagged);
    if (flagged) flag_by_key[canonical_key(p)] = true;
    return sign * v;
  };
  OptimizerTrace t = swift_optimize(space, obj, cfg);
  for (auto& e : t.entries)
    if (flag_by_key.count(canonical_key(e.spec))) e.flagged = true;
  return t;
}

std::map<std::string, double> replay_weights(const std::vector<TraceEntry>& t,
                                             double epsilon, long n1) {
  std::map<std::string, double> weights;
  std::vector<double> priors;
  long rounds = std::min<long>(n1, long(t.size()));
  for (long i = 0; i < rounds; ++i) {
    const TraceEntry& e = t[std::size_t(i)];
    int delta = weight_delta(e.value, priors, epsilon);
    weights[e.spec.learner.item_id] += delta;
    weights[e.spec.pre.item_id] += delta;
    priors.push_back(e.value);
  }
  return weights;
}

double goal_sign(const std::string& goal) { return goal == "pf" ? -1.0 : 1.0; }

namespace {

const std::vector<std::string>& goal_names() {
  static const std::vector<std::string> goals = {"g", "pd", "pf", "f", "prec"};
  return goals;
}

double goal_of(const EvalResult& e, const std::string& goal, bool& defined) {
  if (goal == "g") {
    defined = e.pd_defined && e.pf_defined;
    return e.g;
  }
  if (goal == "pd") {
    defined = e.pd_defined;
    return e.pd;
  }
  if (goal == "pf") {
    defined = e.pf_defined;
    return e.pf;
  }
  if (goal == "f") {
    defined = e.f_defined;
    return e.f;
  }
  if (goal == "prec") {
    defined = e.prec_defined;
    return e.prec;
  }
  throw ConfigError("unknown goal: " + goal);
}

// Train matrix + labels after applying the pipeline's pre-processor; the
// optional fitted transform also maps evaluation rows.
struct Prepared {
  Matrix x;
  std::vector<int> y;
  bool has_ft = false;
  FittedTransform ft;
};

Prepared prepare_train(const PipelineSpec& p, const Dataset& tr,
                       std::uint64_t smote_seed) {
  Prepared out;
  PreprocessorSpec ps = to_preprocessor_spec(p.pre);
  if (ps.kind == PreKind::Smote) {
    Dataset aug = smote(tr, param_int(ps.params, "k", 5),
                        double(param_int(ps.params, "m", 50)),
                        param_num(ps.params, "r", 2.0), smote_seed);
    out.x = aug.features_matrix();
    out.y = aug.labels();
  } else if (ps.kind == PreKind::None) {
    out.x = tr.features_matrix();
    out.y = tr.labels();
  } else {
    Matrix raw = tr.features_matrix();
    out.ft = fit(ps, raw);
    out.has_ft = true;
    out.x = transform(out.ft, raw);
    out.y = tr.labels();
  }
  return out;
}

}  // namespace

double evaluate_pipeline(const PipelineSpec& p, const Dataset& train,
                         const FoldAssignment& folds, const std::string& goal,
                         bool* flagged) {
  if (std::find(goal_names().begin(), goal_names().end(), goal) ==
      goal_names().end())
    throw ConfigError("unknown goal: " + goal);
  if (folds.fold_of.size() != train.size())
    throw ValidationError("fold assignment does not match dataset");

  if (flagged) *flagged = false;
  double sum = 0;
  for (int b = 0; b < folds.n_folds; ++b) {
    Dataset tr, va;
    tr.feature_names = train.feature_names;
    va.feature_names = train.feature_names;
    for (std::size_t i = 0; i < train.size(); ++i)
      (folds.fold_of[i] == b ? va : tr).records.push_back(train.records[i]);

    // seeds depend on the fold only: the objective stays a pure function of
    // (pipeline, data, folds, goal), which the evaluation cache relies on
    Prepared prep = prepare_train(p, tr, derive_seed(0x530E, std::uint64_t(b)));
    Matrix xva = va.features_matrix();
    if (prep.has_ft) xva = transform(prep.ft, xva);

    Model model = sbr::train(to_learner_spec(p.learner), prep.x, prep.y,
                             derive_seed(0x11EA, std::uint64_t(b)));
    EvalResult e = evaluate_labels(va.labels(), predict(model, xva));
    bool defined = true;
    double v = goal_of(e, goal, defined);
    if (!defined && flagged) *flagged = true;
    sum += v;  // undefined folds contribute 0
  }
  return sum / double(folds.n_folds);
}

std::pair<EvalResult, RankedList> final_fit_and_test(const PipelineSpec& p,
                                                     const Dataset& train,
                                                     const Dataset& test,
                                                     std::uint64_t seed) {
  if (test.size() == 0) throw ValidationError("empty test set");
  if (train.feature_names != test.feature_names)
    throw ShapeError("train/test feature spaces differ");

  Prepared prep = prepare_train(p, train, derive_seed(seed, 0x530E));
  Matrix xte = test.features_matrix();
  if (prep.has_ft) xte = transform(prep.ft, xte);

  Model model = sbr::train(to_learner_spec(p.learner), prep.x, prep.y,
                           derive_seed(seed, 0x11EA));
  std::vector<double> scores = predict_score(model, xte);
  std::vector<int> preds(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    preds[i] = scores[i] > 0.5 ? 1 : 0;

  EvalResult e = evaluate_labels(test.labels(), preds);

  std::vector<std::size_t> chrono(test.size());
  std::vector<std::string> ids(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    chrono[i] = i;
    ids[i] = test.records[i].id;
  }
  RankedList ranked = rank_reports(scores, chrono, test.labels(), ids);

  RankedList predicted_pos;
  for (const auto& item : ranked.items)
    if (item.score > 0.5) predicted_pos.items.push_back(item);
  IfaResult ir = ifa(predicted_pos);
  e.ifa = ir.count;
  e.ifa_hit = ir.hit;
  return {e, ranked};
}

}  // namespace sbr
