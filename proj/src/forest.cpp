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

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "sbr/error.hpp"
#include "sbr/learners.hpp"
#include "sbr/rng.hpp"

namespace sbr {

namespace {

double entropy2(double pos, double neg) {
  double n = pos + neg;
  if (n == 0) return 0;
  double h = 0;
  for (double c : {pos, neg}) {
    if (c == 0) continue;
    double p = c / n;
    h -= p * std::log2(p);
  }
  return h;
}

struct SplitChoice {
  double gain = 0;
  int feature = -1;
  double threshold = 0;
};

struct Candidate {
  std::size_t node_id = 0;
  std::vector<std::size_t> samples;
  long depth = 0;
  SplitChoice split;
  std::size_t counter = 0;  // creation order: earlier node wins gain ties
};

struct CandidateLess {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.split.gain != b.split.gain) return a.split.gain < b.split.gain;
    return a.counter > b.counter;
  }
};

struct GrowLimits {
  long min_samples_leaf = 1;
  long min_samples_split = 2;
  long max_leaf_nodes = -1;  // -1: unlimited
  long max_depth = -1;       // -1: unlimited
  std::size_t mtry = 1;
};

int majority_label(const std::vector<int>& y,
                   const std::vector<std::size_t>& samples) {
  long pos = 0;
  for (std::size_t i : samples) pos += y[i];
  long neg = long(samples.size()) - pos;
  return pos > neg ? 1 : 0;  // exact tie goes to 0
}

// Best entropy split over a fresh random feature subset; gain 0 means no
// usable split was found.
SplitChoice best_split(const Matrix& x, const std::vector<int>& y,
                       const std::vector<std::size_t>& samples,
                       const GrowLimits& lim, Rng& rng,
                       std::vector<std::size_t>& feat_pool,
                       std::vector<std::pair<double, int>>& scratch) {
  const std::size_t d = x.cols;
  const std::size_t m = samples.size();
  for (std::size_t j = 0; j < d; ++j) feat_pool[j] = j;

  long total_pos = 0;
  for (std::size_t i : samples) total_pos += y[i];
  long total_neg = long(m) - total_pos;
  double parent_h = entropy2(double(total_pos), double(total_neg));

  SplitChoice best;
  for (std::size_t pick = 0; pick < lim.mtry; ++pick) {
    std::size_t swap_at = pick + rng.index(d - pick);
    std::swap(feat_pool[pick], feat_pool[swap_at]);
    std::size_t f = feat_pool[pick];

    scratch.clear();
    for (std::size_t i : samples) scratch.emplace_back(x.at(i, f), y[i]);
    std::sort(scratch.begin(), scratch.end());

    long lp = 0, ln = 0;
    for (std::size_t i = 1; i < m; ++i) {
      lp += scratch[i - 1].second;
      ln += 1 - scratch[i - 1].second;
      if (scratch[i].first == scratch[i - 1].first) continue;
      long nl = long(i), nr = long(m) - nl;
      if (nl < lim.min_samples_leaf || nr < lim.min_samples_leaf) continue;
      double child_h =
          (double(nl) / double(m)) * entropy2(double(lp), double(ln)) +
          (double(nr) / double(m)) *
              entropy2(double(total_pos - lp), double(total_neg - ln));
      double gain = parent_h - child_h;
      if (gain > best.gain + 1e-15) {
        best.gain = gain;
        best.feature = int(f);
        best.threshold = 0.5 * (scratch[i - 1].first + scratch[i].first);
      }
    }
  }
  return best;
}

bool node_expandable(const std::vector<int>& y,
                     const std::vector<std::size_t>& samples, long depth,
                     const GrowLimits& lim) {
  if (long(samples.size()) < lim.min_samples_split) return false;
  if (lim.max_depth >= 0 && depth >= lim.max_depth) return false;
  long pos = 0;
  for (std::size_t i : samples) pos += y[i];
  return pos != 0 && pos != long(samples.size());  // pure nodes stop
}

Tree build_tree(const Matrix& x, const std::vector<int>& y,
                std::vector<std::size_t> boot, const GrowLimits& lim,
                Rng& rng) {
  Tree tree;
  std::vector<std::size_t> feat_pool(x.cols);
  std::vector<std::pair<double, int>> scratch;
  scratch.reserve(boot.size());

  tree.nodes.push_back(TreeNode{});
  tree.nodes[0].leaf_label = majority_label(y, boot);

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateLess> queue;
  std::size_t counter = 0;
  if (node_expandable(y, boot, 0, lim)) {
    Candidate c;
    c.node_id = 0;
    c.samples = std::move(boot);
    c.counter = counter++;
    c.split = best_split(x, y, c.samples, lim, rng, feat_pool, scratch);
    if (c.split.gain > 0) queue.push(std::move(c));
  }

  long leaves = 1;
  while (!queue.empty() &&
         (lim.max_leaf_nodes < 0 || leaves < lim.max_leaf_nodes)) {
    Candidate c = std::move(const_cast<Candidate&>(queue.top()));
    queue.pop();

    TreeNode& nd = tree.nodes[c.node_id];
    nd.is_leaf = false;
    nd.feature = c.split.feature;
    nd.threshold = c.split.threshold;

    std::vector<std::size_t> left, right;
    for (std::size_t i : c.samples)
      (x.at(i, std::size_t(c.split.feature)) <= c.split.threshold ? left
                                                                  : right)
          .push_back(i);

    for (int side = 0; side < 2; ++side) {
      auto& samples = side == 0 ? left : right;
      std::size_t id = tree.nodes.size();
      tree.nodes.push_back(TreeNode{});
      tree.nodes[id].leaf_label = majority_label(y, samples);
      (side == 0 ? tree.nodes[c.node_id].left : tree.nodes[c.node_id].right) =
          int(id);
      if (node_expandable(y, samples, c.depth + 1, lim)) {
        Candidate child{id, std::move(samples), c.depth + 1, SplitChoice{},
                        counter++};
        child.split =
            best_split(x, y, child.samples, lim, rng, feat_pool, scratch);
        if (child.split.gain > 0) queue.push(std::move(child));
      }
    }
    ++leaves;
  }
  return tree;
}

}  // namespace

namespace detail {

std::vector<std::size_t> rf_bootstrap_indices(std::uint64_t seed, std::size_t t,
                                              std::size_t n) {
  Rng rng(derive_seed(seed, 0x7EE, t));
  std::vector<std::size_t> boot(n);
  for (std::size_t i = 0; i < n; ++i) boot[i] = rng.index(n);
  return boot;
}

}  // namespace detail

RfModel train_rf(const ParamMap& params, const Matrix& x,
                 const std::vector<int>& y, std::uint64_t seed) {
  GrowLimits lim;
  long n_estimators = param_int(params, "n_estimators", 10);
  lim.min_samples_leaf = param_int(params, "min_samples_leaf", 1);
  lim.min_samples_split = param_int(params, "min_samples_split", 2);
  if (param_present(params, "max_leaf_nodes"))
    lim.max_leaf_nodes = param_int(params, "max_leaf_nodes", -1);
  if (param_present(params, "max_depth"))
    lim.max_depth = param_int(params, "max_depth", -1);
  if (param_present(params, "max_features")) {
    double mf = param_num(params, "max_features", 1.0);
    lim.mtry = std::size_t(
        std::clamp<double>(std::ceil(mf * double(x.cols)), 1.0,
                           double(x.cols)));
  } else {
    lim.mtry = std::size_t(std::ceil(std::sqrt(double(x.cols))));
  }
  if (n_estimators < 1) throw ValidationError("n_estimators must be >= 1");
  if (lim.max_leaf_nodes == 0 || lim.max_leaf_nodes == 1)
    throw ValidationError("max_leaf_nodes must be >= 2");

  RfModel model;
  model.trees.reserve(std::size_t(n_estimators));
  for (long t = 0; t < n_estimators; ++t) {
    // one stream per tree: bootstrap draws first, then split-feature draws
    Rng rng(derive_seed(seed, 0x7EE, std::uint64_t(t)));
    std::vector<std::size_t> boot(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) boot[i] = rng.index(x.rows);
    model.trees.push_back(build_tree(x, y, std::move(boot), lim, rng));
  }
  return model;
}

}  // namespace sbr
