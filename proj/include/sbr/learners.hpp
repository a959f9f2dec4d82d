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
#include <variant>
#include <vector>

#include "sbr/core.hpp"
#include "sbr/dataset.hpp"

namespace sbr {

enum class LearnerKind { RF, KNN, NB, LR, MLP };

const char* learner_kind_name(LearnerKind k);
LearnerKind learner_kind_from(const std::string& name);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::NB;
  ParamMap params;  // missing key = default (None/auto defaults stay absent)
};

struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1, right = -1;
  int leaf_label = 0;
  bool is_leaf = true;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct RfModel {
  std::vector<Tree> trees;
};

struct LrModel {
  std::vector<double> w;
  double b = 0;
};

struct MlpModel {
  Matrix w1;               // d x hidden
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0;
};

struct KnnModel {
  Matrix x;
  std::vector<int> y;
  long k = 5;
};

struct NbModel {
  double log_prior[2] = {0, 0};
  std::vector<double> mean[2];
  std::vector<double> var[2];
};

struct Model {
  LearnerKind kind = LearnerKind::NB;
  std::size_t n_features = 0;
  std::variant<RfModel, KnnModel, NbModel, LrModel, MlpModel> state;
};

// Both classes must be present (else TrainingError). Training is a pure
// function of (spec, X, y, seed).
Model train(const LearnerSpec& spec, const Matrix& x, const std::vector<int>& y,
            std::uint64_t seed);
Model train(const LearnerSpec& spec, const Dataset& ds, std::uint64_t seed);

// Positive-class scores in [0,1]: RF = vote fraction, KNN = positive neighbor
// fraction, NB = normalized posterior, LR/MLP = sigmoid output.
std::vector<double> predict_score(const Model& m, const Matrix& x);

// score > 0.5 -> 1; the 0.5 tie goes to 0 (conservative on false alarms).
std::vector<int> predict(const Model& m, const Matrix& x);

namespace detail {

// The bootstrap sample drawn for tree t before any split decisions; exposed
// so tree construction can be checked against independent split oracles.
std::vector<std::size_t> rf_bootstrap_indices(std::uint64_t seed, std::size_t t,
                                              std::size_t n);

// Full-batch loss/gradient of the network objective (mean cross-entropy +
// 0.5*alpha*||W||^2 / n); the gradient counterpart feeds finite-difference
// checks.
double mlp_loss(const MlpModel& p, const Matrix& x, const std::vector<int>& y,
                double alpha);
MlpModel mlp_grad(const MlpModel& p, const Matrix& x, const std::vector<int>& y,
                  double alpha);

}  // namespace detail

}  // namespace sbr
