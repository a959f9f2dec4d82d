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

#include "sbr/learners.hpp"

#include <algorithm>
#include <cmath>

#include "sbr/error.hpp"
#include "sbr/rng.hpp"

namespace sbr {

// out-of-line builders living in forest.cpp / mlp.cpp
RfModel train_rf(const ParamMap& params, const Matrix& x,
                 const std::vector<int>& y, std::uint64_t seed);
MlpModel train_mlp(const ParamMap& params, const Matrix& x,
                   const std::vector<int>& y, std::uint64_t seed);

namespace {

const char* kLearnerNames[] = {"RF", "KNN", "NB", "LR", "MLP"};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

NbModel train_nb(const ParamMap& params, const Matrix& x,
                 const std::vector<int>& y) {
  double var_smoothing = param_num(params, "var_smoothing", 1e-9);
  NbModel m;
  std::size_t counts[2] = {0, 0};
  for (int lab : y) counts[lab]++;
  for (int c = 0; c < 2; ++c) {
    m.log_prior[c] = std::log(double(counts[c]) / double(y.size()));
    m.mean[c].assign(x.cols, 0.0);
    m.var[c].assign(x.cols, 0.0);
  }
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j)
      m.mean[y[i]][j] += x.at(i, j);
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < x.cols; ++j) m.mean[c][j] /= double(counts[c]);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      double d = x.at(i, j) - m.mean[y[i]][j];
      m.var[y[i]][j] += d * d;
    }
  // additive smoothing: var_smoothing times the largest overall feature
  // variance, with a tiny floor so zero-variance features stay usable
  double max_var = 0;
  for (std::size_t j = 0; j < x.cols; ++j) {
    std::vector<double> col(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) col[i] = x.at(i, j);
    max_var = std::max(max_var, pop_variance(col));
  }
  double eps = var_smoothing * max_var;
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < x.cols; ++j) {
      m.var[c][j] = m.var[c][j] / double(counts[c]) + eps;
      if (m.var[c][j] < 1e-12) m.var[c][j] = 1e-12;
    }
  return m;
}

LrModel train_lr(const ParamMap& params, const Matrix& x,
                 const std::vector<int>& y) {
  double C = param_num(params, "C", 1.0);
  long max_iter = param_int(params, "max_iter", 100);
  const std::size_t n = x.rows, d = x.cols;
  LrModel m;
  m.w.assign(d, 0.0);
  m.b = 0.0;
  std::vector<double> gw(d);
  const double step = 0.1 / double(n);
  for (long it = 0; it < max_iter; ++it) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = m.b;
      const double* row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) z += m.w[j] * row[j];
      double err = sigmoid(z) - double(y[i]);
      for (std::size_t j = 0; j < d; ++j) gw[j] += err * row[j];
      gb += err;
    }
    for (std::size_t j = 0; j < d; ++j) {
      gw[j] += m.w[j] / C;  // L2 penalty, intercept left unpenalized
      m.w[j] -= step * gw[j];
    }
    m.b -= step * gb;
  }
  return m;
}

std::vector<double> score_rf(const RfModel& m, const Matrix& x) {
  std::vector<double> out(x.rows, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* row = x.row(i);
    long votes = 0;
    for (const Tree& t : m.trees) {
      int node = 0;
      while (!t.nodes[std::size_t(node)].is_leaf) {
        const TreeNode& nd = t.nodes[std::size_t(node)];
        node = row[std::size_t(nd.feature)] <= nd.threshold ? nd.left
                                                            : nd.right;
      }
      votes += t.nodes[std::size_t(node)].leaf_label;
    }
    out[i] = double(votes) / double(m.trees.size());
  }
  return out;
}

std::vector<double> score_knn(const KnnModel& m, const Matrix& x) {
  std::vector<double> out(x.rows, 0.0);
  std::size_t k = std::min<std::size_t>(std::size_t(m.k), m.x.rows);
  std::vector<std::pair<double, std::size_t>> dist(m.x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* q = x.row(i);
    for (std::size_t t = 0; t < m.x.rows; ++t) {
      const double* r = m.x.row(t);
      double s = 0;
      for (std::size_t j = 0; j < m.x.cols; ++j) {
        double d = q[j] - r[j];
        s += d * d;
      }
      dist[t] = {s, t};
    }
    std::partial_sort(dist.begin(), dist.begin() + long(k), dist.end());
    long pos = 0;
    for (std::size_t j = 0; j < k; ++j) pos += m.y[dist[j].second];
    out[i] = double(pos) / double(k);
  }
  return out;
}

std::vector<double> score_nb(const NbModel& m, const Matrix& x) {
  constexpr double log_2pi = 1.8378770664093453;
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    double lp[2];
    for (int c = 0; c < 2; ++c) {
      double s = m.log_prior[c];
      for (std::size_t j = 0; j < x.cols; ++j) {
        double d = x.at(i, j) - m.mean[c][j];
        s += -0.5 * (log_2pi + std::log(m.var[c][j])) -
             d * d / (2.0 * m.var[c][j]);
      }
      lp[c] = s;
    }
    out[i] = 1.0 / (1.0 + std::exp(lp[0] - lp[1]));
  }
  return out;
}

std::vector<double> score_lr(const LrModel& m, const Matrix& x) {
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    double z = m.b;
    const double* row = x.row(i);
    for (std::size_t j = 0; j < m.w.size(); ++j) z += m.w[j] * row[j];
    out[i] = sigmoid(z);
  }
  return out;
}

std::vector<double> score_mlp(const MlpModel& m, const Matrix& x) {
  const std::size_t h = m.b1.size();
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* row = x.row(i);
    double z2 = m.b2;
    for (std::size_t u = 0; u < h; ++u) {
      double a = m.b1[u];
      for (std::size_t j = 0; j < x.cols; ++j) a += row[j] * m.w1.at(j, u);
      if (a > 0) z2 += a * m.w2[u];
    }
    out[i] = sigmoid(z2);
  }
  return out;
}

}  // namespace

const char* learner_kind_name(LearnerKind k) {
  return kLearnerNames[std::size_t(k)];
}

LearnerKind learner_kind_from(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kLearnerNames); ++i)
    if (name == kLearnerNames[i]) return LearnerKind(i);
  throw ConfigError("unknown learner: " + name);
}

Model train(const LearnerSpec& spec, const Matrix& x, const std::vector<int>& y,
            std::uint64_t seed) {
  if (x.rows != y.size())
    throw ShapeError("train: feature/label row mismatch");
  if (x.rows == 0) throw TrainingError("train: empty dataset");
  bool has0 = false, has1 = false;
  for (int lab : y) (lab == 1 ? has1 : has0) = true;
  if (!has0 || !has1)
    throw TrainingError("train: dataset contains a single class");

  Model m;
  m.kind = spec.kind;
  m.n_features = x.cols;
  switch (spec.kind) {
    case LearnerKind::RF:
      m.state = train_rf(spec.params, x, y, seed);
      break;
    case LearnerKind::KNN: {
      KnnModel km;
      km.x = x;
      km.y = y;
      km.k = param_int(spec.params, "n_neighbors", 5);
      if (km.k < 1) throw ValidationError("n_neighbors must be >= 1");
      m.state = std::move(km);
      break;
    }
    case LearnerKind::NB:
      m.state = train_nb(spec.params, x, y);
      break;
    case LearnerKind::LR:
      m.state = train_lr(spec.params, x, y);
      break;
    case LearnerKind::MLP:
      m.state = train_mlp(spec.params, x, y, seed);
      break;
  }
  return m;
}

Model train(const LearnerSpec& spec, const Dataset& ds, std::uint64_t seed) {
  return train(spec, ds.features_matrix(), ds.labels(), seed);
}

std::vector<double> predict_score(const Model& m, const Matrix& x) {
  if (x.cols != m.n_features)
    throw ShapeError("predict: expected " + std::to_string(m.n_features) +
                     " features, got " + std::to_string(x.cols));
  switch (m.kind) {
    case LearnerKind::RF:
      return score_rf(std::get<RfModel>(m.state), x);
    case LearnerKind::KNN:
      return score_knn(std::get<KnnModel>(m.state), x);
    case LearnerKind::NB:
      return score_nb(std::get<NbModel>(m.state), x);
    case LearnerKind::LR:
      return score_lr(std::get<LrModel>(m.state), x);
    case LearnerKind::MLP:
      return score_mlp(std::get<MlpModel>(m.state), x);
  }
  throw TrainingError("unhandled learner kind");
}

std::vector<int> predict(const Model& m, const Matrix& x) {
  auto scores = predict_score(m, x);
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    out[i] = scores[i] > 0.5 ? 1 : 0;  // exact 0.5 tie goes to 0
  return out;
}

}  // namespace sbr
