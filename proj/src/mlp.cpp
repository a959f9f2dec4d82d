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
#include <limits>
#include <numeric>
#include <vector>

#include "sbr/learners.hpp"
#include "sbr/rng.hpp"

namespace sbr {

namespace {

constexpr std::size_t kHidden = 100;  // single hidden layer, ReLU

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double bce(double p, int y) {
  p = std::clamp(p, 1e-10, 1.0 - 1e-10);
  return y == 1 ? -std::log(p) : -std::log(1.0 - p);
}

double sq_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

// Forward pass + raw output-layer deltas (p - y) for the given rows.
// Returns the summed data loss; a1 holds the hidden activations.
// Zero inputs are skipped (term-frequency rows are sparse); their terms are
// exact +0.0, so the sums are unchanged.
double forward(const MlpModel& m, const Matrix& x, const std::vector<int>& y,
               const std::vector<std::size_t>& rows, Matrix& a1,
               std::vector<double>& delta2) {
  const std::size_t bn = rows.size();
  double loss = 0;
  for (std::size_t b = 0; b < bn; ++b) {
    const double* row = x.row(rows[b]);
    double* acc = &a1.data[b * kHidden];
    std::copy(m.b1.begin(), m.b1.end(), acc);
    for (std::size_t j = 0; j < x.cols; ++j) {
      double xv = row[j];
      if (xv == 0) continue;
      const double* wrow = &m.w1.data[j * kHidden];
      for (std::size_t u = 0; u < kHidden; ++u) acc[u] += xv * wrow[u];
    }
    double z2 = m.b2;
    for (std::size_t u = 0; u < kHidden; ++u) {
      double a = acc[u] > 0 ? acc[u] : 0;
      acc[u] = a;
      z2 += a * m.w2[u];
    }
    double p = sigmoid(z2);
    delta2[b] = p - double(y[rows[b]]);
    loss += bce(p, y[rows[b]]);
  }
  return loss;
}

// Batch gradients, all scaled by 1/bn; L2 applies to weights only.
void backward(const MlpModel& m, const Matrix& x,
              const std::vector<std::size_t>& rows, const Matrix& a1,
              const std::vector<double>& delta2, double alpha, MlpModel& g) {
  const std::size_t bn = rows.size();
  const double inv = 1.0 / double(bn);
  std::fill(g.w1.data.begin(), g.w1.data.end(), 0.0);
  std::fill(g.b1.begin(), g.b1.end(), 0.0);
  std::fill(g.w2.begin(), g.w2.end(), 0.0);
  g.b2 = 0;

  std::vector<double> d1(kHidden);
  for (std::size_t b = 0; b < bn; ++b) {
    const double* row = x.row(rows[b]);
    double d2 = delta2[b];
    g.b2 += d2;
    for (std::size_t u = 0; u < kHidden; ++u) {
      double a = a1.at(b, u);
      g.w2[u] += a * d2;
      d1[u] = a > 0 ? d2 * m.w2[u] : 0.0;
      g.b1[u] += d1[u];
    }
    for (std::size_t j = 0; j < x.cols; ++j) {
      double xv = row[j];
      if (xv == 0) continue;  // term-frequency rows are sparse
      double* grow = &g.w1.data[j * kHidden];
      for (std::size_t u = 0; u < kHidden; ++u) grow[u] += xv * d1[u];
    }
  }
  for (std::size_t i = 0; i < g.w1.data.size(); ++i)
    g.w1.data[i] = (g.w1.data[i] + alpha * m.w1.data[i]) * inv;
  for (std::size_t u = 0; u < kHidden; ++u) {
    g.w2[u] = (g.w2[u] + alpha * m.w2[u]) * inv;
    g.b1[u] *= inv;
  }
  g.b2 *= inv;
}

MlpModel zeros_like(std::size_t d) {
  MlpModel m;
  m.w1 = Matrix(d, kHidden);
  m.b1.assign(kHidden, 0.0);
  m.w2.assign(kHidden, 0.0);
  m.b2 = 0;
  return m;
}

}  // namespace

namespace detail {

double mlp_loss(const MlpModel& p, const Matrix& x, const std::vector<int>& y,
                double alpha) {
  std::vector<std::size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), 0);
  Matrix a1(x.rows, kHidden);
  std::vector<double> delta2(x.rows);
  double data = forward(p, x, y, rows, a1, delta2) / double(x.rows);
  double reg = 0.5 * alpha * (sq_norm(p.w1.data) + sq_norm(p.w2)) /
               double(x.rows);
  return data + reg;
}

MlpModel mlp_grad(const MlpModel& p, const Matrix& x, const std::vector<int>& y,
                  double alpha) {
  std::vector<std::size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), 0);
  Matrix a1(x.rows, kHidden);
  std::vector<double> delta2(x.rows);
  forward(p, x, y, rows, a1, delta2);
  MlpModel g = zeros_like(x.cols);
  backward(p, x, rows, a1, delta2, alpha, g);
  return g;
}

}  // namespace detail

MlpModel train_mlp(const ParamMap& params, const Matrix& x,
                   const std::vector<int>& y, std::uint64_t seed) {
  const double alpha = param_num(params, "alpha", 1e-4);
  const double lr0 = param_num(params, "learning_rate_init", 1e-3);
  const double power_t = param_num(params, "power_t", 0.5);
  const long max_iter = param_int(params, "max_iter", 200);
  const double momentum = param_num(params, "momentum", 0.9);
  const long n_no_change = param_int(params, "n_iter_no_change", 10);
  const double tol = 1e-4;
  const std::size_t n = x.rows, d = x.cols;
  const std::size_t batch = std::min<std::size_t>(200, n);

  Rng rng(derive_seed(seed, 0x317));
  MlpModel m = zeros_like(d);
  // uniform init scaled by fan-in + fan-out, biases included
  double bound1 = std::sqrt(6.0 / double(d + kHidden));
  for (double& w : m.w1.data) w = rng.uniform(-bound1, bound1);
  for (double& b : m.b1) b = rng.uniform(-bound1, bound1);
  double bound2 = std::sqrt(6.0 / double(kHidden + 1));
  for (double& w : m.w2) w = rng.uniform(-bound2, bound2);
  m.b2 = rng.uniform(-bound2, bound2);

  MlpModel vel = zeros_like(d), grad = zeros_like(d);
  Matrix a1(batch, kHidden);
  std::vector<double> delta2(batch);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> rows;
  rows.reserve(batch);

  double best_loss = std::numeric_limits<double>::infinity();
  long no_improve = 0;
  for (long epoch = 1; epoch <= max_iter; ++epoch) {
    rng.shuffle(order);
    const double lr = lr0 / std::pow(double(epoch), power_t);
    for (std::size_t start = 0; start < n; start += batch) {
      std::size_t stop = std::min(n, start + batch);
      rows.assign(order.begin() + long(start), order.begin() + long(stop));
      forward(m, x, y, rows, a1, delta2);
      backward(m, x, rows, a1, delta2, alpha, grad);

      for (std::size_t i = 0; i < m.w1.data.size(); ++i) {
        vel.w1.data[i] = momentum * vel.w1.data[i] - lr * grad.w1.data[i];
        m.w1.data[i] += vel.w1.data[i];
      }
      for (std::size_t u = 0; u < kHidden; ++u) {
        vel.b1[u] = momentum * vel.b1[u] - lr * grad.b1[u];
        m.b1[u] += vel.b1[u];
        vel.w2[u] = momentum * vel.w2[u] - lr * grad.w2[u];
        m.w2[u] += vel.w2[u];
      }
      vel.b2 = momentum * vel.b2 - lr * grad.b2;
      m.b2 += vel.b2;
    }

    double loss = detail::mlp_loss(m, x, y, alpha);
    if (loss > best_loss - tol)
      ++no_improve;
    else
      no_improve = 0;
    if (loss < best_loss) best_loss = loss;
    if (no_improve >= n_no_change) break;
  }
  return m;
}

}  // namespace sbr
