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

// Shared invariant suites. Each prop_* runs its checks through doctest and
// also returns whether everything held, so callers can summarize.
// Include doctest.h before this header.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sbr/dataset.hpp"
#include "sbr/experiment.hpp"
#include "sbr/filters.hpp"
#include "sbr/learners.hpp"
#include "sbr/metrics.hpp"
#include "sbr/preprocess.hpp"
#include "sbr/rng.hpp"
#include "support.hpp"

namespace sbrtest {

#define SBR_PROP(cond)                         \
  do {                                         \
    bool prop_ok_ = static_cast<bool>(cond);   \
    CHECK(prop_ok_);                           \
    ok = ok && prop_ok_;                       \
  } while (0)

// Every filter keeps all positives, never adds records, and preserves order.
inline bool prop_filters_preserve_positives(std::uint64_t seed) {
  bool ok = true;
  sbr::Dataset ds = farsec_stand_in(200, 30, seed);
  for (const auto& name : sbr::filter_names()) {
    sbr::Dataset out = sbr::apply_named_filter(ds, name);
    SBR_PROP(out.sbr_count() == ds.sbr_count());
    SBR_PROP(out.size() <= ds.size());
    SBR_PROP(out.feature_names == ds.feature_names);
    std::size_t j = 0;
    for (const auto& r : ds.records)
      if (j < out.size() && out.records[j].id == r.id) ++j;
    SBR_PROP(j == out.size());
  }
  return ok;
}

// Every SMOTE synthetic lies on a segment between two minority records.
inline bool prop_smote_convexity(std::uint64_t seed) {
  bool ok = true;
  sbr::Dataset ds = synth_reports(80, 5, 0.2, 0.8, seed);
  std::vector<const std::vector<double>*> minority;
  for (const auto& r : ds.records)
    if (r.label == 1) minority.push_back(&r.features);
  sbr::Dataset out = sbr::smote(ds, 5, 200.0, 2.0, seed + 1);
  SBR_PROP(out.size() ==
           ds.size() + std::size_t(2.0 * double(minority.size())));
  for (std::size_t s = ds.size(); s < out.size(); ++s) {
    const auto& f = out.records[s].features;
    SBR_PROP(out.records[s].label == 1);
    double best = 1e18;
    for (const auto* pa : minority)
      for (const auto* pb : minority) {
        const auto& a = *pa;
        const auto& b = *pb;
        double num = 0, den = 0;
        for (std::size_t c = 0; c < f.size(); ++c) {
          num += (f[c] - a[c]) * (b[c] - a[c]);
          den += (b[c] - a[c]) * (b[c] - a[c]);
        }
        double u = den == 0 ? 0.0 : num / den;
        if (u < -1e-12 || u > 1.0 + 1e-12) continue;
        double res = 0;
        for (std::size_t c = 0; c < f.size(); ++c) {
          double dlt = f[c] - (a[c] + u * (b[c] - a[c]));
          res += dlt * dlt;
        }
        best = std::min(best, std::sqrt(res));
      }
    SBR_PROP(best < 1e-9);
  }
  return ok;
}

// Post-transform contracts for every scaling pre-processor.
inline bool prop_scaler_contracts(std::uint64_t seed) {
  bool ok = true;
  sbr::Rng rng(seed);
  sbr::Matrix x(60, 4);
  for (auto& v : x.data) v = rng.uniform() * 12.0;

  auto ft_of = [&](sbr::PreKind kind, sbr::ParamMap params = {}) {
    return sbr::transform(sbr::fit({kind, std::move(params)}, x), x);
  };
  auto col = [](const sbr::Matrix& m, std::size_t c) {
    std::vector<double> v(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) v[i] = m.at(i, c);
    return v;
  };

  {
    auto out = ft_of(sbr::PreKind::StandardScaler);
    for (std::size_t c = 0; c < x.cols; ++c) {
      SBR_PROP(std::fabs(sbr::mean_of(col(out, c))) < 1e-9);
      SBR_PROP(std::fabs(sbr::pop_variance(col(out, c)) - 1.0) < 1e-9);
    }
  }
  {
    auto out = ft_of(sbr::PreKind::MinMaxScaler);
    for (std::size_t c = 0; c < x.cols; ++c) {
      auto v = col(out, c);
      SBR_PROP(std::fabs(*std::min_element(v.begin(), v.end())) < 1e-12);
      SBR_PROP(std::fabs(*std::max_element(v.begin(), v.end()) - 1.0) < 1e-12);
    }
  }
  {
    auto out = ft_of(sbr::PreKind::MaxAbsScaler);
    for (double v : out.data) SBR_PROP(std::fabs(v) <= 1.0 + 1e-12);
  }
  {
    auto out = ft_of(sbr::PreKind::Normalizer);
    for (std::size_t i = 0; i < out.rows; ++i) {
      double s = 0;
      for (std::size_t c = 0; c < out.cols; ++c) s += out.at(i, c) * out.at(i, c);
      SBR_PROP(std::fabs(std::sqrt(s) - 1.0) < 1e-9);
    }
  }
  {
    auto out = ft_of(sbr::PreKind::RobustScaler);
    for (std::size_t c = 0; c < x.cols; ++c)
      SBR_PROP(std::fabs(sbr::median_of(col(out, c))) < 1e-9);
  }
  {
    auto out = ft_of(sbr::PreKind::Binarizer);
    for (double v : out.data) SBR_PROP(v == 0.0 || v == 1.0);
  }
  {
    auto out = ft_of(sbr::PreKind::QuantileTransformer);
    for (double v : out.data) SBR_PROP(v >= -1e-12 && v <= 1.0 + 1e-12);
  }
  {
    auto out = ft_of(sbr::PreKind::PowerTransformer);
    for (std::size_t c = 0; c < x.cols; ++c) {
      SBR_PROP(std::fabs(sbr::mean_of(col(out, c))) < 1e-6);
      SBR_PROP(std::fabs(sbr::pop_variance(col(out, c)) - 1.0) < 1e-6);
    }
  }
  {
    auto out = ft_of(sbr::PreKind::PolynomialFeatures);
    SBR_PROP(out.cols == 15);  // C(4+2, 2) monomials of degree <= 2
  }
  return ok;
}

// Full-batch MLP gradient against central finite differences.
inline bool prop_mlp_gradcheck(std::uint64_t seed) {
  bool ok = true;
  const std::size_t n = 5, d = 3, h = 100;
  sbr::Rng rng(seed);
  sbr::Matrix x(n, d);
  for (auto& v : x.data) v = rng.uniform() * 2.0 - 1.0;
  std::vector<int> y = {1, 0, 1, 1, 0};

  sbr::MlpModel m;
  m.w1 = sbr::Matrix(d, h);
  for (auto& v : m.w1.data) v = rng.uniform() * 0.6 - 0.3;
  m.b1.resize(h);
  for (auto& v : m.b1) v = rng.uniform() * 0.2 - 0.1;
  m.w2.resize(h);
  for (auto& v : m.w2) v = rng.uniform() * 0.6 - 0.3;
  m.b2 = 0.05;

  const double alpha = 1e-4, step = 1e-6;
  sbr::MlpModel g = sbr::detail::mlp_grad(m, x, y, alpha);

  auto check_coord = [&](double* param, double analytic) {
    double saved = *param;
    *param = saved + step;
    double lo_hi = sbr::detail::mlp_loss(m, x, y, alpha);
    *param = saved - step;
    double lo_lo = sbr::detail::mlp_loss(m, x, y, alpha);
    *param = saved;
    double fd = (lo_hi - lo_lo) / (2.0 * step);
    SBR_PROP(std::fabs(fd - analytic) <= 1e-4 * std::max(1.0, std::fabs(fd)));
  };

  for (std::size_t t = 0; t < 12; ++t) {
    std::size_t i = rng.index(m.w1.data.size());
    check_coord(&m.w1.data[i], g.w1.data[i]);
  }
  for (std::size_t t = 0; t < 6; ++t) {
    std::size_t i = rng.index(h);
    check_coord(&m.b1[i], g.b1[i]);
    check_coord(&m.w2[i], g.w2[i]);
  }
  check_coord(&m.b2, g.b2);
  return ok;
}

// Gaussian NB scores against a clean-room reimplementation of the closed form.
inline bool prop_nb_closed_form(std::uint64_t seed) {
  bool ok = true;
  sbr::Rng rng(seed);
  const std::size_t n = 18, d = 4;
  sbr::Matrix x(n, d);
  for (auto& v : x.data) v = rng.uniform() * 5.0;
  std::vector<int> y(n);
  for (auto& v : y) v = rng.index(2) ? 1 : 0;
  y[0] = 0;
  y[1] = 1;  // both classes present

  sbr::Model m = sbr::train({sbr::LearnerKind::NB, {}}, x, y, 1);
  auto got = sbr::predict_score(m, x);

  // Independent closed form: smoothing = 1e-9 * max column variance.
  double counts[2] = {0, 0};
  for (int lab : y) counts[lab] += 1;
  std::vector<double> mean[2], var[2];
  for (int c = 0; c < 2; ++c) {
    mean[c].assign(d, 0.0);
    var[c].assign(d, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[y[i]][j] += x.at(i, j);
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < d; ++j) mean[c][j] /= counts[c];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double dd = x.at(i, j) - mean[y[i]][j];
      var[y[i]][j] += dd * dd;
    }
  double max_var = 0;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> colv(n);
    for (std::size_t i = 0; i < n; ++i) colv[i] = x.at(i, j);
    max_var = std::max(max_var, sbr::pop_variance(colv));
  }
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < d; ++j)
      var[c][j] = std::max(var[c][j] / counts[c] + 1e-9 * max_var, 1e-12);

  const double log_2pi = std::log(8.0 * std::atan(1.0));
  for (std::size_t i = 0; i < n; ++i) {
    double lp[2];
    for (int c = 0; c < 2; ++c) {
      double s = std::log(counts[c] / double(n));
      for (std::size_t j = 0; j < d; ++j) {
        double dd = x.at(i, j) - mean[c][j];
        s += -0.5 * (log_2pi + std::log(var[c][j])) - dd * dd / (2 * var[c][j]);
      }
      lp[c] = s;
    }
    double want = 1.0 / (1.0 + std::exp(lp[0] - lp[1]));
    SBR_PROP(std::fabs(got[i] - want) <= 1e-9);
  }
  return ok;
}

// rank_reports against an exhaustive stable sort, ifa against a plain scan.
inline bool prop_rank_ifa_brute(std::uint64_t seed) {
  bool ok = true;
  sbr::Rng rng(seed);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t n = 3 + rng.index(15);
    std::vector<double> scores(n);
    std::vector<std::size_t> chrono(n);
    std::vector<int> labels(n);
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = double(rng.index(4)) / 4.0;  // coarse: force ties
      chrono[i] = i;
      labels[i] = rng.index(3) == 0 ? 1 : 0;
      ids[i] = "r" + std::to_string(i);
    }
    sbr::RankedList ranked = sbr::rank_reports(scores, chrono, labels, ids);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return scores[a] > scores[b];  // stability = chronological tie-break
    });
    REQUIRE(ranked.items.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      SBR_PROP(ranked.items[i].id == ids[idx[i]]);
      SBR_PROP(ranked.items[i].chrono == idx[i]);
    }

    sbr::IfaResult r = sbr::ifa(ranked);
    long falses = 0;
    bool found = false;
    for (const auto& item : ranked.items) {
      if (item.label == 1) {
        found = true;
        break;
      }
      ++falses;
    }
    SBR_PROP(r.hit == found);
    SBR_PROP(r.count == falses);
  }
  return ok;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// The same experiment config emits byte-identical reports on repeated runs
// (runtime.csv records wall time and is exempt).
inline bool prop_experiment_determinism() {
  bool ok = true;
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "sbr_det_check";
  fs::remove_all(base);
  fs::create_directories(base);

  sbr::Dataset train = synth_reports(120, 6, 0.15, 1.2, 77);
  sbr::Dataset test = synth_reports(120, 6, 0.15, 1.2, 78);
  sbr::save_dataset(train, (base / "train.csv").string());
  sbr::save_dataset(test, (base / "test.csv").string());

  sbr::ExperimentConfig cfg;
  cfg.train_path = (base / "train.csv").string();
  cfg.test_path = (base / "test.csv").string();
  cfg.filter_name = "train";
  cfg.treatment = "swift";
  cfg.goal = "g";
  cfg.seeds = {1, 2};
  cfg.opt.n1 = 3;
  cfg.opt.n2 = 3;
  cfg.opt.folds = 3;
  cfg.project = "det";

  for (const char* leg : {"a", "b"}) {
    sbr::Report rep = sbr::run_experiment(cfg);
    fs::create_directories(base / leg);
    sbr::emit_report(rep, (base / leg).string());
  }
  for (const char* name :
       {"results.csv", "medians.csv", "ranks.csv", "map_deciles.csv"}) {
    std::string a = slurp((base / "a" / name).string());
    std::string b = slurp((base / "b" / name).string());
    SBR_PROP(!a.empty());
    SBR_PROP(a == b);
  }
  return ok;
}

}  // namespace sbrtest
