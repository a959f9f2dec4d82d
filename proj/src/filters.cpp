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

#include "sbr/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sbr/error.hpp"

namespace sbr {

KeywordScores score_keywords(const Dataset& train, SupportKind kind,
                             std::size_t K) {
  const std::size_t n_sbr = train.sbr_count();
  const std::size_t n_nsbr = train.nsbr_count();
  if (n_sbr == 0)
    throw FilterError("cannot score keywords without positives");
  if (n_nsbr == 0)
    throw FilterError("cannot score keywords without negatives");

  const std::size_t d = train.n_features();
  std::vector<double> df_s(d, 0), df_ns(d, 0);
  for (const auto& r : train.records)
    for (std::size_t j = 0; j < d; ++j)
      if (r.features[j] > 0) (r.label == 1 ? df_s : df_ns)[j] += 1;

  KeywordScores ks;
  ks.scores.resize(d);
  const double g = kind == SupportKind::TIMES_TWO ? 2.0 : 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    double num_s = kind == SupportKind::SQUARED ? df_s[j] * df_s[j] : df_s[j];
    double p_s = std::min(1.0, num_s / double(n_sbr));
    double p_ns = std::min(1.0, g * df_ns[j] / double(n_nsbr));
    double score = (p_s + p_ns == 0.0) ? 0.5 : p_s / (p_s + p_ns);
    ks.scores[j] = std::clamp(score, 0.01, 0.99);
  }

  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return ks.scores[a] > ks.scores[b];  // ties keep feature order
  });
  idx.resize(std::min(K, d));
  ks.keyword_set = std::move(idx);
  return ks;
}

double score_report(const Record& rec, const KeywordScores& scores) {
  if (scores.scores.empty())
    throw FilterError("score_report: empty keyword scores");
  // log-space product combination: P = 1 / (1 + exp(sum log(1-s) - log s))
  double log_ratio = 0;
  bool any = false;
  for (std::size_t j : scores.keyword_set) {
    if (rec.features.at(j) > 0) {
      double s = scores.scores[j];
      log_ratio += std::log(1.0 - s) - std::log(s);
      any = true;
    }
  }
  if (!any) return 0.0;
  return 1.0 / (1.0 + std::exp(log_ratio));
}

Dataset apply_farsec_filter(const Dataset& train, const KeywordScores& scores,
                            double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0))
    throw FilterError("farsec cutoff must lie in (0,1)");
  Dataset out;
  out.feature_names = train.feature_names;
  for (const auto& r : train.records) {
    if (r.label == 0 && score_report(r, scores) >= cutoff) continue;
    out.records.push_back(r);
  }
  return out;
}

namespace {

bool all_rows_identical(const Dataset& ds) {
  for (std::size_t i = 1; i < ds.size(); ++i)
    if (ds.records[i].features != ds.records[0].features) return false;
  return true;
}

// Fraction of the N nearest active records (Euclidean, index tie-break)
// whose label differs from record i's.
double diff_label_fraction(const Dataset& ds,
                           const std::vector<std::size_t>& active,
                           std::size_t i, std::size_t N) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(active.size() - 1);
  const auto& fi = ds.records[i].features;
  for (std::size_t j : active) {
    if (j == i) continue;
    double s = 0;
    const auto& fj = ds.records[j].features;
    for (std::size_t c = 0; c < fi.size(); ++c) {
      double dlt = fi[c] - fj[c];
      s += dlt * dlt;
    }
    dist.emplace_back(s, j);
  }
  std::size_t take = std::min(N, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + long(take), dist.end());
  std::size_t diff = 0;
  for (std::size_t k = 0; k < take; ++k)
    diff += std::size_t(ds.records[dist[k].second].label !=
                        ds.records[i].label);
  return take == 0 ? 0.0 : double(diff) / double(take);
}

}  // namespace

Dataset apply_clni(const Dataset& train, const ClniParams& p) {
  if (train.size() <= p.N)
    throw FilterError("clni needs more records than neighbors");
  if (all_rows_identical(train)) return train;  // documented degenerate case

  std::vector<double> flagged_fraction(train.size(), -1.0);  // -1: not flagged
  std::set<std::size_t> noise_prev, noise;

  for (std::size_t iter = 0; iter < p.max_iterations; ++iter) {
    // Active set: everything except NSBRs already flagged as noise.
    std::vector<std::size_t> active;
    active.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
      if (!(train.records[i].label == 0 && noise.count(i))) active.push_back(i);
    if (active.size() <= p.N) break;

    noise_prev = noise;
    for (std::size_t i : active) {
      double frac = diff_label_fraction(train, active, i, p.N);
      if (frac >= p.noise_threshold && !noise.count(i)) {
        noise.insert(i);
        flagged_fraction[i] = frac;
      }
    }

    if (noise.empty() && noise_prev.empty()) break;
    // noise grows monotonically, so Jaccard(prev, cur) = |prev| / |cur|.
    if (!noise.empty() &&
        double(noise_prev.size()) / double(noise.size()) >= p.stop_similarity)
      break;
  }

  Dataset out;
  out.feature_names = train.feature_names;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& r = train.records[i];
    if (r.label == 0 && flagged_fraction[i] >= p.removal_limit) continue;
    out.records.push_back(r);
  }
  return out;
}

const std::vector<std::string>& filter_names() {
  static const std::vector<std::string> names = {
      "train",      "farsec",       "farsecsq",     "farsectwo",
      "clni",       "clnifarsec",   "clnifarsecsq", "clnifarsectwo"};
  return names;
}

Dataset apply_named_filter(const Dataset& train, const std::string& name,
                           std::size_t K, double cutoff,
                           const ClniParams& clni) {
  auto farsec = [&](SupportKind kind) {
    return apply_farsec_filter(train, score_keywords(train, kind, K), cutoff);
  };
  if (name == "train") return train;
  if (name == "farsec") return farsec(SupportKind::PLAIN);
  if (name == "farsecsq") return farsec(SupportKind::SQUARED);
  if (name == "farsectwo") return farsec(SupportKind::TIMES_TWO);
  if (name == "clni") return apply_clni(train, clni);
  if (name == "clnifarsec") return apply_clni(farsec(SupportKind::PLAIN), clni);
  if (name == "clnifarsecsq")
    return apply_clni(farsec(SupportKind::SQUARED), clni);
  if (name == "clnifarsectwo")
    return apply_clni(farsec(SupportKind::TIMES_TWO), clni);
  throw ConfigError("unknown filter: " + name);
}

}  // namespace sbr
