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

#include "sbr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sbr/core.hpp"
#include "sbr/rng.hpp"

namespace sbr {

double a12(const std::vector<double>& m, const std::vector<double>& n) {
  if (m.empty() || n.empty()) throw ValidationError("a12 needs both samples");
  // Count via the rank-sum identity on sorted copies: O((|m|+|n|) log).
  std::vector<double> ms = m, ns = n;
  std::sort(ms.begin(), ms.end());
  std::sort(ns.begin(), ns.end());
  double wins = 0;
  std::size_t lo = 0, hi = 0;  // ns entries strictly below / at most x
  for (double x : ms) {
    while (lo < ns.size() && ns[lo] < x) ++lo;
    if (hi < lo) hi = lo;
    while (hi < ns.size() && ns[hi] <= x) ++hi;
    wins += double(lo) + 0.5 * double(hi - lo);
  }
  return wins / (double(m.size()) * double(n.size()));
}

bool bootstrap_significant(const std::vector<double>& m,
                           const std::vector<double>& n, long n_boot,
                           double conf, std::uint64_t seed) {
  if (m.empty() || n.empty())
    throw ValidationError("bootstrap needs both samples");
  if (n_boot < 1) throw ValidationError("bootstrap needs n_boot >= 1");
  if (!(conf > 0 && conf < 1))
    throw ValidationError("bootstrap confidence must be in (0,1)");

  double mean_m = mean_of(m), mean_n = mean_of(n);
  double observed = std::fabs(mean_m - mean_n);
  double pooled = (std::accumulate(m.begin(), m.end(), 0.0) +
                   std::accumulate(n.begin(), n.end(), 0.0)) /
                  double(m.size() + n.size());

  // Shift both groups onto the pooled mean so the null (equal means) holds.
  std::vector<double> zm(m.size()), zn(n.size());
  for (std::size_t i = 0; i < m.size(); ++i) zm[i] = m[i] - mean_m + pooled;
  for (std::size_t i = 0; i < n.size(); ++i) zn[i] = n[i] - mean_n + pooled;

  Rng rng(derive_seed(seed, 0xB007));
  std::vector<double> stats(static_cast<std::size_t>(n_boot));
  for (long b = 0; b < n_boot; ++b) {
    double sm = 0, sn = 0;
    for (std::size_t i = 0; i < zm.size(); ++i) sm += zm[rng.index(zm.size())];
    for (std::size_t i = 0; i < zn.size(); ++i) sn += zn[rng.index(zn.size())];
    stats[std::size_t(b)] =
        std::fabs(sm / double(zm.size()) - sn / double(zn.size()));
  }
  std::sort(stats.begin(), stats.end());
  return observed > quantile_sorted(stats, conf * 100.0);
}

namespace {

struct Group {
  const TreatmentSamples* src;
  double mean;
};

double pooled_mean(const std::vector<Group>& gs, std::size_t lo,
                   std::size_t hi) {
  double sum = 0;
  std::size_t count = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    for (double v : gs[i].src->values) sum += v;
    count += gs[i].src->values.size();
  }
  return sum / double(count);
}

std::vector<double> pooled_values(const std::vector<Group>& gs, std::size_t lo,
                                  std::size_t hi) {
  std::vector<double> out;
  for (std::size_t i = lo; i < hi; ++i)
    out.insert(out.end(), gs[i].src->values.begin(), gs[i].src->values.end());
  return out;
}

void split_rank(const std::vector<Group>& gs, std::size_t lo, std::size_t hi,
                std::uint64_t seed, int& next_rank,
                std::map<std::string, int>& rank_of) {
  auto assign_all = [&] {
    int r = next_rank++;
    for (std::size_t i = lo; i < hi; ++i) rank_of[gs[i].src->name] = r;
  };
  if (hi - lo < 2) {
    assign_all();
    return;
  }

  // Best cut by the between-side separation of means, weighted by size.
  double mu = pooled_mean(gs, lo, hi);
  std::size_t ls = 0;
  for (std::size_t i = lo; i < hi; ++i) ls += gs[i].src->values.size();
  std::size_t best_cut = lo + 1;
  double best_e = -1;
  for (std::size_t cut = lo + 1; cut < hi; ++cut) {
    double mm = pooled_mean(gs, lo, cut), mn = pooled_mean(gs, cut, hi);
    std::size_t ms = 0, ns = 0;
    for (std::size_t i = lo; i < cut; ++i) ms += gs[i].src->values.size();
    for (std::size_t i = cut; i < hi; ++i) ns += gs[i].src->values.size();
    double e = (double(ms) / double(ls)) * (mm - mu) * (mm - mu) +
               (double(ns) / double(ls)) * (mn - mu) * (mn - mu);
    if (e > best_e) {
      best_e = e;
      best_cut = cut;
    }
  }

  std::vector<double> side_m = pooled_values(gs, lo, best_cut);
  std::vector<double> side_n = pooled_values(gs, best_cut, hi);
  // Segment-derived seed: the result cannot depend on the caller's ordering.
  std::uint64_t seg =
      derive_seed(seed, std::uint64_t(lo) * 1315423911ull + std::uint64_t(hi));
  bool distinct = bootstrap_significant(side_m, side_n, 1000, 0.95, seg) &&
                  a12(side_m, side_n) >= 0.6;  // groups sorted: m is better
  if (!distinct) {
    assign_all();
    return;
  }
  split_rank(gs, lo, best_cut, seed, next_rank, rank_of);
  split_rank(gs, best_cut, hi, seed, next_rank, rank_of);
}

}  // namespace

RankAssignment scott_knott(const std::vector<TreatmentSamples>& groups,
                           std::uint64_t seed) {
  if (groups.empty()) throw ValidationError("scott_knott needs groups");
  std::vector<Group> gs;
  gs.reserve(groups.size());
  for (const auto& g : groups) {
    if (g.values.empty())
      throw ValidationError("scott_knott group '" + g.name + "' is empty");
    gs.push_back({&g, mean_of(g.values)});
  }
  std::sort(gs.begin(), gs.end(), [](const Group& a, const Group& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    return a.src->name < b.src->name;
  });

  RankAssignment out;
  int next_rank = 1;
  split_rank(gs, 0, gs.size(), seed, next_rank, out.rank_of);
  return out;
}

}  // namespace sbr
