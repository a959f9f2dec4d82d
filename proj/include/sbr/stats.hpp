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
#include <map>
#include <string>
#include <vector>

#include "sbr/error.hpp"

namespace sbr {

// Probability that a value drawn from M beats one drawn from N
// (ties count half): (#{x>y} + 0.5*#{x==y}) / (|M|*|N|).
double a12(const std::vector<double>& m, const std::vector<double>& n);

// Two-sided bootstrap test of the mean difference under the pooled-shift
// null: both groups are recentered onto the pooled mean, resampled n_boot
// times, and the observed |mean(M)-mean(N)| must exceed the conf-quantile of
// the resampled statistic. Deterministic per seed.
bool bootstrap_significant(const std::vector<double>& m,
                           const std::vector<double>& n, long n_boot = 1000,
                           double conf = 0.95, std::uint64_t seed = 1);

struct TreatmentSamples {
  std::string name;
  std::vector<double> values;  // oriented so higher is better
};

struct RankAssignment {
  std::map<std::string, int> rank_of;  // 1 = best; ranks contiguous
};

// Recursive mean-split ranking: groups sorted by mean (descending, name
// tie-break), split where the pooled between-side mean-squared separation
//   E = (ms/ls)*(mean_m - mean_l)^2 + (ns/ls)*(mean_n - mean_l)^2
// is maximal, recursing only when the sides differ significantly (bootstrap)
// AND the effect is non-small (a12(better, worse) >= 0.6). Input order never
// matters: per-segment seeds derive from the segment bounds in sorted order.
RankAssignment scott_knott(const std::vector<TreatmentSamples>& groups,
                           std::uint64_t seed = 1);

}  // namespace sbr
