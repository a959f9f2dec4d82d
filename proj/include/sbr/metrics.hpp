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

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "sbr/error.hpp"

namespace sbr {

struct Confusion {
  long tp = 0, fn = 0, fp = 0, tn = 0;
};

Confusion confusion(const std::vector<int>& y_true,
                    const std::vector<int>& y_pred);

// Harmonic mean of recall and (1 - false alarm); 0 when the denominator is 0.
double g_measure(double pd, double pf);

// Undefined metrics are never NaN: the value is 0 and the matching *_defined
// flag is false.
struct EvalResult {
  Confusion conf;
  double pd = 0, pf = 0, prec = 0, f = 0, g = 0;
  long ifa = 0;
  bool pd_defined = true, pf_defined = true;
  bool prec_defined = true, f_defined = true;
  bool ifa_hit = true;  // false: no true positive among predicted positives
};

struct PrecF {
  double prec = 0, f = 0;
  bool prec_defined = true, f_defined = true;
};

PrecF precision_f(const Confusion& c);

// Assembles the full metric set from labels + predictions (no ranking data:
// ifa is left 0/hit and must be filled from a RankedList by the caller).
EvalResult evaluate_labels(const std::vector<int>& y_true,
                           const std::vector<int>& y_pred);

struct RankedItem {
  std::string id;
  double score = 0;
  int label = 0;
  std::size_t chrono = 0;  // chronological index in the evaluation set
};

struct RankedList {
  std::vector<RankedItem> items;
};

// Evaluation-set positions sorted by descending score, ties broken by the
// earlier chronological index (stable).
std::vector<std::size_t> rank_order(const std::vector<double>& scores,
                                    const std::vector<std::size_t>& chrono);

RankedList rank_reports(const std::vector<double>& scores,
                        const std::vector<std::size_t>& chrono,
                        const std::vector<int>& labels,
                        const std::vector<std::string>& ids);

struct IfaResult {
  long count = 0;  // leading false positives before the first true positive
  bool hit = true; // false: list had no true positive; count = full length
};

// `predicted_positives` must already be restricted to records predicted
// positive, in rank order.
IfaResult ifa(const RankedList& predicted_positives);

// Average precision over each decile cut ceil(d*n/10), d = 1..10. Default is
// standard AP (precision summed at relevant hit ranks, divided by relevant
// count in the cut); literal_ap instead averages precision at every rank of
// the cut (compatibility mode).
std::array<double, 10> map_deciles(const RankedList& ranked,
                                   bool literal_ap = false);

double map_of_deciles(const std::array<double, 10>& deciles);

}  // namespace sbr
