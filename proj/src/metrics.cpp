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

#include "sbr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sbr {

Confusion confusion(const std::vector<int>& y_true,
                    const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size())
    throw ValidationError("confusion: label vectors differ in length");
  Confusion c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] != 0 && y_true[i] != 1)
      throw ValidationError("confusion: true label outside {0,1}");
    if (y_pred[i] != 0 && y_pred[i] != 1)
      throw ValidationError("confusion: predicted label outside {0,1}");
    if (y_true[i] == 1)
      (y_pred[i] == 1 ? c.tp : c.fn)++;
    else
      (y_pred[i] == 1 ? c.fp : c.tn)++;
  }
  return c;
}

double g_measure(double pd, double pf) {
  double denom = pd + (1.0 - pf);
  if (denom == 0.0) return 0.0;
  return 2.0 * pd * (1.0 - pf) / denom;
}

PrecF precision_f(const Confusion& c) {
  PrecF r;
  if (c.tp + c.fp == 0) {
    r.prec_defined = false;
  } else {
    r.prec = double(c.tp) / double(c.tp + c.fp);
  }
  double pd = (c.tp + c.fn == 0) ? 0.0 : double(c.tp) / double(c.tp + c.fn);
  if (!r.prec_defined || pd + r.prec == 0.0) {
    r.f_defined = false;
  } else {
    r.f = 2.0 * pd * r.prec / (pd + r.prec);
  }
  return r;
}

EvalResult evaluate_labels(const std::vector<int>& y_true,
                           const std::vector<int>& y_pred) {
  EvalResult e;
  e.conf = confusion(y_true, y_pred);
  const Confusion& c = e.conf;
  if (c.tp + c.fn == 0)
    e.pd_defined = false;
  else
    e.pd = double(c.tp) / double(c.tp + c.fn);
  if (c.fp + c.tn == 0)
    e.pf_defined = false;
  else
    e.pf = double(c.fp) / double(c.fp + c.tn);
  PrecF pfm = precision_f(c);
  e.prec = pfm.prec;
  e.prec_defined = pfm.prec_defined;
  e.f = pfm.f;
  e.f_defined = pfm.f_defined;
  e.g = g_measure(e.pd, e.pf);  // over the reported (0-when-undefined) values
  return e;
}

std::vector<std::size_t> rank_order(const std::vector<double>& scores,
                                    const std::vector<std::size_t>& chrono) {
  if (scores.size() != chrono.size())
    throw ValidationError("rank_order: scores/chrono differ in length");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (scores[a] != scores[b]) return scores[a] > scores[b];
                     return chrono[a] < chrono[b];
                   });
  return idx;
}

RankedList rank_reports(const std::vector<double>& scores,
                        const std::vector<std::size_t>& chrono,
                        const std::vector<int>& labels,
                        const std::vector<std::string>& ids) {
  if (scores.size() != labels.size() || scores.size() != ids.size())
    throw ValidationError("rank_reports: input vectors differ in length");
  auto order = rank_order(scores, chrono);
  RankedList out;
  out.items.reserve(order.size());
  for (std::size_t i : order)
    out.items.push_back({ids[i], scores[i], labels[i], chrono[i]});
  return out;
}

IfaResult ifa(const RankedList& predicted_positives) {
  IfaResult r;
  for (const auto& item : predicted_positives.items) {
    if (item.label == 1) return r;
    ++r.count;
  }
  r.hit = false;  // count == full predicted-positive length
  return r;
}

std::array<double, 10> map_deciles(const RankedList& ranked, bool literal_ap) {
  const std::size_t n = ranked.items.size();
  if (n < 10) throw ValidationError("map_deciles needs at least 10 entries");
  std::array<double, 10> out{};
  for (int d = 1; d <= 10; ++d) {
    std::size_t cut = (std::size_t(d) * n + 9) / 10;  // ceil(d*n/10)
    double sum = 0;
    std::size_t hits = 0;
    for (std::size_t k = 1; k <= cut; ++k) {
      if (ranked.items[k - 1].label == 1) ++hits;
      double prec_at_k = double(hits) / double(k);
      if (literal_ap)
        sum += prec_at_k;
      else if (ranked.items[k - 1].label == 1)
        sum += prec_at_k;
    }
    if (literal_ap)
      out[d - 1] = sum / double(cut);
    else
      out[d - 1] = hits == 0 ? 0.0 : sum / double(hits);
  }
  return out;
}

double map_of_deciles(const std::array<double, 10>& deciles) {
  double s = 0;
  for (double v : deciles) s += v;
  return s / 10.0;
}

}  // namespace sbr
