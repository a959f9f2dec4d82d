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

#include <cstddef>
#include <string>
#include <vector>

#include "sbr/dataset.hpp"

namespace sbr {

// Support function applied to keyword frequencies: PLAIN leaves them alone,
// SQUARED squares the SBR document frequency, TIMES_TWO doubles the NSBR one.
enum class SupportKind { PLAIN, SQUARED, TIMES_TWO };

struct KeywordScores {
  std::vector<double> scores;        // per feature index, clipped [0.01,0.99]
  std::vector<std::size_t> keyword_set;  // top-K feature indices
};

// Spam-style keyword scoring over document frequencies:
//   p_s  = min(1, num_s / |SBR|),   num_s = df_s^2 for SQUARED else df_s
//   p_ns = min(1, g * df_ns / |NSBR|), g = 2 for TIMES_TWO else 1
//   score = clip(p_s / (p_s + p_ns), 0.01, 0.99); 0/0 -> neutral 0.5
// keyword_set = top-K by score, ties broken by feature order.
KeywordScores score_keywords(const Dataset& train, SupportKind kind,
                             std::size_t K = 100);

// Product combination over the keywords present (feature > 0):
//   P = prod(s) / (prod(s) + prod(1-s)), computed in log space.
// No keywords present -> 0.0.
double score_report(const Record& rec, const KeywordScores& scores);

// Drops NSBRs whose report score >= cutoff; SBRs and order are preserved.
Dataset apply_farsec_filter(const Dataset& train, const KeywordScores& scores,
                            double cutoff = 0.75);

struct ClniParams {
  std::size_t N = 5;             // nearest neighbors consulted
  double noise_threshold = 0.75; // different-label fraction that flags
  double stop_similarity = 0.99; // Jaccard similarity of successive noise sets
  double removal_limit = 0.75;   // recorded fraction needed for final removal
  std::size_t max_iterations = 20;
};

// Iterative noise flagging: each pass scans the records not yet flagged as
// NSBR noise, flags any whose N nearest (Euclidean, index tie-break) are
// mostly the other label, and accumulates the noise set until successive
// sets are stop_similarity-close (or the cap). Only NSBRs whose recorded
// fraction reached removal_limit are dropped. An all-identical feature
// matrix is returned unchanged (no meaningful neighborhoods).
Dataset apply_clni(const Dataset& train, const ClniParams& p = {});

// The eight training variants, in canonical order: train, farsec, farsecsq,
// farsectwo, clni, clnifarsec, clnifarsecsq, clnifarsectwo.
const std::vector<std::string>& filter_names();

// Dispatch by name; clni* variants run apply_clni over the farsec output.
Dataset apply_named_filter(const Dataset& train, const std::string& name,
                           std::size_t K = 100, double cutoff = 0.75,
                           const ClniParams& clni = {});

}  // namespace sbr
