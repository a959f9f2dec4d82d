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

#include <cmath>
#include <cstdint>
#include <string>

#include "sbr/dataset.hpp"
#include "sbr/rng.hpp"

namespace sbrtest {

// Knuth's product-of-uniforms sampler; fine for the small rates used here.
inline int poisson(sbr::Rng& rng, double lambda) {
  double limit = std::exp(-lambda);
  double prod = rng.uniform();
  int n = 0;
  while (prod > limit) {
    ++n;
    prod *= rng.uniform();
  }
  return n;
}

// Term-frequency-shaped corpus: zero-inflated counts with a heavy per-term
// scale spread. Every term appears in 35% of ordinary reports. A positive
// report picks one of two themes (front or back half of the vocabulary) and
// shifts presence odds symmetrically — in-theme terms up, off-theme terms
// down by the same amount — so each term's marginal mean AND variance match
// the ordinary class at weak `signal`: the label lives in which terms appear
// TOGETHER, not in any single term. In-theme counts also grow with signal^2,
// so high `signal` (>= ~3) is separable even on raw per-term counts. The
// per-term tilt (0.4..1.6) keeps every term informative but none equally;
// positive positions are shuffled so chronology carries no label information.
inline sbr::Dataset synth_reports(std::size_t n, std::size_t d, double rate,
                                  double signal, std::uint64_t seed) {
  sbr::Rng rng(sbr::derive_seed(seed, 0x5D47A));
  std::vector<int> labels(n, 0);
  auto n_pos = std::size_t(std::llround(rate * double(n)));
  for (std::size_t i = 0; i < n_pos && i < n; ++i) labels[i] = 1;
  rng.shuffle(labels);

  sbr::Dataset ds;
  ds.feature_names.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    ds.feature_names[j] = "term" + std::to_string(j);
  for (std::size_t i = 0; i < n; ++i) {
    sbr::Record r;
    r.id = "r" + std::to_string(i);
    r.label = labels[i];
    r.features.resize(d);
    bool front_theme = labels[i] == 1 && rng.uniform() < 0.5;
    for (std::size_t j = 0; j < d; ++j) {
      double u = d > 1 ? double(j) / double(d - 1) : 1.0;
      double tilt = 0.4 + 1.2 * u;        // uneven per-term informativeness
      double lambda = 0.4 + 4.6 * u * u;  // common terms run hot
      double q = 0.35, rate_mult = 1.0;
      if (labels[i] == 1) {
        bool in_theme = (j < (d + 1) / 2) == front_theme;
        double push = 0.35 * (1.0 - std::exp(-1.2 * signal * tilt));
        q = in_theme ? q + push : q - push;
        if (in_theme) rate_mult = 1.0 + 0.12 * signal * signal;
      }
      r.features[j] = rng.uniform() < q
                          ? 1.0 + double(poisson(rng, lambda * rate_mult))
                          : 0.0;
    }
    ds.records.push_back(std::move(r));
  }
  return ds;
}

// Stand-in with the published FARSEC corpus shapes, used when the real CSVs
// are not supplied via SBR_FARSEC_DIR.
inline sbr::Dataset farsec_stand_in(std::size_t rows, std::size_t positives,
                                    std::uint64_t seed) {
  return synth_reports(rows, 15, double(positives) / double(rows), 0.6, seed);
}

}  // namespace sbrtest
