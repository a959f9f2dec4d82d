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
#include <string>
#include <vector>

#include "sbr/core.hpp"
#include "sbr/dataset.hpp"

namespace sbr {

enum class PreKind {
  None,
  Normalizer,
  StandardScaler,
  MinMaxScaler,
  MaxAbsScaler,
  RobustScaler,
  QuantileTransformer,
  PowerTransformer,
  Binarizer,
  PolynomialFeatures,
  Smote,
};

const char* pre_kind_name(PreKind k);
PreKind pre_kind_from(const std::string& name);

struct PreprocessorSpec {
  PreKind kind = PreKind::None;
  ParamMap params;  // missing key = default
};

// Column statistics frozen at fit time. Which fields are meaningful depends
// on kind; transform() only reads the ones its kind filled.
struct FittedTransform {
  PreKind kind = PreKind::None;
  ParamMap params;
  std::size_t in_cols = 0;
  std::vector<double> center, scale;            // mean/median, std/range/...
  std::vector<std::vector<double>> quantiles;   // per column, ascending
  std::vector<double> refs;                     // quantile reference positions
  std::vector<double> lambdas;                  // power-transform exponents
};

// Learns column statistics from X only. Smote is dataset-level and rejected
// here (use smote()); box-cox on a non-positive column raises ValidationError
// naming the column.
FittedTransform fit(const PreprocessorSpec& spec, const Matrix& X);

// Shape-preserving except PolynomialFeatures. Column count must match fit.
Matrix transform(const FittedTransform& ft, const Matrix& X);

// Appends floor(m_percent/100 * minority_count) synthetic minority records:
// x + u*(x_nn - x) with x a random minority record, x_nn one of its k nearest
// minority neighbors under Minkowski-r distance, u uniform [0,1). Originals
// come first, untouched. k is clamped to minority_count-1 with a warning.
// Throws OversamplingError when the minority class has < 2 records.
Dataset smote(const Dataset& ds, long k, double m_percent, double r,
              std::uint64_t seed);

}  // namespace sbr
