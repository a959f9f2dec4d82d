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
#include "sbr/error.hpp"

namespace sbr {

// One bug report: opaque id, term-frequency features, binary label
// (1 = security bug report, 0 = non-security).
struct Record {
  std::string id;
  std::vector<double> features;
  int label = 0;
};

// Records stay in file order, which is the chronological submission order
// the ranking tie-break depends on.
struct Dataset {
  std::vector<Record> records;
  std::vector<std::string> feature_names;

  std::size_t size() const { return records.size(); }
  std::size_t n_features() const { return feature_names.size(); }
  std::size_t sbr_count() const;
  std::size_t nsbr_count() const { return size() - sbr_count(); }

  Matrix features_matrix() const;
  std::vector<int> labels() const;
};

// CSV layout: first column is the id, last column the label, everything in
// between a numeric term-frequency feature.
struct ColumnSchema {
  std::string id_column = "id";
  std::string label_column = "label";
};

// Throws SchemaError (bad header), ParseError (non-numeric cell, with row
// index), ValidationError (label outside {0,1}, negative feature, or no
// records), IoError (unreadable file).
Dataset load_dataset(const std::string& path, const ColumnSchema& schema = {});

// Inverse of load_dataset; numeric text round-trips exactly.
void save_dataset(const Dataset& ds, const std::string& path);

struct FoldAssignment {
  std::vector<int> fold_of;  // record index -> fold id in [0, n_folds)
  int n_folds = 0;
};

// Stratified deal: positives shuffled then negatives shuffled, positions
// handed out round-robin, so every fold's SBR count is within one record of
// the global rate and fold sizes are balanced.
FoldAssignment split_folds(const Dataset& ds, int B, std::uint64_t seed);

}  // namespace sbr
