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

#include "sbr/dataset.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sbr/rng.hpp"

namespace sbr {

std::size_t Dataset::sbr_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += std::size_t(r.label == 1);
  return n;
}

Matrix Dataset::features_matrix() const {
  Matrix m(size(), n_features());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < n_features(); ++j)
      m.at(i, j) = records[i].features[j];
  return m;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> y(size());
  for (std::size_t i = 0; i < size(); ++i) y[i] = records[i].label;
  return y;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& cell, std::size_t row, bool& ok) {
  const char* s = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  ok = end != s && *end == '\0' && !cell.empty();
  (void)row;
  return v;
}

}  // namespace

Dataset load_dataset(const std::string& path, const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty file: " + path);
  auto header = split_csv_line(line);
  if (header.size() < 3)
    throw SchemaError("header needs id, >=1 feature, label columns: " + path);
  if (header.front() != schema.id_column)
    throw SchemaError("first column must be '" + schema.id_column + "', got '" +
                      header.front() + "'");
  if (header.back() != schema.label_column)
    throw SchemaError("missing label column '" + schema.label_column +
                      "' (last column is '" + header.back() + "')");

  Dataset ds;
  ds.feature_names.assign(header.begin() + 1, header.end() - 1);

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    Record rec;
    rec.id = cells.front();
    rec.features.reserve(ds.feature_names.size());
    for (std::size_t j = 1; j + 1 < cells.size(); ++j) {
      bool ok = false;
      double v = parse_number(cells[j], row, ok);
      if (!ok)
        throw ParseError("row " + std::to_string(row) +
                         ": non-numeric feature cell '" + cells[j] + "'");
      if (v < 0)
        throw ValidationError("row " + std::to_string(row) +
                              ": negative term frequency " + cells[j]);
      rec.features.push_back(v);
    }
    bool ok = false;
    double lab = parse_number(cells.back(), row, ok);
    if (!ok || (lab != 0.0 && lab != 1.0))
      throw ValidationError("row " + std::to_string(row) +
                            ": label must be 0 or 1, got '" + cells.back() +
                            "'");
    rec.label = int(lab);
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) throw ValidationError("no records: " + path);
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset file: " + path);
  out << "id";
  for (const auto& n : ds.feature_names) out << ',' << n;
  out << ",label\n";
  for (const auto& r : ds.records) {
    out << r.id;
    for (double v : r.features) out << ',' << format_full(v);
    out << ',' << r.label << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

FoldAssignment split_folds(const Dataset& ds, int B, std::uint64_t seed) {
  if (B < 2) throw ValidationError("fold count must be >= 2");
  if (std::size_t(B) > ds.size())
    throw ValidationError("fold count exceeds dataset size");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < ds.size(); ++i)
    (ds.records[i].label == 1 ? pos : neg).push_back(i);

  Rng rng(derive_seed(seed, 0xF01D5));
  rng.shuffle(pos);
  rng.shuffle(neg);

  // Deal positives first, then negatives continuing the same round-robin
  // position counter: fold sizes stay balanced and each fold's positive
  // count is within one of the global rate.
  FoldAssignment fa;
  fa.n_folds = B;
  fa.fold_of.assign(ds.size(), 0);
  std::size_t k = 0;
  for (std::size_t i : pos) fa.fold_of[i] = int(k++ % std::size_t(B));
  for (std::size_t i : neg) fa.fold_of[i] = int(k++ % std::size_t(B));
  return fa;
}

}  // namespace sbr
