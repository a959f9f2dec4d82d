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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sbr {

// Dense row-major matrix; every numeric feature table in the library is one
// of these.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
};

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

// Population variance (divide by n).
inline double pop_variance(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / double(v.size());
}

// Linear-interpolation quantile of an already-sorted vector, p in [0, 100].
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  double pos = p / 100.0 * double(sorted.size() - 1);
  std::size_t lo = std::size_t(std::floor(pos));
  std::size_t hi = std::size_t(std::ceil(pos));
  if (hi >= sorted.size()) hi = sorted.size() - 1;
  double frac = pos - double(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 50.0);
}

// Report formatting: fixed 6 decimals with trailing zeros trimmed (but at
// least one digit after the point is kept only when non-integral).
inline std::string format_value(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// Lossless-ish numeric text for dataset round trips: integral values print
// as integers, everything else as shortest %.17g.
inline std::string format_full(double x) {
  if (std::floor(x) == x && std::fabs(x) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", (long long)x);
    return std::string(buf);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

// A single hyperparameter value. Categorical params carry strings, switches
// bools, everything numeric (int or real) a double.
using PValue = std::variant<double, bool, std::string>;
using ParamMap = std::map<std::string, PValue>;

inline double pv_num(const PValue& v) { return std::get<double>(v); }
inline bool pv_bool(const PValue& v) { return std::get<bool>(v); }
inline const std::string& pv_str(const PValue& v) {
  return std::get<std::string>(v);
}

inline std::string pv_to_string(const PValue& v) {
  if (std::holds_alternative<double>(v)) return format_full(std::get<double>(v));
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  return std::get<std::string>(v);
}

// Missing key means "use the default" throughout the parameter maps.
inline double param_num(const ParamMap& p, const std::string& k, double dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : std::get<double>(it->second);
}

inline long param_int(const ParamMap& p, const std::string& k, long dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : (long)std::llround(std::get<double>(it->second));
}

inline bool param_bool(const ParamMap& p, const std::string& k, bool dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : std::get<bool>(it->second);
}

inline std::string param_str(const ParamMap& p, const std::string& k,
                             const std::string& dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : std::get<std::string>(it->second);
}

inline bool param_present(const ParamMap& p, const std::string& k) {
  return p.find(k) != p.end();
}

}  // namespace sbr
