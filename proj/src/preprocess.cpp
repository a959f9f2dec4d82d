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

#include "sbr/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>

#include "sbr/error.hpp"
#include "sbr/rng.hpp"

namespace sbr {

namespace {

const char* kPreNames[] = {"None",
                           "Normalizer",
                           "StandardScaler",
                           "MinMaxScaler",
                           "MaxAbsScaler",
                           "RobustScaler",
                           "QuantileTransformer",
                           "PowerTransformer",
                           "Binarizer",
                           "PolynomialFeatures",
                           "SMOTE"};

std::vector<double> column(const Matrix& x, std::size_t c) {
  std::vector<double> v(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) v[i] = x.at(i, c);
  return v;
}

double fallback_one(double s) { return s == 0.0 ? 1.0 : s; }

// Inverse standard-normal CDF (Acklam's rational approximation, |err|<1e-9).
double probit(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

double yeo_johnson(double x, double lam) {
  if (x >= 0) {
    if (std::fabs(lam) < 1e-12) return std::log1p(x);
    return (std::pow(x + 1.0, lam) - 1.0) / lam;
  }
  if (std::fabs(lam - 2.0) < 1e-12) return -std::log1p(-x);
  return -(std::pow(1.0 - x, 2.0 - lam) - 1.0) / (2.0 - lam);
}

double box_cox(double x, double lam) {
  if (std::fabs(lam) < 1e-12) return std::log(x);
  return (std::pow(x, lam) - 1.0) / lam;
}

// Profile log-likelihood of the power parameter for one column.
double power_ll(const std::vector<double>& col, double lam, bool yj) {
  std::vector<double> y(col.size());
  double jac = 0;
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (yj) {
      y[i] = yeo_johnson(col[i], lam);
      jac += (lam - 1.0) *
             (col[i] >= 0 ? std::log1p(col[i]) : -std::log1p(-col[i]));
    } else {
      y[i] = box_cox(col[i], lam);
      jac += (lam - 1.0) * std::log(col[i]);
    }
  }
  double v = pop_variance(y);
  if (!(v > 0) || !std::isfinite(v))
    return -std::numeric_limits<double>::infinity();
  return -0.5 * double(col.size()) * std::log(v) + jac;
}

double fit_lambda(const std::vector<double>& col, bool yj) {
  // Golden-section maximization over [-5, 5]; deterministic.
  const double gr = 0.6180339887498949;
  double lo = -5.0, hi = 5.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = power_ll(col, x1, yj), f2 = power_ll(col, x2, yj);
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = power_ll(col, x2, yj);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = power_ll(col, x1, yj);
    }
  }
  double lam = 0.5 * (lo + hi);
  if (!std::isfinite(power_ll(col, lam, yj))) return 1.0;  // constant column
  return lam;
}

// Monotone knots for the quantile map: runs of equal quantile values collapse
// to one knot whose reference is the run average.
void dedupe_knots(const std::vector<double>& q, const std::vector<double>& r,
                  std::vector<double>& qd, std::vector<double>& rd) {
  qd.clear();
  rd.clear();
  std::size_t i = 0;
  while (i < q.size()) {
    std::size_t j = i;
    double rsum = 0;
    while (j < q.size() && q[j] == q[i]) rsum += r[j++];
    qd.push_back(q[i]);
    rd.push_back(rsum / double(j - i));
    i = j;
  }
}

double interp_quantile(const std::vector<double>& qd,
                       const std::vector<double>& rd, double x) {
  if (x <= qd.front()) return rd.front();
  if (x >= qd.back()) return rd.back();
  auto it = std::upper_bound(qd.begin(), qd.end(), x);
  std::size_t hi = std::size_t(it - qd.begin());
  std::size_t lo = hi - 1;
  double t = (x - qd[lo]) / (qd[hi] - qd[lo]);
  return rd[lo] + t * (rd[hi] - rd[lo]);
}

// Exponent tuples in generation order: bias (optional), then degree 1..d
// index combinations (with repetition unless interaction_only).
void for_each_monomial(std::size_t n, long degree, bool interaction_only,
                       bool include_bias,
                       const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> tuple;
  if (include_bias) fn(tuple);
  for (long deg = 1; deg <= degree; ++deg) {
    if (interaction_only && std::size_t(deg) > n) break;
    tuple.assign(std::size_t(deg), 0);
    // first combination: 0,0,..,0 or 0,1,..,deg-1
    if (interaction_only)
      for (long i = 0; i < deg; ++i) tuple[std::size_t(i)] = std::size_t(i);
    while (true) {
      fn(tuple);
      // next combination (non-decreasing / strictly increasing)
      long pos = deg - 1;
      while (pos >= 0) {
        std::size_t limit =
            interaction_only ? n - std::size_t(deg - pos) : n - 1;
        if (tuple[std::size_t(pos)] < limit) break;
        --pos;
      }
      if (pos < 0) break;
      ++tuple[std::size_t(pos)];
      for (long i = pos + 1; i < deg; ++i)
        tuple[std::size_t(i)] =
            interaction_only ? tuple[std::size_t(i - 1)] + 1
                             : tuple[std::size_t(i - 1)];
    }
  }
}

}  // namespace

const char* pre_kind_name(PreKind k) { return kPreNames[std::size_t(k)]; }

PreKind pre_kind_from(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kPreNames); ++i)
    if (name == kPreNames[i]) return PreKind(i);
  throw ConfigError("unknown pre-processor: " + name);
}

FittedTransform fit(const PreprocessorSpec& spec, const Matrix& x) {
  if (spec.kind == PreKind::Smote)
    throw ValidationError("SMOTE resamples datasets; use smote()");
  if (x.rows == 0) throw ValidationError("fit: empty matrix");

  FittedTransform ft;
  ft.kind = spec.kind;
  ft.params = spec.params;
  ft.in_cols = x.cols;

  switch (spec.kind) {
    case PreKind::None:
    case PreKind::Normalizer:
    case PreKind::Binarizer:
    case PreKind::PolynomialFeatures:
      break;

    case PreKind::StandardScaler: {
      for (std::size_t c = 0; c < x.cols; ++c) {
        auto col = column(x, c);
        ft.center.push_back(mean_of(col));
        ft.scale.push_back(fallback_one(std::sqrt(pop_variance(col))));
      }
      break;
    }

    case PreKind::MinMaxScaler: {
      for (std::size_t c = 0; c < x.cols; ++c) {
        auto col = column(x, c);
        double lo = *std::min_element(col.begin(), col.end());
        double hi = *std::max_element(col.begin(), col.end());
        ft.center.push_back(lo);
        ft.scale.push_back(fallback_one(hi - lo));
      }
      break;
    }

    case PreKind::MaxAbsScaler: {
      for (std::size_t c = 0; c < x.cols; ++c) {
        double m = 0;
        for (std::size_t i = 0; i < x.rows; ++i)
          m = std::max(m, std::fabs(x.at(i, c)));
        ft.scale.push_back(fallback_one(m));
      }
      break;
    }

    case PreKind::RobustScaler: {
      double qlo = param_num(spec.params, "q_min", 25.0);
      double qhi = param_num(spec.params, "q_max", 75.0);
      if (!(qlo < qhi))
        throw ValidationError("RobustScaler requires q_min < q_max");
      for (std::size_t c = 0; c < x.cols; ++c) {
        auto col = column(x, c);
        std::sort(col.begin(), col.end());
        ft.center.push_back(quantile_sorted(col, 50.0));
        ft.scale.push_back(fallback_one(quantile_sorted(col, qhi) -
                                        quantile_sorted(col, qlo)));
      }
      break;
    }

    case PreKind::QuantileTransformer: {
      long nq = param_int(spec.params, "n_quantiles", 1000);
      if (std::size_t(nq) > x.rows) {
        std::cerr << "warning: n_quantiles " << nq << " clamped to " << x.rows
                  << " rows\n";
        nq = long(x.rows);
      }
      if (nq < 2) nq = 2;
      long sub = param_int(spec.params, "subsample", 100000);
      // Deterministic strided subsample keeps fit() seed-free.
      std::vector<std::size_t> rows_used;
      if (long(x.rows) > sub) {
        rows_used.reserve(std::size_t(sub));
        for (long i = 0; i < sub; ++i)
          rows_used.push_back(std::size_t((__int128)i * long(x.rows) / sub));
      } else {
        rows_used.resize(x.rows);
        for (std::size_t i = 0; i < x.rows; ++i) rows_used[i] = i;
      }
      ft.refs.resize(std::size_t(nq));
      for (long i = 0; i < nq; ++i)
        ft.refs[std::size_t(i)] = double(i) / double(nq - 1);
      for (std::size_t c = 0; c < x.cols; ++c) {
        std::vector<double> col;
        col.reserve(rows_used.size());
        for (std::size_t i : rows_used) col.push_back(x.at(i, c));
        std::sort(col.begin(), col.end());
        std::vector<double> qs(static_cast<std::size_t>(nq));
        for (long i = 0; i < nq; ++i)
          qs[std::size_t(i)] =
              quantile_sorted(col, ft.refs[std::size_t(i)] * 100.0);
        ft.quantiles.push_back(std::move(qs));
      }
      break;
    }

    case PreKind::PowerTransformer: {
      bool yj = param_str(spec.params, "method", "yeo-johnson") != "box-cox";
      for (std::size_t c = 0; c < x.cols; ++c) {
        auto col = column(x, c);
        if (!yj)
          for (double v : col)
            if (!(v > 0))
              throw ValidationError("box-cox requires positive values; column " +
                                    std::to_string(c));
        ft.lambdas.push_back(fit_lambda(col, yj));
      }
      if (param_bool(spec.params, "standardize", true)) {
        for (std::size_t c = 0; c < x.cols; ++c) {
          std::vector<double> y(x.rows);
          for (std::size_t i = 0; i < x.rows; ++i)
            y[i] = yj ? yeo_johnson(x.at(i, c), ft.lambdas[c])
                      : box_cox(x.at(i, c), ft.lambdas[c]);
          ft.center.push_back(mean_of(y));
          ft.scale.push_back(fallback_one(std::sqrt(pop_variance(y))));
        }
      }
      break;
    }

    case PreKind::Smote:
      break;  // unreachable
  }
  return ft;
}

Matrix transform(const FittedTransform& ft, const Matrix& x) {
  if (x.cols != ft.in_cols)
    throw ShapeError("transform: expected " + std::to_string(ft.in_cols) +
                     " columns, got " + std::to_string(x.cols));

  switch (ft.kind) {
    case PreKind::None:
      return x;

    case PreKind::Normalizer: {
      std::string norm = param_str(ft.params, "norm", "l2");
      Matrix out = x;
      for (std::size_t i = 0; i < x.rows; ++i) {
        double s = 0;
        for (std::size_t c = 0; c < x.cols; ++c) {
          double v = x.at(i, c);
          if (norm == "l1")
            s += std::fabs(v);
          else if (norm == "max")
            s = std::max(s, std::fabs(v));
          else
            s += v * v;
        }
        if (norm == "l2") s = std::sqrt(s);
        if (s == 0.0) continue;  // zero rows pass through
        for (std::size_t c = 0; c < x.cols; ++c) out.at(i, c) /= s;
      }
      return out;
    }

    case PreKind::StandardScaler: {
      bool wm = param_bool(ft.params, "with_mean", true);
      bool ws = param_bool(ft.params, "with_std", true);
      Matrix out = x;
      for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t c = 0; c < x.cols; ++c) {
          double v = x.at(i, c);
          if (wm) v -= ft.center[c];
          if (ws) v /= ft.scale[c];
          out.at(i, c) = v;
        }
      return out;
    }

    case PreKind::MinMaxScaler: {
      double pmin = param_num(ft.params, "min", 0.0);
      double pmax = param_num(ft.params, "max", 1.0);
      Matrix out = x;
      for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t c = 0; c < x.cols; ++c) {
          double t = (x.at(i, c) - ft.center[c]) / ft.scale[c];
          out.at(i, c) = t * (pmax - pmin) + pmin;
        }
      return out;
    }

    case PreKind::MaxAbsScaler: {
      Matrix out = x;
      for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t c = 0; c < x.cols; ++c) out.at(i, c) /= ft.scale[c];
      return out;
    }

    case PreKind::RobustScaler: {
      bool wc = param_bool(ft.params, "with_centering", true);
      bool ws = param_bool(ft.params, "with_scaling", true);
      Matrix out = x;
      for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t c = 0; c < x.cols; ++c) {
          double v = x.at(i, c);
          if (wc) v -= ft.center[c];
          if (ws) v /= ft.scale[c];
          out.at(i, c) = v;
        }
      return out;
    }

    case PreKind::QuantileTransformer: {
      bool normal =
          param_str(ft.params, "output_distribution", "uniform") == "normal";
      Matrix out(x.rows, x.cols);
      for (std::size_t c = 0; c < x.cols; ++c) {
        std::vector<double> qd, rd;
        dedupe_knots(ft.quantiles[c], ft.refs, qd, rd);
        for (std::size_t i = 0; i < x.rows; ++i) {
          double p = interp_quantile(qd, rd, x.at(i, c));
          out.at(i, c) =
              normal ? probit(std::clamp(p, 1e-7, 1.0 - 1e-7)) : p;
        }
      }
      return out;
    }

    case PreKind::PowerTransformer: {
      bool yj = param_str(ft.params, "method", "yeo-johnson") != "box-cox";
      bool std_ = param_bool(ft.params, "standardize", true);
      Matrix out(x.rows, x.cols);
      for (std::size_t c = 0; c < x.cols; ++c)
        for (std::size_t i = 0; i < x.rows; ++i) {
          double v = x.at(i, c);
          if (!yj && !(v > 0))
            throw ValidationError(
                "box-cox requires positive values; column " +
                std::to_string(c));
          double y = yj ? yeo_johnson(v, ft.lambdas[c]) : box_cox(v, ft.lambdas[c]);
          if (std_) y = (y - ft.center[c]) / ft.scale[c];
          out.at(i, c) = y;
        }
      return out;
    }

    case PreKind::Binarizer: {
      double thr = param_num(ft.params, "threshold", 0.0);
      Matrix out(x.rows, x.cols);
      for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t c = 0; c < x.cols; ++c)
          out.at(i, c) = x.at(i, c) > thr ? 1.0 : 0.0;
      return out;
    }

    case PreKind::PolynomialFeatures: {
      long degree = param_int(ft.params, "degree", 2);
      bool inter = param_bool(ft.params, "interaction_only", false);
      bool bias = param_bool(ft.params, "include_bias", true);
      std::vector<std::vector<std::size_t>> tuples;
      for_each_monomial(x.cols, degree, inter, bias,
                        [&](const std::vector<std::size_t>& t) {
                          tuples.push_back(t);
                        });
      Matrix out(x.rows, tuples.size());
      for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t m = 0; m < tuples.size(); ++m) {
          double v = 1.0;
          for (std::size_t idx : tuples[m]) v *= x.at(i, idx);
          out.at(i, m) = v;
        }
      return out;
    }

    case PreKind::Smote:
      throw ValidationError("SMOTE resamples datasets; use smote()");
  }
  throw ValidationError("unhandled transform kind");
}

Dataset smote(const Dataset& ds, long k, double m_percent, double r,
              std::uint64_t seed) {
  std::size_t n1 = ds.sbr_count(), n0 = ds.size() - n1;
  int minority_label = n1 <= n0 ? 1 : 0;
  std::vector<std::size_t> minority;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.records[i].label == minority_label) minority.push_back(i);

  if (minority.size() < 2)
    throw OversamplingError("smote needs at least 2 minority records");
  if (k < 1) throw ValidationError("smote k must be >= 1");
  std::size_t k_eff = std::size_t(k);
  if (k_eff > minority.size() - 1) {
    std::cerr << "warning: smote k clamped from " << k << " to "
              << minority.size() - 1 << "\n";
    k_eff = minority.size() - 1;
  }

  // k nearest minority neighbors per minority record (Minkowski-r; the
  // root is monotone and skipped; global index breaks distance ties).
  std::vector<std::vector<std::size_t>> nn(minority.size());
  for (std::size_t a = 0; a < minority.size(); ++a) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(minority.size() - 1);
    const auto& fa = ds.records[minority[a]].features;
    for (std::size_t b = 0; b < minority.size(); ++b) {
      if (b == a) continue;
      const auto& fb = ds.records[minority[b]].features;
      double s = 0;
      for (std::size_t c = 0; c < fa.size(); ++c)
        s += std::pow(std::fabs(fa[c] - fb[c]), r);
      dist.emplace_back(s, minority[b]);
    }
    std::partial_sort(dist.begin(), dist.begin() + long(k_eff), dist.end());
    nn[a].reserve(k_eff);
    for (std::size_t j = 0; j < k_eff; ++j) nn[a].push_back(dist[j].second);
  }

  Dataset out = ds;
  std::size_t n_new =
      std::size_t(std::floor(m_percent / 100.0 * double(minority.size())));
  Rng rng(derive_seed(seed, 0x5307E));
  for (std::size_t s = 0; s < n_new; ++s) {
    std::size_t a = rng.index(minority.size());
    std::size_t b = nn[a][rng.index(k_eff)];
    double u = rng.uniform();
    Record rec;
    rec.id = "smote_" + std::to_string(s);
    rec.label = minority_label;
    const auto& fa = ds.records[minority[a]].features;
    const auto& fb = ds.records[b].features;
    rec.features.resize(fa.size());
    for (std::size_t c = 0; c < fa.size(); ++c)
      rec.features[c] = fa[c] + u * (fb[c] - fa[c]);
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace sbr
