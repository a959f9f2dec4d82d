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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "sbr/error.hpp"
#include "sbr/rng.hpp"
#include "sbr/stats.hpp"

using namespace sbr;

namespace {

// O(n^2) reference implementation; wins and half-ties are exact in binary.
double a12_brute(const std::vector<double>& m, const std::vector<double>& n) {
  double wins = 0;
  for (double x : m)
    for (double y : n) {
      if (x > y) wins += 1.0;
      else if (x == y) wins += 0.5;
    }
  return wins / (double(m.size()) * double(n.size()));
}

// 11 values centred on `mid`, spread +-0.02; offsets cancel pairwise so the
// mean is exactly mid.
std::vector<double> cluster(double mid) {
  std::vector<double> v;
  for (int i = -5; i <= 5; ++i) v.push_back(mid + 0.004 * i);
  return v;
}

}  // namespace

TEST_CASE("a12 hand-worked values") {
  CHECK(a12({3, 4}, {1, 2}) == 1.0);
  CHECK(a12({1, 2}, {3, 4}) == 0.0);
  CHECK(a12({1, 2}, {1, 2}) == 0.5);
  // pairs: (1,2) (1,3) lose, (2,2) (2,2) half, (2,3) (2,3) lose
  CHECK(a12({1, 2, 2}, {2, 3}) == 1.0 / 6.0);
  CHECK(a12({7}, {7}) == 0.5);
}

TEST_CASE("a12 equals the brute-force count on tie-heavy samples") {
  Rng rng(123);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t sm = 1 + rng.index(12), sn = 1 + rng.index(12);
    std::vector<double> m(sm), n(sn);
    // half-integer grid forces plenty of exact ties
    for (double& v : m) v = double(rng.index(8)) / 2.0;
    for (double& v : n) v = double(rng.index(8)) / 2.0;
    double fast = a12(m, n);
    CHECK(fast == a12_brute(m, n));
    // complement: every pair contributes exactly 1 across both directions
    CHECK(a12(n, m) == doctest::Approx(1.0 - fast).epsilon(1e-12));
  }
}

TEST_CASE("a12 rejects empty samples") {
  CHECK_THROWS_AS(a12({}, {1.0}), ValidationError);
  CHECK_THROWS_AS(a12({1.0}, {}), ValidationError);
}

TEST_CASE("bootstrap_significant separates the obvious cases") {
  std::vector<double> lo, hi;
  for (int i = 0; i < 10; ++i) {
    lo.push_back(0.0 + 0.01 * i);
    hi.push_back(10.0 + 0.01 * i);
  }
  CHECK(bootstrap_significant(hi, lo));
  CHECK(bootstrap_significant(lo, hi));  // two-sided
  CHECK_FALSE(bootstrap_significant(lo, lo));
  std::vector<double> flat(8, 3.25);
  CHECK_FALSE(bootstrap_significant(flat, flat));
}

TEST_CASE("bootstrap significance is monotone in the confidence level") {
  // Marginal fixture: overlapping ranges, observed shift about one sigma.
  std::vector<double> m = {0, 1, 2, 3, 4};
  std::vector<double> n = {1, 2, 3, 4, 5};
  std::vector<int> sig;
  for (double conf : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999})
    sig.push_back(bootstrap_significant(m, n, 2000, conf, 7) ? 1 : 0);
  for (std::size_t i = 1; i < sig.size(); ++i) CHECK(sig[i] <= sig[i - 1]);
  CHECK(sig.front() == 1);  // loose confidence accepts a one-sigma shift
  CHECK(sig.back() == 0);   // 99.9% does not
}

TEST_CASE("bootstrap_significant argument guards") {
  std::vector<double> v = {1, 2};
  CHECK_THROWS_AS(bootstrap_significant({}, v), ValidationError);
  CHECK_THROWS_AS(bootstrap_significant(v, {}), ValidationError);
  CHECK_THROWS_AS(bootstrap_significant(v, v, 0), ValidationError);
  CHECK_THROWS_AS(bootstrap_significant(v, v, 100, 0.0), ValidationError);
  CHECK_THROWS_AS(bootstrap_significant(v, v, 100, 1.0), ValidationError);
}

TEST_CASE("scott_knott keeps indistinguishable groups in one rank") {
  std::vector<TreatmentSamples> gs = {
      {"a", cluster(0.5)}, {"b", cluster(0.5)}, {"c", cluster(0.5)}};
  auto r = scott_knott(gs);
  CHECK(r.rank_of.at("a") == 1);
  CHECK(r.rank_of.at("b") == 1);
  CHECK(r.rank_of.at("c") == 1);
}

TEST_CASE("scott_knott splits clearly separated groups") {
  // means 3 > 1 > 0: the first cut isolates the winner, the recursion then
  // separates the remaining two.
  std::vector<TreatmentSamples> gs = {
      {"mid", cluster(1.0)}, {"top", cluster(3.0)}, {"bot", cluster(0.0)}};
  auto r = scott_knott(gs);
  CHECK(r.rank_of.at("top") == 1);
  CHECK(r.rank_of.at("mid") == 2);
  CHECK(r.rank_of.at("bot") == 3);
}

TEST_CASE("scott_knott two-cluster fixture gets exactly two ranks") {
  std::vector<TreatmentSamples> gs = {{"a", cluster(5.0)},
                                      {"b", cluster(5.0)},
                                      {"c", cluster(1.0)},
                                      {"d", cluster(1.0)}};
  auto r = scott_knott(gs);
  CHECK(r.rank_of.at("a") == 1);
  CHECK(r.rank_of.at("b") == 1);
  CHECK(r.rank_of.at("c") == 2);
  CHECK(r.rank_of.at("d") == 2);
}

TEST_CASE("scott_knott is invariant under input permutations") {
  std::vector<TreatmentSamples> gs = {
      {"mid", cluster(1.0)}, {"top", cluster(3.0)}, {"bot", cluster(0.0)}};
  std::sort(gs.begin(), gs.end(),
            [](const TreatmentSamples& x, const TreatmentSamples& y) {
              return x.name < y.name;
            });
  auto want = scott_knott(gs, 3).rank_of;
  int perms = 0;
  do {
    CHECK(scott_knott(gs, 3).rank_of == want);
    ++perms;
  } while (std::next_permutation(
      gs.begin(), gs.end(),
      [](const TreatmentSamples& x, const TreatmentSamples& y) {
        return x.name < y.name;
      }));
  CHECK(perms == 6);
}

TEST_CASE("scott_knott refuses to split on a small effect") {
  // One outlier lifts the mean, but a12 = 0.55 < 0.6: stay in one rank even
  // though the mean shift itself can look significant.
  TreatmentSamples m{"m", std::vector<double>(9, 0.0)};
  m.values.push_back(10.0);
  TreatmentSamples n{"n", std::vector<double>(10, 0.0)};
  CHECK(a12(m.values, n.values) == doctest::Approx(0.55));
  auto r = scott_knott({m, n});
  CHECK(r.rank_of.at("m") == 1);
  CHECK(r.rank_of.at("n") == 1);
}

TEST_CASE("scott_knott argument guards") {
  CHECK_THROWS_AS(scott_knott({}), ValidationError);
  std::vector<TreatmentSamples> gs = {{"a", {1.0}}, {"empty", {}}};
  CHECK_THROWS_AS(scott_knott(gs), ValidationError);
}
