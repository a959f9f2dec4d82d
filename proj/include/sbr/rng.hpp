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
#include <random>
#include <vector>

// Deterministic sampling helpers. The engine is std::mt19937_64 (its output
// sequence is pinned by the standard); the *distributions* are written out
// here because libstdc++/libc++ distribution objects are implementation-
// defined and optimizer traces must replay bit-for-bit everywhere.

namespace sbr {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable seed for a named sub-stream of a master seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t k = 0) {
  return splitmix64(splitmix64(splitmix64(base) ^ stream) ^ k);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). Modulo mapping: the bias for our n (< 2^32
  // everywhere) is < 2^-32 and irrelevant next to determinism.
  std::size_t index(std::size_t n) { return std::size_t(eng_() % n); }

  // Inclusive integer range.
  long long uniform_int(long long lo, long long hi) {
    return lo + (long long)(index(std::size_t(hi - lo) + 1));
  }

  bool flip() { return index(2) == 1; }

  // Box-Muller; one fresh pair of uniforms per call.
  double normal() {
    constexpr double two_pi = 6.283185307179586476925287;
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace sbr
