// Copyright 2026 The ldpres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "ldpres/error.hpp"
#include "ldpres/mechanisms.hpp"
#include "ldpres/number_theory.hpp"

namespace ldpres {

// Privacy-utility thresholds use natural logarithms; every communication cost
// below is in bits (log2).

// E(k1, k2; v) = 1/2 ln((v - k1)(v - k2) / (k1 k2)), with E(0, 1; v) = +inf.
// Returns -inf when k2 == v.
inline double put_boundary(int k1, int k2, int v) {
  require(0 <= k1 && k1 < k2 && k2 <= v, "put_boundary: need 0 <= k1 < k2 <= v");
  if (k1 == 0) return std::numeric_limits<double>::infinity();
  const double num = static_cast<double>(v - k1) * static_cast<double>(v - k2);
  const double den = static_cast<double>(k1) * static_cast<double>(k2);
  return 0.5 * std::log(num / den);
}

// Uniformities k in [1, v-1] whose block design schemes attain the optimal
// privacy-utility trade-off: E(k, k+1; v) <= eps <= E(k-1, k; v).
inline std::vector<int> k_opt_set(int v, double epsilon) {
  require(v >= 2, "k_opt_set: v must be >= 2");
  require(epsilon > 0, "k_opt_set: epsilon must be > 0");
  std::vector<int> ks;
  for (int k = 1; k < v; ++k) {
    if (put_boundary(k, k + 1, v) <= epsilon && epsilon <= put_boundary(k - 1, k, v)) ks.push_back(k);
  }
  if (ks.empty() || ks.size() > 2) throw InternalError("optimal uniformity set must have 1 or 2 members");
  return ks;
}

// Member of K_opt minimizing v / gcd(v, k); ties go to the smaller k.
inline int k_star(int v, double epsilon) {
  int best = 0;
  for (int k : k_opt_set(v, epsilon)) {
    if (best == 0 || v / std::gcd(v, k) < v / std::gcd(v, best)) best = k;
  }
  return best;
}

struct PutBoundary {
  int v = 0;
  double epsilon = 0;
  std::vector<int> k_opt;
  int k_star = 0;
  double min_cost_bits = 0;
};

inline PutBoundary put_analysis(int v, double epsilon) {
  PutBoundary out{v, epsilon, k_opt_set(v, epsilon), 0, 0};
  out.k_star = k_star(v, epsilon);
  out.min_cost_bits = std::log2(static_cast<double>(v / std::gcd(v, out.k_star)));
  return out;
}

// Average bits per report: sum_u P_U(u) log2 |Y_u|.
inline double comm_cost(const DecomposedMechanism& dec) {
  double bits = 0;
  for (std::size_t u = 0; u < dec.shared_symbols(); ++u) {
    bits += dec.pu(u) * std::log2(static_cast<double>(dec.subchannels[u].size()));
  }
  return bits;
}

// Same quantity from the class sizes alone.
inline double comm_cost(const Resolution& res) {
  std::int64_t b = 0;
  for (const auto& c : res.classes) b += static_cast<std::int64_t>(c.size());
  require(b > 0, "comm_cost: empty resolution");
  double bits = 0;
  for (const auto& c : res.classes) {
    const double size = static_cast<double>(c.size());
    bits += size / static_cast<double>(b) * std::log2(size);
  }
  return bits;
}

// Entropy of P_U in bits.
inline double shared_randomness_entropy(const DecomposedMechanism& dec) {
  double h = 0;
  for (std::size_t u = 0; u < dec.shared_symbols(); ++u) h -= dec.pu(u) * std::log2(dec.pu(u));
  return h;
}

// Cost of a decomposition by an alpha-resolution: every class has v alpha / k
// blocks, so log2(v alpha / k) bits.
inline double alpha_resolution_cost(std::int64_t v, std::int64_t k, std::int64_t alpha) {
  require(v > 0 && k > 0 && alpha > 0, "alpha_resolution_cost: arguments must be positive");
  require((v * alpha) % k == 0, "alpha_resolution_cost: k must divide v * alpha");
  return std::log2(static_cast<double>(v * alpha / k));
}

// log2(v / gcd(v, k*)): the least cost of any PUT-optimal resolution.
inline double baranyai_min_cost(int v, double epsilon) {
  const int k = k_star(v, epsilon);
  return std::log2(static_cast<double>(v / std::gcd(v, k)));
}

// Number of weight-k binary vectors of length v fixed by the shift by v/d.
inline BigInt stabilizer_count(std::int64_t v, std::int64_t k, std::int64_t d) {
  require(d >= 1 && v % d == 0, "stabilizer_count: d must divide v");
  if (k % d != 0) return 0;
  return binomial(v / d, k / d);
}

// Cost of the cyclic shift resolution of the (v, k) complete design:
// log2 v - (1 / C(v,k)) sum_{p | gcd(v,k)} sum_{i=1..beta_p} C(v/p^i, k/p^i) log2 p.
inline double cyclic_cost_closed_form(std::int64_t v, std::int64_t k) {
  require(k > 0 && k < v, "cyclic_cost_closed_form: need 0 < k < v");
  const BigInt total = binomial(v, k);
  double correction = 0;
  for (const auto& f : prime_factorize(std::gcd(v, k))) {
    BigInt fixed = 0;
    std::int64_t pi = 1;
    for (int i = 1; i <= f.exponent; ++i) {
      pi *= f.prime;
      fixed += binomial(v / pi, k / pi);
    }
    correction += ratio_to_double(fixed, total) * std::log2(static_cast<double>(f.prime));
  }
  return std::log2(static_cast<double>(v)) - correction;
}

// Number of blocks of the (v, k) complete design by cyclic orbit size,
// obtained by Moebius inversion of the fixed-point counts.
inline std::map<std::int64_t, BigInt> cyclic_orbit_size_counts(std::int64_t v, std::int64_t k) {
  require(k > 0 && k < v, "cyclic_orbit_size_counts: need 0 < k < v");
  // fixed[d]: vectors invariant under the shift by d (d | v).
  auto fixed = [&](std::int64_t d) { return stabilizer_count(v, k, v / d); };
  std::map<std::int64_t, BigInt> counts;
  for (std::int64_t d : divisors(v)) {
    BigInt exact = 0;
    for (std::int64_t e : divisors(d)) exact += mobius(d / e) * fixed(e);
    if (exact != 0) counts[d] = exact;
  }
  return counts;
}

}  // namespace ldpres
