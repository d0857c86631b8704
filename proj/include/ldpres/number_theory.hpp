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
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ldpres/error.hpp"

namespace ldpres {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exact binomial coefficient; zero when k < 0 or k > n.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

// num/den rounded to the nearest double, for arbitrarily large operands.
inline double ratio_to_double(const BigInt& num, const BigInt& den) {
  return BigRational(num, den).convert_to<double>();
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

struct PrimeFactor {
  std::int64_t prime;
  int exponent;

  friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

// Trial division; inputs are desk-scale.
inline std::vector<PrimeFactor> prime_factorize(std::int64_t n) {
  require(n >= 1, "prime_factorize: n must be >= 1");
  std::vector<PrimeFactor> factors;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    factors.push_back({p, e});
  }
  if (n > 1) factors.push_back({n, 1});
  return factors;
}

// (p, e) with q = p^e; nullopt when q is not a prime power.
inline std::optional<PrimeFactor> prime_power_decomposition(std::int64_t q) {
  if (q < 2) return std::nullopt;
  const auto factors = prime_factorize(q);
  if (factors.size() != 1) return std::nullopt;
  return factors.front();
}

inline int mobius(std::int64_t n) {
  int mu = 1;
  for (const auto& f : prime_factorize(n)) {
    if (f.exponent > 1) return 0;
    mu = -mu;
  }
  return mu;
}

// von Mangoldt function in bits: log2(p) when n = p^i, else 0.
inline double mangoldt(std::int64_t n) {
  require(n >= 1, "mangoldt: n must be >= 1");
  const auto pp = prime_power_decomposition(n);
  return pp ? std::log2(static_cast<double>(pp->prime)) : 0.0;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
  require(n >= 1, "divisors: n must be >= 1");
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

}  // namespace ldpres
