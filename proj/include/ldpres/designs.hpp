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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ldpres/error.hpp"
#include "ldpres/finite_field.hpp"
#include "ldpres/incidence.hpp"
#include "ldpres/number_theory.hpp"

namespace ldpres {

struct Caps {
  std::int64_t max_blocks = 10'000'000;
  std::int64_t max_points = 10'000;
};

// ---------------------------------------------------------------------------
// Complete designs

namespace detail {

inline std::int64_t small_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline void check_block_cap(const BigInt& blocks, const Caps& caps, const std::string& what) {
  if (blocks > caps.max_blocks) {
    throw ResourceError(what + " needs " + blocks.str() + " blocks, cap is " +
                        std::to_string(caps.max_blocks));
  }
}

}  // namespace detail

// Position of a sorted k-subset of [0, v) in lexicographic order.
inline std::int64_t lex_rank(const Block& subset, int v) {
  const int k = static_cast<int>(subset.size());
  std::int64_t rank = 0;
  int next = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = next; j < subset[i]; ++j) rank += detail::small_binomial(v - 1 - j, k - 1 - i);
    next = subset[i] + 1;
  }
  return rank;
}

// All k-subsets of [0, v) in lexicographic order; for (4,2) the columns are
// {1,2},{1,3},{1,4},{2,3},{2,4},{3,4}.
inline IncidenceStructure complete_design(int v, int k, const Caps& caps = {}) {
  require(v > 0, "complete_design: v must be positive");
  require(k > 0 && k < v, "complete_design: need 0 < k < v");
  detail::check_block_cap(binomial(v, k), caps, "complete design");

  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(detail::small_binomial(v, k)));
  Block current(k);
  std::iota(current.begin(), current.end(), 0);
  while (true) {
    blocks.push_back(current);
    int i = k - 1;
    while (i >= 0 && current[i] == v - k + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return IncidenceStructure(v, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Affine geometries

// Number of m-dimensional subspaces of GF(q)^d.
inline BigInt gaussian_binomial(int d, int m, std::int64_t q) {
  require(m >= 0 && d >= 0, "gaussian_binomial: negative argument");
  require(m <= d, "gaussian_binomial: need m <= d");
  require(q >= 2, "gaussian_binomial: q must be at least 2");
  BigInt num = 1, den = 1;
  for (int i = 0; i < m; ++i) {
    num *= boost::multiprecision::pow(BigInt(q), d - i) - 1;
    den *= boost::multiprecision::pow(BigInt(q), i + 1) - 1;
  }
  if (num % den != 0) throw InternalError("gaussian binomial division is not exact");
  return num / den;
}

// Blocks of AG_m(d, q): every coset of every m-dimensional subspace of
// GF(q)^d. Points are vectors indexed lexicographically (first coordinate most
// significant, coordinates by field element code). Subspaces are enumerated
// by reduced row echelon form; each one contributes its cosets as one group.
inline IncidenceStructure affine_geometry_design(int d, int m, std::int64_t q,
                                                 const Caps& caps = {}) {
  require(d > m && m >= 1, "affine_geometry_design: need d > m >= 1");
  const FiniteField field(q);
  const BigInt points_big = boost::multiprecision::pow(BigInt(q), d);
  if (points_big > caps.max_points) {
    throw ResourceError("AG needs " + points_big.str() + " points, cap is " +
                        std::to_string(caps.max_points));
  }
  detail::check_block_cap(
      boost::multiprecision::pow(BigInt(q), d - m) * gaussian_binomial(d, m, q), caps,
      "affine geometry");

  const int v = static_cast<int>(points_big);
  const auto qi = static_cast<int>(q);

  std::vector<std::vector<FiniteField::Element>> coords(v, std::vector<FiniteField::Element>(d));
  for (int x = 0; x < v; ++x) {
    int rest = x;
    for (int i = d - 1; i >= 0; --i) {
      coords[x][i] = static_cast<FiniteField::Element>(rest % qi);
      rest /= qi;
    }
  }
  auto encode = [&](const std::vector<FiniteField::Element>& c) {
    int idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * qi + static_cast<int>(c[i]);
    return idx;
  };

  std::vector<Block> blocks;
  BlockGroups groups;

  // Pivot columns in lexicographic order.
  std::vector<int> pivots(m);
  std::iota(pivots.begin(), pivots.end(), 0);
  while (true) {
    // Free cells: (row i, column c) with c > pivots[i], c not a pivot.
    std::vector<std::pair<int, int>> free_cells;
    for (int i = 0; i < m; ++i) {
      for (int c = pivots[i] + 1; c < d; ++c) {
        if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free_cells.push_back({i, c});
      }
    }
    const std::int64_t assignments = ipow(q, static_cast<int>(free_cells.size()));
    for (std::int64_t code = 0; code < assignments; ++code) {
      std::vector<std::vector<FiniteField::Element>> basis(m, std::vector<FiniteField::Element>(d, 0));
      for (int i = 0; i < m; ++i) basis[i][pivots[i]] = 1;
      std::int64_t rest = code;
      for (auto it = free_cells.rbegin(); it != free_cells.rend(); ++it) {
        basis[it->first][it->second] = static_cast<FiniteField::Element>(rest % q);
        rest /= q;
      }

      // Span of the basis.
      std::vector<int> subspace;
      const std::int64_t combos = ipow(q, m);
      subspace.reserve(static_cast<std::size_t>(combos));
      for (std::int64_t c = 0; c < combos; ++c) {
        std::vector<FiniteField::Element> vec(d, 0);
        std::int64_t digits = c;
        for (int i = m - 1; i >= 0; --i) {
          const auto coef = static_cast<FiniteField::Element>(digits % q);
          digits /= q;
          for (int j = 0; j < d; ++j) vec[j] = field.add(vec[j], field.mul(coef, basis[i][j]));
        }
        subspace.push_back(encode(vec));
      }

      std::vector<int> group;
      std::vector<char> covered(v, 0);
      for (int x = 0; x < v; ++x) {
        if (covered[x]) continue;
        Block coset;
        coset.reserve(subspace.size());
        for (int s : subspace) {
          std::vector<FiniteField::Element> vec(d);
          for (int j = 0; j < d; ++j) vec[j] = field.add(coords[x][j], coords[s][j]);
          const int y = encode(vec);
          covered[y] = 1;
          coset.push_back(y);
        }
        std::sort(coset.begin(), coset.end());
        group.push_back(static_cast<int>(blocks.size()));
        blocks.push_back(std::move(coset));
      }
      groups.push_back(std::move(group));
    }

    int i = m - 1;
    while (i >= 0 && pivots[i] == d - m + i) --i;
    if (i < 0) break;
    ++pivots[i];
    for (int j = i + 1; j < m; ++j) pivots[j] = pivots[j - 1] + 1;
  }
  return IncidenceStructure(v, std::move(blocks), std::move(groups));
}

// ---------------------------------------------------------------------------
// Hadamard matrices and 3-designs

struct HadamardMatrix {
  int order = 0;
  std::vector<std::vector<int>> entries;
  bool normalized = false;

  // H H^T == order * I, in integer arithmetic.
  bool is_orthogonal() const {
    for (int i = 0; i < order; ++i) {
      for (int j = 0; j < order; ++j) {
        long dot = 0;
        for (int c = 0; c < order; ++c) dot += entries[i][c] * entries[j][c];
        if (dot != (i == j ? order : 0)) return false;
      }
    }
    return true;
  }

  bool is_normalized() const {
    for (int i = 0; i < order; ++i) {
      if (entries[0][i] != 1 || entries[i][0] != 1) return false;
    }
    return true;
  }
};

namespace detail {

using SignMatrix = std::vector<std::vector<int>>;

inline SignMatrix sylvester_double(const SignMatrix& h) {
  const std::size_t n = h.size();
  SignMatrix out(2 * n, std::vector<int>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i][j] = h[i][j];
      out[i][j + n] = h[i][j];
      out[i + n][j] = h[i][j];
      out[i + n][j + n] = -h[i][j];
    }
  }
  return out;
}

// Paley type I from GF(q), q = order - 1 = 3 mod 4.
inline SignMatrix paley_one(std::int64_t q) {
  const FiniteField field(q);
  const int n = static_cast<int>(q) + 1;
  SignMatrix h(n, std::vector<int>(n));
  for (int j = 0; j < n; ++j) h[0][j] = 1;
  for (int i = 1; i < n; ++i) {
    h[i][0] = -1;
    for (int j = 1; j < n; ++j) {
      const auto a = static_cast<FiniteField::Element>(i - 1);
      const auto b = static_cast<FiniteField::Element>(j - 1);
      h[i][j] = (i == j) ? 1 : field.chi(field.sub(a, b));
    }
  }
  return h;
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline SignMatrix hadamard_unnormalized(int order) {
  if (order == 1) return {{1}};
  if (order == 2) return {{1, 1}, {1, -1}};
  if (order % 4 != 0) {
    throw UnsupportedOrderError("Hadamard order " + std::to_string(order) +
                                " is not 1, 2, or a multiple of 4");
  }
  if (is_power_of_two(order)) return sylvester_double(hadamard_unnormalized(order / 2));
  const auto pp = prime_power_decomposition(order - 1);
  if (pp && (order - 1) % 4 == 3) return paley_one(order - 1);
  const int half = order / 2;
  if (half == 2 || half % 4 == 0) {
    try {
      return sylvester_double(hadamard_unnormalized(half));
    } catch (const UnsupportedOrderError&) {
    }
  }
  throw UnsupportedOrderError("Hadamard order " + std::to_string(order) +
                              " is not reachable by Sylvester, Paley I, or doubling");
}

}  // namespace detail

// Normalized Hadamard matrix from Sylvester doubling, Paley I over GF(q) for
// q = order - 1, and doubling of constructible orders.
inline HadamardMatrix hadamard_matrix(int order) {
  if (order < 1) throw UnsupportedOrderError("Hadamard order must be positive");
  auto h = detail::hadamard_unnormalized(order);
  for (int i = 0; i < order; ++i) {
    if (h[i][0] < 0) {
      for (int& e : h[i]) e = -e;
    }
  }
  for (int j = 0; j < order; ++j) {
    if (h[0][j] < 0) {
      for (int i = 0; i < order; ++i) h[i][j] = -h[i][j];
    }
  }
  HadamardMatrix out{order, std::move(h), true};
  if (!out.is_orthogonal()) throw InternalError("constructed Hadamard matrix is not orthogonal");
  return out;
}

// H_3(t): incidence matrix [[H1 H2], [1 0]] with H1 = (J + A)/2 and
// H2 = (J - A)/2, A the core of a normalized Hadamard matrix of order 4t.
// Blocks j and j + 4t - 1 are complements.
inline IncidenceStructure hadamard3_design(int t) {
  require(t >= 1, "hadamard3_design: t must be positive");
  const auto h = hadamard_matrix(4 * t);
  const int core = 4 * t - 1;
  const int last_point = 4 * t - 1;
  std::vector<Block> blocks(2 * core);
  for (int j = 0; j < core; ++j) {
    for (int i = 0; i < core; ++i) {
      if (h.entries[i + 1][j + 1] > 0) {
        blocks[j].push_back(i);
      } else {
        blocks[j + core].push_back(i);
      }
    }
    blocks[j].push_back(last_point);
  }
  return IncidenceStructure(4 * t, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Round robin tournaments

// lambda copies of the circle-method 1-factorization of K_v; each round of
// v/2 disjoint pairs is one group.
inline IncidenceStructure round_robin_design(int v, int lambda) {
  require(v >= 4, "round_robin_design: v must be at least 4");
  require(v % 2 == 0, "round_robin_design: v must be even");
  require(lambda >= 1, "round_robin_design: lambda must be positive");
  const int n = v - 1;
  std::vector<Block> blocks;
  BlockGroups rounds;
  for (int copy = 0; copy < lambda; ++copy) {
    for (int round = 0; round < n; ++round) {
      std::vector<int> group;
      auto add_pair = [&](int a, int b) {
        group.push_back(static_cast<int>(blocks.size()));
        blocks.push_back(a < b ? Block{a, b} : Block{b, a});
      };
      add_pair(round, n);
      for (int i = 1; i <= n / 2; ++i) add_pair((round + i) % n, (round - i + n) % n);
      rounds.push_back(std::move(group));
    }
  }
  return IncidenceStructure(v, std::move(blocks), std::move(rounds));
}

}  // namespace ldpres
