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
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ldpres/designs.hpp"
#include "ldpres/error.hpp"
#include "ldpres/incidence.hpp"
#include "ldpres/max_flow.hpp"

namespace ldpres {

// Partition of the block indices into resolution classes. Every point lies
// in exactly alphas[u] blocks of classes[u].
struct Resolution {
  std::vector<std::vector<int>> classes;
  std::vector<std::int64_t> alphas;

  std::size_t size() const { return classes.size(); }
  std::int64_t class_size(std::size_t u) const { return static_cast<std::int64_t>(classes[u].size()); }

  bool is_uniform() const {
    return std::adjacent_find(alphas.begin(), alphas.end(), std::not_equal_to<>()) == alphas.end();
  }

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct ResolutionFailure {
  std::string message;
  int class_index = -1;
  // Two points whose incidence counts inside the class differ.
  int point_a = -1, point_b = -1;
  std::int64_t count_a = 0, count_b = 0;
};

using ResolutionCheck = std::variant<Resolution, ResolutionFailure>;

namespace detail {

inline void require_partition(const std::vector<std::vector<int>>& partition, int b) {
  std::vector<char> seen(b, 0);
  std::int64_t total = 0;
  for (const auto& cls : partition) {
    require(!cls.empty(), "resolution classes must be nonempty");
    for (int j : cls) {
      require(j >= 0 && j < b, "block index " + std::to_string(j + 1) + " out of range");
      require(!seen[j], "block " + std::to_string(j + 1) + " appears in two classes");
      seen[j] = 1;
      ++total;
    }
  }
  require(total == b, "classes do not cover every block");
}

}  // namespace detail

// Checks that every class of the partition is a resolution class of s. Throws
// ArgumentError when s is not a block design or the classes do not partition
// the blocks; otherwise returns a report.
inline ResolutionCheck verify_resolution(const IncidenceStructure& s,
                                         const std::vector<std::vector<int>>& partition) {
  const DesignParams params = design_params_or_throw(s);
  detail::require_partition(partition, s.b());

  Resolution res;
  std::vector<std::int64_t> count(s.v());
  for (std::size_t u = 0; u < partition.size(); ++u) {
    std::fill(count.begin(), count.end(), 0);
    for (int j : partition[u]) {
      for (int x : s.block(j)) ++count[x];
    }
    for (int x = 1; x < s.v(); ++x) {
      if (count[x] != count[0]) {
        return ResolutionFailure{"class " + std::to_string(u + 1) + ": point 1 appears " +
                                     std::to_string(count[0]) + " times, point " +
                                     std::to_string(x + 1) + " appears " +
                                     std::to_string(count[x]) + " times",
                                 static_cast<int>(u), 0, x, count[0], count[x]};
      }
    }
    if (count[0] == 0) {
      return ResolutionFailure{"class " + std::to_string(u + 1) + " covers no point",
                               static_cast<int>(u), 0, 0, 0, 0};
    }
    res.classes.push_back(partition[u]);
    res.alphas.push_back(count[0]);
  }

  std::int64_t alpha_sum = 0;
  for (std::size_t u = 0; u < res.size(); ++u) {
    if (params.k * res.class_size(u) != params.v * res.alphas[u]) {
      throw InternalError("resolution class violates k|C| = v alpha(C)");
    }
    alpha_sum += res.alphas[u];
  }
  if (alpha_sum != params.r) throw InternalError("resolution alphas do not sum to r");
  return res;
}

inline Resolution verified_resolution_or_throw(const IncidenceStructure& s,
                                               const std::vector<std::vector<int>>& partition) {
  auto check = verify_resolution(s, partition);
  if (auto* failure = std::get_if<ResolutionFailure>(&check)) {
    throw InternalError("constructed partition is not a resolution: " + failure->message);
  }
  return std::get<Resolution>(std::move(check));
}

// The single class holding every block (alpha = r).
inline Resolution trivial_resolution(const IncidenceStructure& s) {
  std::vector<int> all(s.b());
  std::iota(all.begin(), all.end(), 0);
  return verified_resolution_or_throw(s, {all});
}

// Orbits of the cyclic shift x -> x + 1 (mod v) acting on the blocks of
// complete_design(v, k). Orbits are ordered by their lowest block index; each
// orbit starts there and follows successive shifts, so (4,2) yields
// {1,4,6,3} and {2,5}.
inline Resolution cyclic_shift_resolution(int v, int k, const Caps& caps = {}) {
  const auto design = complete_design(v, k, caps);
  std::vector<char> visited(design.b(), 0);
  std::vector<std::vector<int>> orbits;
  Block shifted(k);
  for (int j = 0; j < design.b(); ++j) {
    if (visited[j]) continue;
    std::vector<int> orbit;
    int current = j;
    do {
      visited[current] = 1;
      orbit.push_back(current);
      const auto& blk = design.block(current);
      for (int i = 0; i < k; ++i) shifted[i] = (blk[i] + 1) % v;
      std::sort(shifted.begin(), shifted.end());
      current = static_cast<int>(lex_rank(shifted, v));
    } while (current != j);
    orbits.push_back(std::move(orbit));
  }
  return verified_resolution_or_throw(design, orbits);
}

// Partition of the blocks of complete_design(v, k) into classes of the given
// sizes such that every point lies in floor(c_i k / v) or ceil(c_i k / v)
// blocks of class i.
//
// Points are introduced one at a time. Each class holds a multiset of partial
// blocks over the points seen so far; every subset S of [0, n) occurs
// C(v - n, k - |S|) times across all classes. Deciding which partial blocks
// absorb point n is an integral feasible-flow problem from partial-block
// types to classes.
inline std::vector<std::vector<int>> baranyai_partition(int v, int k,
                                                        const std::vector<std::int64_t>& sizes,
                                                        std::uint64_t seed = 0,
                                                        const Caps& caps = {}) {
  require(k > 0 && k < v, "baranyai: need 0 < k < v");
  require(!sizes.empty(), "baranyai: need at least one class");
  detail::check_block_cap(binomial(v, k), caps, "complete design");
  const std::int64_t b = detail::small_binomial(v, k);
  std::int64_t total = 0;
  for (auto c : sizes) {
    require(c > 0, "baranyai: class sizes must be positive");
    total += c;
  }
  require(total == b, "baranyai: class sizes sum to " + std::to_string(total) + ", need C(" +
                          std::to_string(v) + "," + std::to_string(k) + ") = " + std::to_string(b));

  const int t = static_cast<int>(sizes.size());
  std::vector<int> class_order(t);
  std::iota(class_order.begin(), class_order.end(), 0);
  if (seed != 0) {
    std::mt19937_64 gen(seed);
    std::shuffle(class_order.begin(), class_order.end(), gen);
  }

  auto floor_div = [](std::int64_t a, std::int64_t d) { return a / d; };
  auto ceil_div = [](std::int64_t a, std::int64_t d) { return (a + d - 1) / d; };

  std::vector<std::map<Block, std::int64_t>> parts(t);
  std::vector<std::int64_t> incidences(t, 0);
  for (int i = 0; i < t; ++i) parts[i][Block{}] = sizes[i];

  for (int n = 0; n < v; ++n) {
    std::map<Block, std::int64_t> type_index;
    std::vector<const Block*> types;
    for (int i : class_order) {
      for (const auto& [partial, mult] : parts[i]) {
        if (mult > 0 && static_cast<int>(partial.size()) < k && !type_index.count(partial)) {
          type_index.emplace(partial, 0);
        }
      }
    }
    for (auto& [partial, idx] : type_index) {
      idx = static_cast<std::int64_t>(types.size());
      types.push_back(&partial);
    }

    const int type_count = static_cast<int>(types.size());
    const int source = 0, sink = 1, first_type = 2, first_class = 2 + type_count;
    BoundedFlowNetwork net(first_class + t);

    std::vector<std::int64_t> multiplicity_total(type_count, 0);
    for (int i = 0; i < t; ++i) {
      for (const auto& [partial, mult] : parts[i]) {
        auto it = type_index.find(partial);
        if (it != type_index.end()) multiplicity_total[it->second] += mult;
      }
    }
    for (int s = 0; s < type_count; ++s) {
      const int size = static_cast<int>(types[s]->size());
      if (BigInt(multiplicity_total[s]) != binomial(v - n, k - size)) {
        throw InternalError("baranyai: partial-block multiplicity invariant broken");
      }
      const auto need = detail::small_binomial(v - n - 1, k - size - 1);
      net.add_edge(source, first_type + s, need, need);
    }

    struct Arc {
      int edge, cls, type;
    };
    std::vector<Arc> arcs;
    for (int i : class_order) {
      for (const auto& [partial, mult] : parts[i]) {
        auto it = type_index.find(partial);
        if (it == type_index.end() || mult == 0) continue;
        const int s = static_cast<int>(it->second);
        arcs.push_back({net.add_edge(first_type + s, first_class + i, 0, mult), i, s});
      }
    }
    // Class i still owes R_i = c_i k - incidences point-incidences to the
    // v - n unplaced points; its intake is R_i / (v - n) rounded either way.
    // The proportional fractional flow meets these bands exactly, and they
    // nest inside floor/ceil(c_i k / v) from one step to the next.
    for (int i : class_order) {
      const std::int64_t owed = sizes[i] * k - incidences[i];
      net.add_edge(first_class + i, sink, floor_div(owed, v - n), ceil_div(owed, v - n));
    }
    if (!net.solve(source, sink)) throw InternalError("baranyai: extension flow is infeasible");

    for (const auto& arc : arcs) {
      const std::int64_t f = net.flow(arc.edge);
      if (f == 0) continue;
      Block grown = *types[arc.type];
      grown.push_back(n);
      auto& cls = parts[arc.cls];
      cls[*types[arc.type]] -= f;
      cls[grown] += f;
      incidences[arc.cls] += f;
    }
    for (auto& cls : parts) std::erase_if(cls, [](const auto& kv) { return kv.second == 0; });
  }

  // Exact floor/ceiling postcheck: c_i k is compared against v * count.
  std::vector<std::vector<int>> classes(t);
  std::vector<std::int64_t> count(v);
  for (int i = 0; i < t; ++i) {
    std::fill(count.begin(), count.end(), 0);
    for (const auto& [blk, mult] : parts[i]) {
      if (static_cast<int>(blk.size()) != k || mult != 1) {
        throw InternalError("baranyai: leftover partial block or repeated block");
      }
      for (int x : blk) ++count[x];
      classes[i].push_back(static_cast<int>(lex_rank(blk, v)));
    }
    std::sort(classes[i].begin(), classes[i].end());
    const std::int64_t ck = sizes[i] * k;
    for (int x = 0; x < v; ++x) {
      if (count[x] * v > ck + v - 1 || count[x] * v < ck - (v - 1) ||
          static_cast<std::int64_t>(classes[i].size()) != sizes[i]) {
        throw InternalError("baranyai: class " + std::to_string(i + 1) +
                            " misses its floor/ceiling band");
      }
    }
  }
  return classes;
}

// Baranyai resolution with prescribed class sizes; every c_i k must be a
// multiple of v so that each class is a resolution class.
inline Resolution baranyai_resolution(int v, int k, const std::vector<std::int64_t>& sizes,
                                      std::uint64_t seed = 0, const Caps& caps = {}) {
  for (auto c : sizes) {
    require(c > 0 && (c * k) % v == 0,
            "baranyai_resolution: class size " + std::to_string(c) +
                " gives a fractional alpha; use baranyai_partition");
  }
  auto classes = baranyai_partition(v, k, sizes, seed, caps);
  return verified_resolution_or_throw(complete_design(v, k, caps), classes);
}

// Equal classes of size v / gcd(v, k): the minimum alpha k / gcd(v, k).
inline Resolution baranyai_resolution(int v, int k, std::uint64_t seed = 0, const Caps& caps = {}) {
  require(k > 0 && k < v, "baranyai: need 0 < k < v");
  detail::check_block_cap(binomial(v, k), caps, "complete design");
  const std::int64_t c = v / std::gcd(v, k);
  const std::int64_t b = detail::small_binomial(v, k);
  return baranyai_resolution(v, k, std::vector<std::int64_t>(b / c, c), seed, caps);
}

// The groups carried by a design (parallel classes of an affine geometry,
// rounds of a tournament) taken as a resolution.
inline Resolution parallel_class_resolution(const IncidenceStructure& grouped) {
  require(grouped.has_groups(), "parallel_class_resolution: design carries no group tags");
  auto check = verify_resolution(grouped, grouped.groups());
  if (auto* failure = std::get_if<ResolutionFailure>(&check)) {
    throw ArgumentError("design groups are not resolution classes: " + failure->message);
  }
  return std::get<Resolution>(std::move(check));
}

// 1-resolution {{j, j + 4t - 1}} of the Hadamard 3-design H_3(t).
inline Resolution h3_resolution(const IncidenceStructure& h3) {
  const int v = h3.v();
  require(v % 4 == 0 && h3.b() == 2 * v - 2,
          "h3_resolution: expected 4t points and 8t - 2 blocks");
  const int half = v - 1;
  std::vector<std::vector<int>> pairs;
  std::vector<char> mark(v);
  for (int j = 0; j < half; ++j) {
    std::fill(mark.begin(), mark.end(), 0);
    bool complementary = static_cast<int>(h3.block(j).size() + h3.block(j + half).size()) == v;
    for (int x : h3.block(j)) mark[x] = 1;
    for (int x : h3.block(j + half)) complementary = complementary && !mark[x];
    require(complementary, "h3_resolution: blocks " + std::to_string(j + 1) + " and " +
                               std::to_string(j + half + 1) + " are not complements");
    pairs.push_back({j, j + half});
  }
  return verified_resolution_or_throw(h3, pairs);
}

}  // namespace ldpres
