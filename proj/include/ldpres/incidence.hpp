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
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ldpres/error.hpp"

namespace ldpres {

// A block is a sorted list of distinct 0-based point indices.
using Block = std::vector<int>;
// Ordered groups of 0-based block indices (parallel classes, rounds, ...).
using BlockGroups = std::vector<std::vector<int>>;

// Finite incidence structure (X, Z, I) with X = [0, v) and Z an ordered list
// of blocks. Immutable; copies share storage.
class IncidenceStructure {
 public:
  IncidenceStructure(int v, std::vector<Block> blocks, BlockGroups groups = {})
      : data_(std::make_shared<Data>()) {
    require(v > 0, "incidence structure needs at least one point");
    for (auto& blk : blocks) {
      std::sort(blk.begin(), blk.end());
      require(!blk.empty(), "blocks must be nonempty");
      require(blk.front() >= 0 && blk.back() < v, "block point out of range");
      require(std::adjacent_find(blk.begin(), blk.end()) == blk.end(),
              "block lists a point twice");
    }
    const int b = static_cast<int>(blocks.size());
    if (!groups.empty()) {
      std::vector<char> seen(b, 0);
      for (const auto& g : groups) {
        require(!g.empty(), "block groups must be nonempty");
        for (int j : g) {
          require(j >= 0 && j < b, "group references a missing block");
          require(!seen[j], "block appears in two groups");
          seen[j] = 1;
        }
      }
      require(std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; }),
              "groups must cover every block");
    }
    data_->v = v;
    data_->blocks = std::move(blocks);
    data_->groups = std::move(groups);
    data_->point_blocks.assign(v, {});
    for (int j = 0; j < b; ++j) {
      for (int x : data_->blocks[j]) data_->point_blocks[x].push_back(j);
    }
    if (static_cast<std::int64_t>(v) * b <= kDenseLimit) {
      data_->dense.assign(static_cast<std::size_t>(v) * b, false);
      for (int j = 0; j < b; ++j) {
        for (int x : data_->blocks[j]) data_->dense[static_cast<std::size_t>(x) * b + j] = true;
      }
    }
  }

  int v() const { return data_->v; }
  int b() const { return static_cast<int>(data_->blocks.size()); }
  const std::vector<Block>& blocks() const { return data_->blocks; }
  const Block& block(int j) const { return data_->blocks.at(j); }
  const BlockGroups& groups() const { return data_->groups; }
  bool has_groups() const { return !data_->groups.empty(); }

  // I_x: indices of the blocks containing point x, ascending.
  const std::vector<int>& blocks_through(int x) const { return data_->point_blocks.at(x); }

  bool contains(int x, int j) const {
    if (!data_->dense.empty()) return data_->dense[static_cast<std::size_t>(x) * b() + j];
    const auto& blk = data_->blocks[j];
    return std::binary_search(blk.begin(), blk.end(), x);
  }

  // v x b 0/1 incidence matrix.
  std::vector<std::vector<int>> matrix() const {
    std::vector<std::vector<int>> m(v(), std::vector<int>(b(), 0));
    for (int j = 0; j < b(); ++j) {
      for (int x : block(j)) m[x][j] = 1;
    }
    return m;
  }

  static IncidenceStructure from_matrix(const std::vector<std::vector<int>>& m) {
    require(!m.empty(), "empty incidence matrix");
    const std::size_t b = m.front().size();
    std::vector<Block> blocks(b);
    for (std::size_t x = 0; x < m.size(); ++x) {
      require(m[x].size() == b, "ragged incidence matrix");
      for (std::size_t j = 0; j < b; ++j) {
        if (m[x][j] != 0) blocks[j].push_back(static_cast<int>(x));
      }
    }
    return IncidenceStructure(static_cast<int>(m.size()), std::move(blocks));
  }

  IncidenceStructure with_groups(BlockGroups groups) const {
    return IncidenceStructure(v(), blocks(), std::move(groups));
  }

  friend bool operator==(const IncidenceStructure& a, const IncidenceStructure& b) {
    return a.v() == b.v() && a.blocks() == b.blocks() && a.groups() == b.groups();
  }

 private:
  static constexpr std::int64_t kDenseLimit = std::int64_t{1} << 26;

  struct Data {
    int v = 0;
    std::vector<Block> blocks;
    BlockGroups groups;
    std::vector<std::vector<int>> point_blocks;
    std::vector<bool> dense;
  };
  std::shared_ptr<Data> data_;
};

struct DesignParams {
  std::int64_t v = 0, b = 0, r = 0, k = 0, lambda = 0;

  // vr = bk and lambda(v-1) = r(k-1).
  bool satisfies_counting_identities() const {
    return v * r == b * k && lambda * (v - 1) == r * (k - 1);
  }

  friend bool operator==(const DesignParams&, const DesignParams&) = default;
};

enum class DesignProperty { kRegularity, kUniformity, kPairwiseBalance, kParameterRange };

inline const char* to_string(DesignProperty p) {
  switch (p) {
    case DesignProperty::kRegularity: return "regularity";
    case DesignProperty::kUniformity: return "uniformity";
    case DesignProperty::kPairwiseBalance: return "pairwise-balance";
    case DesignProperty::kParameterRange: return "parameter-range";
  }
  return "unknown";
}

struct DesignFailure {
  DesignProperty property;
  std::string message;
  // Offending point, block, or point pair (0-based).
  std::vector<int> witness;
};

using DesignCheck = std::variant<DesignParams, DesignFailure>;

// Exhaustive check that s is r-regular, k-uniform and lambda-pairwise
// balanced with v > k > 0 and b > r > lambda >= 0.
inline DesignCheck verify_block_design(const IncidenceStructure& s) {
  const int v = s.v(), b = s.b();
  if (b == 0) return DesignFailure{DesignProperty::kParameterRange, "no blocks", {}};

  const auto r = static_cast<std::int64_t>(s.blocks_through(0).size());
  for (int x = 1; x < v; ++x) {
    if (static_cast<std::int64_t>(s.blocks_through(x).size()) != r) {
      return DesignFailure{DesignProperty::kRegularity,
                           "point " + std::to_string(x + 1) + " lies in " +
                               std::to_string(s.blocks_through(x).size()) + " blocks, point 1 in " +
                               std::to_string(r),
                           {x}};
    }
  }

  const auto k = static_cast<std::int64_t>(s.block(0).size());
  for (int j = 1; j < b; ++j) {
    if (static_cast<std::int64_t>(s.block(j).size()) != k) {
      return DesignFailure{DesignProperty::kUniformity,
                           "block " + std::to_string(j + 1) + " has " +
                               std::to_string(s.block(j).size()) + " points, block 1 has " +
                               std::to_string(k),
                           {j}};
    }
  }

  std::int64_t lambda = -1;
  std::vector<std::int64_t> common(v, 0);
  for (int x = 0; x + 1 < v; ++x) {
    std::fill(common.begin() + x + 1, common.end(), 0);
    for (int j : s.blocks_through(x)) {
      for (int y : s.block(j)) {
        if (y > x) ++common[y];
      }
    }
    for (int y = x + 1; y < v; ++y) {
      if (lambda < 0) lambda = common[y];
      if (common[y] != lambda) {
        return DesignFailure{DesignProperty::kPairwiseBalance,
                             "points " + std::to_string(x + 1) + "," + std::to_string(y + 1) +
                                 " share " + std::to_string(common[y]) + " blocks, expected " +
                                 std::to_string(lambda),
                             {x, y}};
      }
    }
  }
  if (lambda < 0) lambda = 0;  // v == 1

  DesignParams params{v, b, r, k, lambda};
  if (!(v > k && k > 0 && b > r && r > lambda && lambda >= 0)) {
    return DesignFailure{DesignProperty::kParameterRange,
                         "parameters violate v > k > 0, b > r > lambda >= 0", {}};
  }
  if (!params.satisfies_counting_identities()) {
    throw InternalError("exhaustively verified design violates vr = bk");
  }
  return params;
}

inline bool is_block_design(const IncidenceStructure& s) {
  return std::holds_alternative<DesignParams>(verify_block_design(s));
}

// Parameters of a structure that must already be a design.
inline DesignParams design_params_or_throw(const IncidenceStructure& s) {
  auto check = verify_block_design(s);
  if (auto* failure = std::get_if<DesignFailure>(&check)) {
    throw ArgumentError(std::string("not a block design: ") + failure->message);
  }
  return std::get<DesignParams>(check);
}

}  // namespace ldpres
