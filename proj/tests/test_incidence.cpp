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

#include <gtest/gtest.h>

#include <variant>
#include <vector>

#include "ldpres/error.hpp"
#include "ldpres/incidence.hpp"

namespace ldpres {
namespace {

// Incidence matrix of the (4,2) complete design, columns {1,2},{1,3},{1,4},{2,3},{2,4},{3,4}.
const std::vector<std::vector<int>> kFourTwo = {
    {1, 1, 1, 0, 0, 0},
    {1, 0, 0, 1, 1, 0},
    {0, 1, 0, 1, 0, 1},
    {0, 0, 1, 0, 1, 1},
};

TEST(Incidence, MatrixRoundTrip) {
  const auto s = IncidenceStructure::from_matrix(kFourTwo);
  EXPECT_EQ(s.v(), 4);
  EXPECT_EQ(s.b(), 6);
  EXPECT_EQ(s.matrix(), kFourTwo);
  EXPECT_EQ(s.block(3), (Block{1, 2}));
  EXPECT_EQ(s.blocks_through(0), (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(s.contains(3, 5));
  EXPECT_FALSE(s.contains(0, 5));
}

TEST(Incidence, FourTwoParameters) {
  const auto check = verify_block_design(IncidenceStructure::from_matrix(kFourTwo));
  ASSERT_TRUE(std::holds_alternative<DesignParams>(check));
  EXPECT_EQ(std::get<DesignParams>(check), (DesignParams{4, 6, 3, 2, 1}));
  EXPECT_TRUE(std::get<DesignParams>(check).satisfies_counting_identities());
}

TEST(Incidence, FlippedBitBreaksRegularity) {
  auto m = kFourTwo;
  m[1][0] = 0;  // point 2 leaves block 1
  const auto check = verify_block_design(IncidenceStructure::from_matrix(m));
  ASSERT_TRUE(std::holds_alternative<DesignFailure>(check));
  const auto& failure = std::get<DesignFailure>(check);
  EXPECT_EQ(failure.property, DesignProperty::kRegularity);
  EXPECT_EQ(failure.witness, (std::vector<int>{1}));
}

TEST(Incidence, UniformityWitness) {
  // Regular but not uniform: blocks {1,2,3} and {1},{2},{3} ... each point twice.
  const IncidenceStructure s(3, {{0, 1, 2}, {0}, {1}, {2}});
  const auto check = verify_block_design(s);
  ASSERT_TRUE(std::holds_alternative<DesignFailure>(check));
  EXPECT_EQ(std::get<DesignFailure>(check).property, DesignProperty::kUniformity);
  EXPECT_EQ(std::get<DesignFailure>(check).witness, (std::vector<int>{1}));
}

TEST(Incidence, PairwiseBalanceWitness) {
  // Two disjoint copies of the pairs on {1,2} and {3,4}: regular, uniform, not balanced.
  const IncidenceStructure s(4, {{0, 1}, {2, 3}});
  const auto check = verify_block_design(s);
  ASSERT_TRUE(std::holds_alternative<DesignFailure>(check));
  EXPECT_EQ(std::get<DesignFailure>(check).property, DesignProperty::kPairwiseBalance);
  EXPECT_EQ(std::get<DesignFailure>(check).witness, (std::vector<int>{0, 2}));
}

TEST(Incidence, ParameterRange) {
  // A single block containing every point: k = v.
  const auto check = verify_block_design(IncidenceStructure(3, {{0, 1, 2}}));
  ASSERT_TRUE(std::holds_alternative<DesignFailure>(check));
  EXPECT_EQ(std::get<DesignFailure>(check).property, DesignProperty::kParameterRange);
  EXPECT_FALSE(is_block_design(IncidenceStructure(3, {{0, 1, 2}})));
  EXPECT_THROW(design_params_or_throw(IncidenceStructure(3, {{0, 1, 2}})), ArgumentError);
}

TEST(Incidence, RejectsMalformedInput) {
  EXPECT_THROW(IncidenceStructure(0, {}), ArgumentError);
  EXPECT_THROW(IncidenceStructure(3, {{}}), ArgumentError);
  EXPECT_THROW(IncidenceStructure(3, {{0, 3}}), ArgumentError);
  EXPECT_THROW(IncidenceStructure(3, {{1, 1}}), ArgumentError);
  EXPECT_THROW(IncidenceStructure(3, {{0}, {1}, {2}}, {{0, 1}}), ArgumentError);
  EXPECT_THROW(IncidenceStructure(3, {{0}, {1}, {2}}, {{0, 1}, {1, 2}}), ArgumentError);
  EXPECT_THROW(IncidenceStructure(3, {{0}, {1}, {2}}, {{0, 1, 2, 3}}), ArgumentError);
}

TEST(Incidence, GroupsAndEquality) {
  const auto s = IncidenceStructure::from_matrix(kFourTwo);
  const auto grouped = s.with_groups({{0, 5}, {1, 4}, {2, 3}});
  EXPECT_TRUE(grouped.has_groups());
  EXPECT_FALSE(s.has_groups());
  EXPECT_FALSE(s == grouped);
  EXPECT_TRUE(s == IncidenceStructure::from_matrix(kFourTwo));
}

TEST(Incidence, BlocksAreSorted) {
  const IncidenceStructure s(4, {{3, 1}, {2, 0}});
  EXPECT_EQ(s.block(0), (Block{1, 3}));
  EXPECT_EQ(s.block(1), (Block{0, 2}));
}

}  // namespace
}  // namespace ldpres
