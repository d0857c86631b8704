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

#include <cmath>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <vector>

#include "ldpres/designs.hpp"
#include "ldpres/error.hpp"
#include "ldpres/mechanisms.hpp"
#include "ldpres/resolutions.hpp"
#include "ldpres/rng.hpp"

namespace ldpres {
namespace {

const double kLn2 = std::log(2.0);

// Row-stochastic 4x6 channel of the (4,2) subset-selection mechanism, written out by hand.
std::vector<std::vector<double>> four_two_channel(double eps) {
  const double e = std::exp(eps), d = 3 * (e + 1);
  const std::vector<std::vector<int>> hot = {
      {1, 1, 1, 0, 0, 0}, {1, 0, 0, 1, 1, 0}, {0, 1, 0, 1, 0, 1}, {0, 0, 1, 0, 1, 1}};
  std::vector<std::vector<double>> q(4, std::vector<double>(6));
  for (int x = 0; x < 4; ++x) {
    for (int z = 0; z < 6; ++z) q[x][z] = (hot[x][z] ? e : 1.0) / d;
  }
  return q;
}

Resolution pairing() { return verified_resolution_or_throw(complete_design(4, 2), {{0, 5}, {1, 4}, {2, 3}}); }

TEST(BuildMechanism, FourTwoChannel) {
  for (double eps : {0.1, kLn2, 1.0, 3.0}) {
    const auto mech = build_mechanism(complete_design(4, 2), eps);
    const auto q = mech.channel();
    const auto expected = four_two_channel(eps);
    for (int x = 0; x < 4; ++x) {
      for (int z = 0; z < 6; ++z) EXPECT_NEAR(q[x][z], expected[x][z], 1e-15);
    }
  }
}

TEST(BuildMechanism, TwoOneLn3) {
  const auto q = build_mechanism(complete_design(2, 1), std::log(3.0)).channel();
  EXPECT_NEAR(q[0][0], 0.75, 1e-15);
  EXPECT_NEAR(q[0][1], 0.25, 1e-15);
  EXPECT_NEAR(q[1][0], 0.25, 1e-15);
  EXPECT_NEAR(q[1][1], 0.75, 1e-15);
}

TEST(BuildMechanism, SmallEpsilonIsNearlyUniform) {
  const auto mech = build_mechanism(affine_geometry_design(2, 1, 3), 1e-9);
  for (const auto& row : mech.channel()) {
    for (double p : row) EXPECT_NEAR(p, 1.0 / 12, 1e-9);
  }
}

TEST(BuildMechanism, RowsSumToOne) {
  for (const auto& s : {complete_design(7, 3), affine_geometry_design(3, 1, 2), hadamard3_design(3),
                        round_robin_design(8, 2)}) {
    for (double eps : {0.01, 0.5, 2.0, 8.0}) {
      for (const auto& row : build_mechanism(s, eps).channel()) {
        EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
      }
    }
  }
}

TEST(BuildMechanism, Errors) {
  EXPECT_THROW(build_mechanism(complete_design(4, 2), 0.0), ArgumentError);
  EXPECT_THROW(build_mechanism(complete_design(4, 2), -1.0), ArgumentError);
  EXPECT_THROW(build_mechanism(complete_design(4, 2), INFINITY), ArgumentError);
  EXPECT_THROW(build_mechanism(complete_design(4, 2), NAN), ArgumentError);
  EXPECT_THROW(build_mechanism(IncidenceStructure(4, {{0, 1}, {2, 3}}), 1.0), ArgumentError);
}

TEST(Decompose, PairingSubChannels) {
  const auto mech = build_mechanism(complete_design(4, 2), kLn2);
  const auto dec = decompose(mech, pairing());
  ASSERT_EQ(dec.shared_symbols(), 3u);
  const double e = 2.0;
  // Hand-written Q_1, Q_2, Q_3 (rows x, columns the two blocks of the class).
  const std::vector<std::vector<std::vector<double>>> expected = {
      {{e, 1}, {e, 1}, {1, e}, {1, e}}, {{e, 1}, {1, e}, {e, 1}, {1, e}}, {{e, 1}, {1, e}, {1, e}, {e, 1}}};
  for (std::size_t u = 0; u < 3; ++u) {
    EXPECT_EQ(dec.pu_fraction(u), (std::pair<std::int64_t, std::int64_t>{1, 3}));
    const auto q = dec.channel(u);
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 2; ++y) EXPECT_NEAR(q[x][y], expected[u][x][y] / (e + 1), 1e-15);
    }
  }
}

TEST(Decompose, CyclicSubChannels) {
  const auto mech = build_mechanism(complete_design(4, 2), kLn2);
  const auto dec = decompose(mech, cyclic_shift_resolution(4, 2));
  ASSERT_EQ(dec.shared_symbols(), 2u);
  EXPECT_EQ(dec.pu_fraction(0), (std::pair<std::int64_t, std::int64_t>{2, 3}));
  EXPECT_EQ(dec.pu_fraction(1), (std::pair<std::int64_t, std::int64_t>{1, 3}));
  EXPECT_EQ(dec.subchannels[0].injection, (std::vector<int>{0, 3, 5, 2}));
  EXPECT_EQ(dec.subchannels[1].injection, (std::vector<int>{1, 4}));
  // Q_1 is 4x4 with denominator 2(e - 1) + 4 = 2e + 2; Q_2 is 4x2 with denominator e + 1.
  const auto q1 = dec.channel(0), q2 = dec.channel(1);
  EXPECT_NEAR(q1[0][0], 2.0 / 6, 1e-15);  // point 1 in {1,2}
  EXPECT_NEAR(q1[0][1], 1.0 / 6, 1e-15);  // point 1 not in {2,3}
  EXPECT_NEAR(q2[0][0], 2.0 / 3, 1e-15);  // point 1 in {1,3}
  EXPECT_NEAR(q2[0][1], 1.0 / 3, 1e-15);
  EXPECT_TRUE(verify_decomposition(mech, dec).pass);
}

TEST(Decompose, TrivialResolutionReproducesMechanism) {
  const auto mech = build_mechanism(complete_design(5, 2), 0.7);
  const auto dec = decompose(mech, trivial_resolution(mech.design()));
  ASSERT_EQ(dec.shared_symbols(), 1u);
  const auto q = dec.channel(0), orig = mech.channel();
  for (int x = 0; x < 5; ++x) {
    for (int z = 0; z < 10; ++z) EXPECT_DOUBLE_EQ(q[x][z], orig[x][z]);
  }
  EXPECT_EQ(verify_decomposition(mech, dec).max_deviation, 0.0);
}

TEST(Decompose, SubChannelRowsSumToOne) {
  const auto mech = build_mechanism(complete_design(8, 4), 1.3);
  const auto dec = decompose(mech, cyclic_shift_resolution(8, 4));
  for (std::size_t u = 0; u < dec.shared_symbols(); ++u) {
    for (const auto& row : dec.channel(u)) EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Decompose, MismatchedResolution) {
  const auto mech = build_mechanism(complete_design(4, 2), 1.0);
  Resolution wrong_alpha = pairing();
  wrong_alpha.alphas[0] = 2;
  EXPECT_THROW(decompose(mech, wrong_alpha), ArgumentError);
  Resolution not_resolution{{{0, 1}, {2, 3}, {4, 5}}, {1, 1, 1}};
  EXPECT_THROW(decompose(mech, not_resolution), ArgumentError);
  EXPECT_THROW(decompose(build_mechanism(complete_design(5, 2), 1.0), pairing()), ArgumentError);
}

// Round trip over every design and resolution kind with v <= 12.
TEST(Decompose, RoundTripAcrossConstructions) {
  struct Case {
    IncidenceStructure design;
    Resolution res;
  };
  std::vector<Case> cases;
  for (int v = 2; v <= 9; ++v) {
    for (int k = 1; k < v; ++k) {
      cases.push_back({complete_design(v, k), cyclic_shift_resolution(v, k)});
      cases.push_back({complete_design(v, k), baranyai_resolution(v, k)});
    }
  }
  for (auto [d, m, q] : {std::tuple{2, 1, 2}, std::tuple{2, 1, 3}, std::tuple{3, 1, 2}, std::tuple{3, 2, 2}}) {
    const auto ag = affine_geometry_design(d, m, q);
    cases.push_back({ag, parallel_class_resolution(ag)});
  }
  for (int t = 1; t <= 3; ++t) cases.push_back({hadamard3_design(t), h3_resolution(hadamard3_design(t))});
  for (int v : {4, 6, 8, 10, 12}) {
    const auto rr = round_robin_design(v, 1);
    cases.push_back({rr, parallel_class_resolution(rr)});
  }
  for (const auto& c : cases) {
    for (double eps : {0.2, 1.0, 4.0}) {
      const auto mech = build_mechanism(c.design, eps);
      const auto dec = decompose(mech, c.res);
      const auto report = verify_decomposition(mech, dec);
      EXPECT_TRUE(report.pass) << report.max_deviation;
      const auto ldp = verify_ldp(dec, eps);
      EXPECT_TRUE(ldp.pass);
      EXPECT_NEAR(ldp.max_ratio, std::exp(eps), 1e-12 * std::exp(eps));
    }
  }
}

TEST(VerifyLdp, Examples) {
  const auto mech = build_mechanism(complete_design(4, 2), kLn2);
  const auto report = verify_ldp(mech, kLn2);
  EXPECT_TRUE(report.pass);
  EXPECT_NEAR(report.max_ratio, 2.0, 1e-15);
  EXPECT_TRUE(mech.design().contains(report.x, report.y));
  EXPECT_FALSE(mech.design().contains(report.x_prime, report.y));

  const auto dec = decompose(mech, cyclic_shift_resolution(4, 2));
  const auto dec_report = verify_ldp(dec, kLn2);
  EXPECT_TRUE(dec_report.pass);
  EXPECT_NEAR(dec_report.max_ratio, 2.0, 1e-15);

  const auto tighter = verify_ldp(mech, 0.5);
  EXPECT_FALSE(tighter.pass);
  EXPECT_NEAR(tighter.max_ratio, 2.0, 1e-15);
  EXPECT_FALSE(verify_ldp(dec, 0.5).pass);
}

TEST(VerifyDecomposition, SwappedInjectionFails) {
  const auto mech = build_mechanism(complete_design(4, 2), 1.0);
  auto dec = decompose(mech, cyclic_shift_resolution(4, 2));
  std::swap(dec.subchannels[0].injection[0], dec.subchannels[1].injection[0]);
  const auto report = verify_decomposition(mech, dec);
  EXPECT_FALSE(report.pass);
  EXPECT_GT(report.max_deviation, 1e-3);
  // The witness block is one of the swapped ones.
  EXPECT_TRUE(report.z == 0 || report.z == 1);
}

TEST(VerifyDecomposition, ShapeErrors) {
  const auto mech = build_mechanism(complete_design(4, 2), 1.0);
  auto dec = decompose(mech, pairing());
  dec.subchannels[0].injection[1] = dec.subchannels[0].injection[0];
  EXPECT_THROW(verify_decomposition(mech, dec), ArgumentError);
  EXPECT_THROW(verify_decomposition(build_mechanism(complete_design(5, 2), 1.0), decompose(mech, pairing())),
               ArgumentError);
}

TEST(Sample, EmpiricalFrequencyMatchesChannel) {
  const auto mech = build_mechanism(complete_design(4, 2), kLn2);
  const auto dec = decompose(mech, cyclic_shift_resolution(4, 2));
  const ChannelSampler sampler(dec);
  Rng rng(42);
  const int draws = 1'000'000;
  std::vector<std::int64_t> freq(6, 0);
  for (int i = 0; i < draws; ++i) {
    const auto s = sampler.sample(0, rng);
    EXPECT_EQ(s.block, dec.subchannels[s.u].injection[s.y]);
    ++freq[s.block];
  }
  const auto q = mech.channel();
  for (int z = 0; z < 6; ++z) {
    const double p = q[0][z];
    const double se = std::sqrt(p * (1 - p) / draws);
    EXPECT_NEAR(static_cast<double>(freq[z]) / draws, p, 3 * se) << z;
  }
  EXPECT_NEAR(q[0][0], 2.0 / 9, 1e-15);
}

TEST(Sample, ChiSquareAcrossInputs) {
  const auto mech = build_mechanism(affine_geometry_design(2, 1, 3), 1.0);
  const auto dec = decompose(mech, parallel_class_resolution(mech.design()));
  const ChannelSampler sampler(dec);
  Rng rng(7);
  const int draws = 120'000;
  const auto q = mech.channel();
  for (int x = 0; x < mech.v(); ++x) {
    std::vector<double> freq(mech.b(), 0);
    for (int i = 0; i < draws; ++i) ++freq[sampler.sample(x, rng).block];
    double chi2 = 0;
    for (int z = 0; z < mech.b(); ++z) {
      const double expect = q[x][z] * draws;
      chi2 += (freq[z] - expect) * (freq[z] - expect) / expect;
    }
    // 11 degrees of freedom; the 0.999 quantile is about 31.3.
    EXPECT_LT(chi2, 31.3) << x;
  }
}

TEST(Sample, LargeEpsilonConcentratesOnIncidentBlocks) {
  const auto mech = build_mechanism(complete_design(5, 2), 40.0);
  const ChannelSampler sampler(mech);
  Rng rng(3);
  std::vector<int> freq(10, 0);
  for (int i = 0; i < 40'000; ++i) {
    const auto s = sampler.sample(2, rng);
    ASSERT_TRUE(mech.design().contains(2, s.block));
    ++freq[s.block];
  }
  for (int j : mech.design().blocks_through(2)) EXPECT_NEAR(freq[j] / 40'000.0, 0.25, 0.015);
}

TEST(Sample, Deterministic) {
  const auto mech = build_mechanism(complete_design(6, 3), 0.8);
  const auto dec = decompose(mech, baranyai_resolution(6, 3));
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    const auto sa = sample(dec, i % 6, a);
    const auto sb = sample(dec, i % 6, b);
    EXPECT_EQ(sa.u, sb.u);
    EXPECT_EQ(sa.y, sb.y);
    EXPECT_EQ(sa.block, sb.block);
  }
  Rng c(1);
  EXPECT_THROW(sample(dec, 6, c), ArgumentError);
}

TEST(Rng, StreamsDifferAndUniformBelowIsInRange) {
  Rng s0 = Rng::stream(5, 0), s1 = Rng::stream(5, 1);
  EXPECT_NE(s0.next(), s1.next());
  Rng r(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70'000; ++i) {
    const auto x = r.uniform_below(7);
    ASSERT_LT(x, 7u);
    ++counts[x];
  }
  for (int c : counts) EXPECT_NEAR(c, 10'000, 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace ldpres
