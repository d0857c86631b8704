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
#include <vector>

#include "ldpres/designs.hpp"
#include "ldpres/error.hpp"
#include "ldpres/estimation.hpp"
#include "ldpres/mechanisms.hpp"
#include "ldpres/resolutions.hpp"
#include "ldpres/rng.hpp"

namespace ldpres {
namespace {

const double kLn2 = std::log(2.0);

double sum(const std::vector<double>& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

std::vector<double> uniform(int v) { return std::vector<double>(v, 1.0 / v); }

// Normalized exponentials give a draw spread over the whole simplex.
std::vector<double> random_simplex_point(int v, Rng& rng) {
  std::vector<double> p(v);
  for (double& x : p) x = -std::log(1.0 - rng.uniform01());
  const double total = sum(p);
  for (double& x : p) x /= total;
  return p;
}

TEST(CountIncidences, Examples) {
  const auto d = complete_design(4, 2);
  EXPECT_EQ(count_incidences({0, 0, 3}, d), (std::vector<std::int64_t>{2, 3, 1, 0}));
  EXPECT_EQ(count_incidences({}, d), (std::vector<std::int64_t>{0, 0, 0, 0}));
  EXPECT_EQ(count_incidences(std::vector<int>(7, 0), d), (std::vector<std::int64_t>{7, 7, 0, 0}));
  EXPECT_THROW(count_incidences({6}, d), ArgumentError);
  EXPECT_THROW(count_incidences({-1}, d), ArgumentError);
}

TEST(CountIncidences, TotalIsNK) {
  const auto d = affine_geometry_design(2, 1, 3);
  Rng rng(11);
  std::vector<int> samples;
  for (int i = 0; i < 500; ++i) samples.push_back(static_cast<int>(rng.uniform_below(d.b())));
  const auto n = count_incidences(samples, d);
  EXPECT_EQ(std::accumulate(n.begin(), n.end(), std::int64_t{0}), 500 * 3);
}

TEST(Estimate, FourTwoExample) {
  // scale = 3 (2*2 + 2) / (3 * 2 * 2 * 1) = 1.5, offset = (2 + 2) / (2 * 1) = 2.
  const auto p = estimate({2, 3, 1, 0}, 3, 4, 2, kLn2);
  const std::vector<double> expected = {1.0, 2.5, -0.5, -2.0};
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(p[x], expected[x], 1e-12);
  EXPECT_NEAR(sum(p), 1.0, 1e-12);
}

TEST(Estimate, BalancedCountsGiveUniform) {
  for (auto [v, k] : {std::pair{4, 2}, std::pair{6, 3}, std::pair{9, 3}, std::pair{10, 5}}) {
    const std::int64_t n = 10 * v;
    const auto p = estimate(std::vector<std::int64_t>(v, n * k / v), n, v, k, 0.9);
    for (double x : p) EXPECT_NEAR(x, 1.0 / v, 1e-12);
  }
}

TEST(Estimate, ScalingInvariance) {
  const std::vector<std::int64_t> counts = {5, 9, 2, 4};
  std::vector<std::int64_t> doubled;
  for (auto c : counts) doubled.push_back(2 * c);
  const auto a = estimate(counts, 10, 4, 2, 1.2);
  const auto b = estimate(doubled, 20, 4, 2, 1.2);
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(a[x], b[x], 1e-12);
}

TEST(Estimate, SumsToOneForValidCounts) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int v = 2 + static_cast<int>(rng.uniform_below(9));
    const int k = 1 + static_cast<int>(rng.uniform_below(v - 1));
    const double eps = 0.05 + 5 * rng.uniform01();
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.uniform_below(5000));
    // Spread n*k incidences so each report hits k distinct points.
    std::vector<std::int64_t> counts(v, 0);
    for (std::int64_t i = 0; i < n; ++i) {
      const int start = static_cast<int>(rng.uniform_below(v));
      for (int j = 0; j < k; ++j) ++counts[(start + j) % v];
    }
    EXPECT_NEAR(sum(estimate(counts, n, v, k, eps)), 1.0, 1e-9);
  }
}

TEST(Estimate, Errors) {
  EXPECT_THROW(estimate({1, 1, 0, 0}, 1, 4, 2, 0.0), ArgumentError);
  EXPECT_THROW(estimate({1, 1, 0, 0}, 0, 4, 2, 1.0), ArgumentError);
  EXPECT_THROW(estimate({1, 1, 0}, 1, 4, 2, 1.0), ArgumentError);
  EXPECT_THROW(estimate({1, 1, 1, 1}, 1, 4, 4, 1.0), ArgumentError);
}

TEST(ClosedFormLoss, Examples) {
  EXPECT_NEAR(closed_form_loss(1, 4, 2, kLn2), 20.25, 1e-12);
  EXPECT_NEAR(closed_form_loss(10'000, 4, 2, kLn2), 2.025e-3, 1e-15);
  for (std::int64_t n : {1, 7, 100}) {
    EXPECT_NEAR(closed_form_loss(2 * n, 9, 4, 0.6), closed_form_loss(n, 9, 4, 0.6) / 2, 1e-12);
  }
  EXPECT_THROW(closed_form_loss(0, 4, 2, 1.0), ArgumentError);
  EXPECT_THROW(closed_form_loss(1, 4, 0, 1.0), ArgumentError);
  EXPECT_THROW(closed_form_loss(1, 4, 2, 0.0), ArgumentError);
}

// The exact loss at the uniform input, enumerated over blocks, is the same for
// every design with the same (v, k) and equals the closed form.
TEST(ClosedFormLoss, MatchesEnumerationAcrossDesigns) {
  for (int t = 1; t <= 3; ++t) {
    const int v = 4 * t, k = 2 * t;
    for (double eps : {0.3, 1.0, 2.5}) {
      const double h3 = exact_expected_loss(build_mechanism(hadamard3_design(t), eps), uniform(v));
      const double full = exact_expected_loss(build_mechanism(complete_design(v, k), eps), uniform(v));
      const double closed = closed_form_loss(1, v, k, eps);
      EXPECT_NEAR(h3, closed, 1e-9 * closed);
      EXPECT_NEAR(full, closed, 1e-9 * closed);
    }
  }
  const auto ag = build_mechanism(affine_geometry_design(2, 1, 3), 0.8);
  EXPECT_NEAR(exact_expected_loss(ag, uniform(9), 50), closed_form_loss(50, 9, 3, 0.8), 1e-12);
}

TEST(ExpectedEstimate, Unbiased) {
  const auto mech = build_mechanism(complete_design(4, 2), kLn2);
  const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
  const auto e = expected_estimate(mech, p);
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(e[x], p[x], 1e-12);
  for (int vertex = 0; vertex < 4; ++vertex) {
    std::vector<double> point(4, 0.0);
    point[vertex] = 1.0;
    const auto ev = expected_estimate(mech, point);
    for (int x = 0; x < 4; ++x) EXPECT_NEAR(ev[x], point[x], 1e-12);
  }
  const auto eu = expected_estimate(mech, uniform(4));
  for (double x : eu) EXPECT_NEAR(x, 0.25, 1e-12);
}

TEST(ExpectedEstimate, UnbiasedThroughDecomposition) {
  const auto mech = build_mechanism(complete_design(6, 3), 1.1);
  const auto dec = decompose(mech, cyclic_shift_resolution(6, 3));
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_simplex_point(6, rng);
    const auto e = expected_estimate(dec, mech, p);
    for (int x = 0; x < 6; ++x) EXPECT_NEAR(e[x], p[x], 1e-12);
  }
  EXPECT_THROW(expected_estimate(mech, {0.5, 0.5}), ArgumentError);
  EXPECT_THROW(expected_estimate(mech, {0.5, 0.5, 0.5, -0.5, 0, 0}), ArgumentError);
}

TEST(ExactExpectedLoss, PointMassIsBelowUniform) {
  for (auto [v, k] : {std::pair{4, 2}, std::pair{6, 2}, std::pair{5, 1}}) {
    const auto mech = build_mechanism(complete_design(v, k), 0.7);
    std::vector<double> point(v, 0.0);
    point[0] = 1.0;
    EXPECT_LT(exact_expected_loss(mech, point, 10'000), exact_expected_loss(mech, uniform(v), 10'000));
  }
}

TEST(ProjectToSimplex, Examples) {
  const auto a = project_to_simplex({1.0, 2.5, -0.5, -2.0});
  EXPECT_NEAR(a[0], 0.0, 1e-12);
  EXPECT_NEAR(a[1], 1.0, 1e-12);
  const auto b = project_to_simplex({0.2, 0.3, 0.5});
  EXPECT_NEAR(b[0], 0.2, 1e-12);
  EXPECT_NEAR(b[2], 0.5, 1e-12);
  const auto c = project_to_simplex({0.6, 0.6, -1.0});
  EXPECT_NEAR(c[0], 0.5, 1e-12);
  EXPECT_NEAR(c[1], 0.5, 1e-12);
  EXPECT_NEAR(c[2], 0.0, 1e-12);
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> p(5);
    for (double& x : p) x = 4 * rng.uniform01() - 2;
    const auto q = project_to_simplex(p);
    EXPECT_NEAR(sum(q), 1.0, 1e-12);
    for (double x : q) EXPECT_GE(x, 0.0);
  }
}

TEST(RequireSimplex, Errors) {
  EXPECT_NO_THROW(require_simplex({0.5, 0.5}, 2));
  EXPECT_THROW(require_simplex({0.5, 0.6}, 2), ArgumentError);
  EXPECT_THROW(require_simplex({1.1, -0.1}, 2), ArgumentError);
  EXPECT_THROW(require_simplex({1.0}, 2), ArgumentError);
}

TEST(SimulateLoss, MatchesClosedFormAndIsDeterministic) {
  const auto mech = build_mechanism(complete_design(4, 2), kLn2);
  const auto dec = decompose(mech, cyclic_shift_resolution(4, 2));
  SimulationOptions opt;
  opt.n = 2000;
  opt.trials = 100;
  opt.seed = 99;
  const auto a = simulate_loss(dec, mech, uniform(4), opt);
  const double closed = closed_form_loss(opt.n, 4, 2, kLn2);
  EXPECT_LT(std::abs(a.mean_mse - closed), 3 * a.std_err);
  EXPECT_NEAR(sum(a.mean_estimate), 1.0, 1e-9);

  const auto again = simulate_loss(dec, mech, uniform(4), opt);
  EXPECT_EQ(a.mean_mse, again.mean_mse);
  EXPECT_EQ(a.std_err, again.std_err);
  opt.workers = 4;
  const auto parallel = simulate_loss(dec, mech, uniform(4), opt);
  EXPECT_NEAR(parallel.mean_mse, a.mean_mse, 1e-15);

  const auto plain = simulate_loss(mech, uniform(4), opt);
  EXPECT_LT(std::abs(plain.mean_mse - closed), 3 * plain.std_err);
}

TEST(SimulateLoss, Errors) {
  const auto mech = build_mechanism(complete_design(4, 2), 1.0);
  SimulationOptions opt;
  opt.trials = 5;
  opt.n = 10;
  EXPECT_THROW(simulate_loss(mech, {0.5, 0.5, 0.5, 0.5}, opt), ArgumentError);
  EXPECT_THROW(simulate_loss(mech, {0.5, 0.5}, opt), ArgumentError);
}

}  // namespace
}  // namespace ldpres
