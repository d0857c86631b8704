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
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

#include "ldpres/error.hpp"
#include "ldpres/incidence.hpp"
#include "ldpres/mechanisms.hpp"
#include "ldpres/rng.hpp"

namespace ldpres {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0, carry_ = 0;
};

// N_x: number of reported blocks containing x.
inline std::vector<std::int64_t> count_incidences(const std::vector<int>& samples,
                                                  const IncidenceStructure& design) {
  std::vector<std::int64_t> counts(design.v(), 0);
  for (int z : samples) {
    require(z >= 0 && z < design.b(), "sample block index out of range");
    for (int x : design.block(z)) ++counts[x];
  }
  return counts;
}

// Coefficients of the affine estimator P_x = scale * N_x - offset.
struct EstimatorCoefficients {
  double scale;
  double offset;
};

inline EstimatorCoefficients estimator_coefficients(std::int64_t n, int v, int k, double epsilon) {
  require(n >= 1, "estimator needs n >= 1");
  require(k > 0 && k < v, "estimator needs 0 < k < v");
  require(std::isfinite(epsilon) && epsilon > 0, "estimator needs epsilon > 0");
  const double em1 = std::expm1(epsilon);
  const double e = std::exp(epsilon);
  const double vd = v, kd = k, nd = static_cast<double>(n);
  return {(vd - 1) * (kd * e + vd - kd) / (nd * kd * (vd - kd) * em1),
          ((kd - 1) * e + vd - kd) / ((vd - kd) * em1)};
}

// Unbiased estimate of P_X from incidence counts. Entries may be negative.
inline std::vector<double> estimate(const std::vector<std::int64_t>& counts, std::int64_t n,
                                    int v, int k, double epsilon) {
  require(static_cast<int>(counts.size()) == v, "count vector length must be v");
  const auto c = estimator_coefficients(n, v, k, epsilon);
  std::vector<double> p(v);
  for (int x = 0; x < v; ++x) p[x] = c.scale * static_cast<double>(counts[x]) - c.offset;
  return p;
}

// Euclidean projection onto the probability simplex. Post-processing only;
// the projected estimate is biased.
inline std::vector<double> project_to_simplex(std::vector<double> p) {
  std::vector<double> sorted = p;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0, theta = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    running += sorted[i];
    const double candidate = (running - 1) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0) theta = candidate;
  }
  for (double& x : p) x = std::max(0.0, x - theta);
  return p;
}

// Worst-case l2 risk (v-1)^2 (k e^eps + v - k)^2 / (n v k (v-k) (e^eps - 1)^2).
inline double closed_form_loss(std::int64_t n, int v, int k, double epsilon) {
  require(n >= 1, "closed_form_loss: n must be >= 1");
  require(k > 0 && k < v, "closed_form_loss: need 0 < k < v");
  require(std::isfinite(epsilon) && epsilon > 0, "closed_form_loss: epsilon must be > 0");
  const double e = std::exp(epsilon), em1 = std::expm1(epsilon);
  const double vd = v, kd = k;
  const double top = (vd - 1) * (kd * e + vd - kd);
  return top * top / (static_cast<double>(n) * vd * kd * (vd - kd) * em1 * em1);
}

inline void require_simplex(const std::vector<double>& p, int v, double tol = 1e-9) {
  require(static_cast<int>(p.size()) == v, "distribution length must be v");
  double total = 0;
  for (double x : p) {
    require(x >= -tol, "distribution has a negative entry");
    total += x;
  }
  require(std::abs(total - 1) <= tol, "distribution does not sum to 1");
}

// Output law over blocks: q_z = sum_x p_x Q(z|x).
inline std::vector<double> block_distribution(const BlockDesignMechanism& mech,
                                              const std::vector<double>& p) {
  std::vector<double> q(mech.b(), 0);
  for (int z = 0; z < mech.b(); ++z) {
    CompensatedSum s;
    for (int x = 0; x < mech.v(); ++x) s.add(p[x] * mech.probability(z, x));
    q[z] = s.value();
  }
  return q;
}

// Law of f_U(Y) over blocks for a decomposed mechanism.
inline std::vector<double> block_distribution(const DecomposedMechanism& dec,
                                              const std::vector<double>& p) {
  std::vector<double> q(dec.b, 0);
  for (std::size_t u = 0; u < dec.shared_symbols(); ++u) {
    const auto& sub = dec.subchannels[u];
    for (int y = 0; y < sub.size(); ++y) {
      CompensatedSum s;
      for (int x = 0; x < dec.v; ++x) s.add(p[x] * dec.probability(u, y, x));
      q[sub.injection[y]] += s.value() * dec.pu(u);
    }
  }
  return q;
}

namespace detail {

inline std::vector<double> expected_estimate_from_blocks(const IncidenceStructure& design, int k,
                                                         double epsilon,
                                                         const std::vector<double>& q) {
  const auto c = estimator_coefficients(1, design.v(), k, epsilon);
  std::vector<double> out(design.v());
  for (int x = 0; x < design.v(); ++x) {
    CompensatedSum hit;
    for (int z : design.blocks_through(x)) hit.add(q[z]);
    out[x] = c.scale * hit.value() - c.offset;
  }
  return out;
}

}  // namespace detail

// E[P_hat] computed exactly (no sampling); equals p for an unbiased scheme.
inline std::vector<double> expected_estimate(const BlockDesignMechanism& mech,
                                             const std::vector<double>& p) {
  require_simplex(p, mech.v());
  return detail::expected_estimate_from_blocks(mech.design(), static_cast<int>(mech.params().k),
                                               mech.epsilon(), block_distribution(mech, p));
}

inline std::vector<double> expected_estimate(const DecomposedMechanism& dec,
                                             const BlockDesignMechanism& orig,
                                             const std::vector<double>& p) {
  require_simplex(p, dec.v);
  return detail::expected_estimate_from_blocks(orig.design(), static_cast<int>(orig.params().k),
                                               dec.epsilon, block_distribution(dec, p));
}

// E ||p - P_hat_n||^2 evaluated exactly by enumerating the single-report
// estimate over every block; the n-sample risk is that value over n.
inline double exact_expected_loss(const BlockDesignMechanism& mech, const std::vector<double>& p,
                                  std::int64_t n = 1) {
  require_simplex(p, mech.v());
  require(mech.b() <= 10'000, "exact_expected_loss is limited to b <= 10^4");
  const int v = mech.v();
  const auto c = estimator_coefficients(1, v, static_cast<int>(mech.params().k), mech.epsilon());
  const auto q = block_distribution(mech, p);
  CompensatedSum risk;
  for (int z = 0; z < mech.b(); ++z) {
    CompensatedSum sq;
    for (int x = 0; x < v; ++x) {
      const double single = (mech.design().contains(x, z) ? c.scale : 0.0) - c.offset;
      sq.add((p[x] - single) * (p[x] - single));
    }
    risk.add(q[z] * sq.value());
  }
  return risk.value() / static_cast<double>(n);
}

struct SimulationResult {
  double mean_mse = 0;
  double std_err = 0;
  std::vector<double> mean_estimate;
};

struct SimulationOptions {
  std::int64_t n = 10'000;
  int trials = 200;
  std::uint64_t seed = 0;
  int workers = 1;
};

namespace detail {

// Draws from p by inverse CDF.
class InputSampler {
 public:
  explicit InputSampler(const std::vector<double>& p) : cumulative_(p.size()) {
    std::partial_sum(p.begin(), p.end(), cumulative_.begin());
  }
  int draw(Rng& rng) const {
    const double u = rng.uniform01() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                     static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
  }

 private:
  std::vector<double> cumulative_;
};

struct TrialOutcome {
  double squared_error;
  std::vector<double> estimate;
};

inline SimulationResult run_trials(const ChannelSampler& sampler, const IncidenceStructure& design,
                                   int k, double epsilon, const std::vector<double>& p,
                                   const SimulationOptions& opt) {
  require(opt.n >= 1, "simulation needs n >= 1");
  require(opt.trials >= 2, "simulation needs at least two trials");
  require_simplex(p, design.v());
  const InputSampler inputs(p);
  const int v = design.v();

  std::vector<TrialOutcome> outcomes(opt.trials);
  auto run_range = [&](int first, int last) {
    std::vector<int> reports(opt.n);
    for (int trial = first; trial < last; ++trial) {
      Rng rng = Rng::stream(opt.seed, static_cast<std::uint64_t>(trial));
      for (auto& z : reports) z = sampler.sample(inputs.draw(rng), rng).block;
      auto est = estimate(count_incidences(reports, design), opt.n, v, k, epsilon);
      CompensatedSum err;
      for (int x = 0; x < v; ++x) err.add((p[x] - est[x]) * (p[x] - est[x]));
      outcomes[trial] = {err.value(), std::move(est)};
    }
  };
  const int workers = std::max(1, std::min(opt.workers, opt.trials));
  if (workers == 1) {
    run_range(0, opt.trials);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(run_range, opt.trials * w / workers, opt.trials * (w + 1) / workers);
    }
  }

  // Ordered reduction: identical results for any worker count.
  CompensatedSum total, total_sq;
  std::vector<CompensatedSum> est_sum(v);
  for (const auto& o : outcomes) {
    total.add(o.squared_error);
    for (int x = 0; x < v; ++x) est_sum[x].add(o.estimate[x]);
  }
  const double trials = opt.trials;
  const double mean = total.value() / trials;
  for (const auto& o : outcomes) total_sq.add((o.squared_error - mean) * (o.squared_error - mean));
  SimulationResult result;
  result.mean_mse = mean;
  result.std_err = std::sqrt(total_sq.value() / (trials - 1) / trials);
  for (int x = 0; x < v; ++x) result.mean_estimate.push_back(est_sum[x].value() / trials);
  return result;
}

}  // namespace detail

// Monte Carlo estimate of E ||p - P_hat_n||^2 for the undecomposed scheme.
inline SimulationResult simulate_loss(const BlockDesignMechanism& mech, const std::vector<double>& p,
                                      const SimulationOptions& opt) {
  return detail::run_trials(ChannelSampler(mech), mech.design(), static_cast<int>(mech.params().k),
                            mech.epsilon(), p, opt);
}

// Same experiment through the shared-randomness mechanism; reports are mapped
// back to blocks by f_u before estimation.
inline SimulationResult simulate_loss(const DecomposedMechanism& dec,
                                      const BlockDesignMechanism& orig,
                                      const std::vector<double>& p, const SimulationOptions& opt) {
  return detail::run_trials(ChannelSampler(dec), orig.design(), static_cast<int>(orig.params().k),
                            dec.epsilon, p, opt);
}

}  // namespace ldpres
