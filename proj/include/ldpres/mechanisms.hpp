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
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "ldpres/error.hpp"
#include "ldpres/incidence.hpp"
#include "ldpres/resolutions.hpp"
#include "ldpres/rng.hpp"

namespace ldpres {

namespace detail {

inline void require_epsilon(double epsilon) {
  require(std::isfinite(epsilon) && epsilon > 0, "epsilon must be a positive finite number");
}

}  // namespace detail

// Two-valued channel of a block design: Q(z|x) is e^eps / ((e^eps - 1) r + b)
// when x lies in block z and 1 / ((e^eps - 1) r + b) otherwise. Stored
// symbolically; dense matrices only on request.
class BlockDesignMechanism {
 public:
  BlockDesignMechanism(IncidenceStructure design, double epsilon)
      : design_(std::move(design)), params_(design_params_or_throw(design_)), epsilon_(epsilon) {
    detail::require_epsilon(epsilon);
  }

  const IncidenceStructure& design() const { return design_; }
  const DesignParams& params() const { return params_; }
  double epsilon() const { return epsilon_; }
  int v() const { return design_.v(); }
  int b() const { return design_.b(); }

  // Numerator of Q(z|x): e^eps on incidences, 1 elsewhere.
  double weight(int z, int x) const { return design_.contains(x, z) ? std::exp(epsilon_) : 1.0; }
  double denominator() const {
    return std::expm1(epsilon_) * static_cast<double>(params_.r) + static_cast<double>(params_.b);
  }
  double probability(int z, int x) const { return weight(z, x) / denominator(); }

  // Row-stochastic v x b matrix, rows indexed by input x.
  std::vector<std::vector<double>> channel() const {
    std::vector<std::vector<double>> q(v(), std::vector<double>(b()));
    for (int x = 0; x < v(); ++x) {
      for (int z = 0; z < b(); ++z) q[x][z] = probability(z, x);
    }
    return q;
  }

 private:
  IncidenceStructure design_;
  DesignParams params_;
  double epsilon_;
};

inline BlockDesignMechanism build_mechanism(const IncidenceStructure& design, double epsilon) {
  return BlockDesignMechanism(design, epsilon);
}

// Channel Q(.|u, .) for one shared-randomness symbol u. Local outputs
// y = 0..size-1; incidence[y] lists the inputs x that receive weight e^eps,
// and injection[y] is the block f_u(y) that y stands for.
struct SubChannel {
  std::int64_t alpha = 0;
  std::vector<Block> incidence;
  std::vector<int> injection;

  int size() const { return static_cast<int>(incidence.size()); }

  bool incident(int y, int x) const {
    const auto& row = incidence[y];
    return std::binary_search(row.begin(), row.end(), x);
  }

  double denominator(double epsilon) const {
    return static_cast<double>(alpha) * std::expm1(epsilon) + static_cast<double>(size());
  }
};

// Privacy mechanism with shared randomness: U ~ P_U with P_U(u) = |C_u| / b,
// then Y ~ Q(.|u, x).
struct DecomposedMechanism {
  int v = 0;
  std::int64_t b = 0;
  double epsilon = 0;
  std::vector<SubChannel> subchannels;
  Resolution resolution;

  std::size_t shared_symbols() const { return subchannels.size(); }

  // P_U(u) as the reduced fraction {num, den}.
  std::pair<std::int64_t, std::int64_t> pu_fraction(std::size_t u) const {
    const std::int64_t num = subchannels[u].size();
    const std::int64_t g = std::gcd(num, b);
    return {num / g, b / g};
  }
  double pu(std::size_t u) const { return static_cast<double>(subchannels[u].size()) / static_cast<double>(b); }

  double weight(std::size_t u, int y, int x) const {
    return subchannels[u].incident(y, x) ? std::exp(epsilon) : 1.0;
  }
  double probability(std::size_t u, int y, int x) const {
    return weight(u, y, x) / subchannels[u].denominator(epsilon);
  }

  // Dense v x |Y_u| matrix of Q(.|u, .).
  std::vector<std::vector<double>> channel(std::size_t u) const {
    std::vector<std::vector<double>> q(v, std::vector<double>(subchannels[u].size()));
    for (int x = 0; x < v; ++x) {
      for (int y = 0; y < subchannels[u].size(); ++y) q[x][y] = probability(u, y, x);
    }
    return q;
  }
};

// Resolution of a block design mechanism: one sub-channel per class, built
// from the class's own incidence pattern with denominator
// alpha(C_u)(e^eps - 1) + |C_u|, and f_u the identity on C_u.
inline DecomposedMechanism decompose(const BlockDesignMechanism& mech, const Resolution& res) {
  auto check = verify_resolution(mech.design(), res.classes);
  if (auto* failure = std::get_if<ResolutionFailure>(&check)) {
    throw ArgumentError("resolution does not fit the design: " + failure->message);
  }
  if (std::get<Resolution>(check).alphas != res.alphas) {
    throw ArgumentError("resolution alphas do not match the design");
  }
  DecomposedMechanism dec;
  dec.v = mech.v();
  dec.b = mech.b();
  dec.epsilon = mech.epsilon();
  dec.resolution = res;
  for (std::size_t u = 0; u < res.size(); ++u) {
    SubChannel sub;
    sub.alpha = res.alphas[u];
    for (int z : res.classes[u]) {
      sub.incidence.push_back(mech.design().block(z));
      sub.injection.push_back(z);
    }
    dec.subchannels.push_back(std::move(sub));
  }
  return dec;
}

struct LdpReport {
  bool pass = false;
  double max_ratio = 0;
  // Maximizing output (u, y) and inputs x, x' with Q(y|u,x) / Q(y|u,x') = max_ratio.
  int u = 0, y = 0, x = 0, x_prime = 0;
};

namespace detail {

// Ratio over inputs of one output column, from the symbolic weights.
template <typename WeightFn>
void scan_column(LdpReport& report, int u, int y, int v, WeightFn weight) {
  int arg_max = 0, arg_min = 0;
  double hi = weight(0), lo = hi;
  for (int x = 1; x < v; ++x) {
    const double w = weight(x);
    if (w > hi) hi = w, arg_max = x;
    if (w < lo) lo = w, arg_min = x;
  }
  const double ratio = hi / lo;
  if (ratio > report.max_ratio) report = {false, ratio, u, y, arg_max, arg_min};
}

}  // namespace detail

// Largest singleton ratio Q(y|x)/Q(y|x'); passes when it is at most
// e^epsilon (1 + tol). Singletons suffice because the channels are strictly
// positive on their outputs.
inline LdpReport verify_ldp(const BlockDesignMechanism& mech, double epsilon, double tol = 1e-9) {
  LdpReport report;
  for (int z = 0; z < mech.b(); ++z) {
    detail::scan_column(report, 0, z, mech.v(), [&](int x) { return mech.weight(z, x); });
  }
  report.pass = report.max_ratio <= std::exp(epsilon) * (1 + tol);
  return report;
}

inline LdpReport verify_ldp(const DecomposedMechanism& dec, double epsilon, double tol = 1e-9) {
  LdpReport report;
  for (std::size_t u = 0; u < dec.shared_symbols(); ++u) {
    for (int y = 0; y < dec.subchannels[u].size(); ++y) {
      detail::scan_column(report, static_cast<int>(u), y, dec.v,
                          [&](int x) { return dec.weight(u, y, x); });
    }
  }
  report.pass = report.max_ratio <= std::exp(epsilon) * (1 + tol);
  return report;
}

struct DecompositionReport {
  bool pass = false;
  double max_deviation = 0;
  // Input and block where the marginal identity is furthest off.
  int x = 0, z = 0;
};

// Checks Q~(z|x) = sum_u sum_{y: f_u(y) = z} Q(y|u,x) P_U(u) for all x, z.
inline DecompositionReport verify_decomposition(const BlockDesignMechanism& orig,
                                                const DecomposedMechanism& dec,
                                                double tol = 1e-12) {
  require(dec.v == orig.v() && dec.b == orig.b(), "decomposition shape does not match mechanism");
  struct Preimage {
    std::size_t u;
    int y;
  };
  std::vector<std::vector<Preimage>> preimages(orig.b());
  for (std::size_t u = 0; u < dec.shared_symbols(); ++u) {
    const auto& sub = dec.subchannels[u];
    require(static_cast<int>(sub.injection.size()) == sub.size(), "injection size mismatch");
    std::vector<int> image = sub.injection;
    std::sort(image.begin(), image.end());
    require(std::adjacent_find(image.begin(), image.end()) == image.end(),
            "f_u is not injective");
    for (int y = 0; y < sub.size(); ++y) {
      require(sub.injection[y] >= 0 && sub.injection[y] < orig.b(), "f_u maps outside the blocks");
      preimages[sub.injection[y]].push_back({u, y});
    }
  }
  DecompositionReport report{true, 0, 0, 0};
  for (int x = 0; x < orig.v(); ++x) {
    for (int z = 0; z < orig.b(); ++z) {
      double marginal = 0;
      for (const auto& pre : preimages[z]) marginal += dec.probability(pre.u, pre.y, x) * dec.pu(pre.u);
      const double deviation = std::abs(marginal - orig.probability(z, x));
      if (deviation > report.max_deviation) report = {true, deviation, x, z};
    }
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

struct PrivatizedSample {
  int u = 0;      // shared-randomness symbol
  int y = 0;      // reported symbol in Y_u
  int block = 0;  // f_u(y)
};

// Inverse-CDF sampler over the two-valued rows. Precomputes, per (u, x), the
// outputs carrying weight e^eps and those carrying weight 1.
class ChannelSampler {
 public:
  explicit ChannelSampler(const DecomposedMechanism& dec)
      : v_(dec.v), b_(dec.b), exp_eps_(std::exp(dec.epsilon)) {
    for (const auto& sub : dec.subchannels) add_class(sub.incidence, sub.injection, sub.alpha);
  }

  // Undecomposed mechanism: a single class holding every block.
  explicit ChannelSampler(const BlockDesignMechanism& mech)
      : v_(mech.v()), b_(mech.b()), exp_eps_(std::exp(mech.epsilon())) {
    std::vector<int> identity(mech.b());
    std::iota(identity.begin(), identity.end(), 0);
    add_class(mech.design().blocks(), identity, mech.params().r);
  }

  PrivatizedSample sample(int x, Rng& rng) const {
    require(x >= 0 && x < v_, "input point out of range");
    const auto draw = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(b_)));
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), draw);
    const auto u = static_cast<std::size_t>(it - cumulative_.begin());
    const auto& cls = classes_[u];
    const auto& hot = cls.hot[x];
    const auto& cold = cls.cold[x];
    const double hot_mass = exp_eps_ * static_cast<double>(hot.size());
    const double total = hot_mass + static_cast<double>(cold.size());
    const bool pick_hot = cold.empty() || rng.uniform01() * total < hot_mass;
    const auto& pool = pick_hot ? hot : cold;
    const int y = pool[rng.uniform_below(pool.size())];
    return {static_cast<int>(u), y, cls.injection[y]};
  }

 private:
  struct Class {
    std::vector<std::vector<int>> hot, cold;
    std::vector<int> injection;
  };

  void add_class(const std::vector<Block>& incidence, const std::vector<int>& injection,
                 std::int64_t alpha) {
    Class cls;
    cls.hot.assign(v_, {});
    cls.cold.assign(v_, {});
    cls.injection = injection;
    for (int y = 0; y < static_cast<int>(incidence.size()); ++y) {
      std::vector<char> in(v_, 0);
      for (int x : incidence[y]) in[x] = 1;
      for (int x = 0; x < v_; ++x) (in[x] ? cls.hot[x] : cls.cold[x]).push_back(y);
    }
    for (int x = 0; x < v_; ++x) {
      if (static_cast<std::int64_t>(cls.hot[x].size()) != alpha) {
        throw ArgumentError("sub-channel rows are not alpha-regular");
      }
    }
    const std::int64_t before = cumulative_.empty() ? 0 : cumulative_.back();
    cumulative_.push_back(before + static_cast<std::int64_t>(incidence.size()));
    classes_.push_back(std::move(cls));
  }

  int v_;
  std::int64_t b_;
  double exp_eps_;
  std::vector<std::int64_t> cumulative_;
  std::vector<Class> classes_;
};

// One privatized report for input x: u ~ P_U by an exact integer draw, then
// y ~ Q(.|u, x).
inline PrivatizedSample sample(const DecomposedMechanism& dec, int x, Rng& rng) {
  return ChannelSampler(dec).sample(x, rng);
}

}  // namespace ldpres
