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
#include <limits>
#include <queue>
#include <vector>

#include "ldpres/error.hpp"

namespace ldpres {

// Integral max-flow by shortest augmenting paths (Edmonds-Karp). Neighbors
// are scanned in ascending node index, so results are reproducible.
class FlowNetwork {
 public:
  static constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max() / 4;

  explicit FlowNetwork(int nodes) : adjacency_(nodes) {}

  int node_count() const { return static_cast<int>(adjacency_.size()); }

  int add_node() {
    adjacency_.emplace_back();
    return node_count() - 1;
  }

  int add_edge(int from, int to, std::int64_t capacity) {
    require(capacity >= 0, "edge capacity must be nonnegative");
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({from, to, capacity, 0});
    edges_.push_back({to, from, 0, 0});
    adjacency_[from].push_back(id);
    adjacency_[to].push_back(id + 1);
    sorted_ = false;
    return id;
  }

  std::int64_t flow(int edge) const { return edges_[edge].flow; }

  std::int64_t max_flow(int source, int sink) {
    sort_adjacency();
    std::int64_t total = 0;
    std::vector<int> parent_edge(adjacency_.size());
    while (true) {
      std::fill(parent_edge.begin(), parent_edge.end(), -1);
      std::queue<int> frontier;
      frontier.push(source);
      parent_edge[source] = -2;
      while (!frontier.empty() && parent_edge[sink] == -1) {
        const int u = frontier.front();
        frontier.pop();
        for (int id : adjacency_[u]) {
          const auto& e = edges_[id];
          if (parent_edge[e.to] == -1 && e.capacity - e.flow > 0) {
            parent_edge[e.to] = id;
            frontier.push(e.to);
          }
        }
      }
      if (parent_edge[sink] == -1) break;

      std::int64_t push = kInfinite;
      for (int v = sink; v != source; v = edges_[parent_edge[v]].from) {
        const auto& e = edges_[parent_edge[v]];
        push = std::min(push, e.capacity - e.flow);
      }
      for (int v = sink; v != source; v = edges_[parent_edge[v]].from) {
        edges_[parent_edge[v]].flow += push;
        edges_[parent_edge[v] ^ 1].flow -= push;
      }
      total += push;
    }
    return total;
  }

 private:
  struct Edge {
    int from, to;
    std::int64_t capacity, flow;
  };

  void sort_adjacency() {
    if (sorted_) return;
    for (auto& adj : adjacency_) {
      std::stable_sort(adj.begin(), adj.end(),
                       [this](int a, int b) { return edges_[a].to < edges_[b].to; });
    }
    sorted_ = true;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  bool sorted_ = false;
};

// Feasible s-t flow (of nonnegative value) with lower and upper bounds on each edge, reduced to a
// max-flow between an auxiliary source and sink.
class BoundedFlowNetwork {
 public:
  explicit BoundedFlowNetwork(int nodes) : nodes_(nodes), excess_(nodes, 0) {}

  int add_edge(int from, int to, std::int64_t lower, std::int64_t upper) {
    require(0 <= lower && lower <= upper, "edge bounds must satisfy 0 <= lower <= upper");
    edges_.push_back({from, to, lower, upper});
    return static_cast<int>(edges_.size()) - 1;
  }

  // Solves for any feasible flow; false when none exists.
  bool solve(int source, int sink) {
    FlowNetwork net(nodes_ + 2);
    const int super_source = nodes_, super_sink = nodes_ + 1;
    std::fill(excess_.begin(), excess_.end(), 0);
    reduced_ids_.clear();
    for (const auto& e : edges_) {
      reduced_ids_.push_back(net.add_edge(e.from, e.to, e.upper - e.lower));
      excess_[e.to] += e.lower;
      excess_[e.from] -= e.lower;
    }
    net.add_edge(sink, source, FlowNetwork::kInfinite);
    std::int64_t required = 0;
    for (int u = 0; u < nodes_; ++u) {
      if (excess_[u] > 0) {
        net.add_edge(super_source, u, excess_[u]);
        required += excess_[u];
      } else if (excess_[u] < 0) {
        net.add_edge(u, super_sink, -excess_[u]);
      }
    }
    if (net.max_flow(super_source, super_sink) != required) return false;
    flows_.resize(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      flows_[i] = edges_[i].lower + net.flow(reduced_ids_[i]);
    }
    return true;
  }

  std::int64_t flow(int edge) const { return flows_.at(edge); }

 private:
  struct Edge {
    int from, to;
    std::int64_t lower, upper;
  };

  int nodes_;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> excess_;
  std::vector<int> reduced_ids_;
  std::vector<std::int64_t> flows_;
};

}  // namespace ldpres
