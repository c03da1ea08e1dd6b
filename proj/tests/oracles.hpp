#pragma once

// Brute-force oracles, independent of the library's flow and solver code so
// the suites compare two genuinely different computation routes.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "tsvft/flow.hpp"
#include "tsvft/relgraph.hpp"

namespace oracles {

// Maximum number of paths from f to any spare, vertex-disjoint except at f,
// by literally enumerating path systems. cap stops the recursion once that
// many paths are found.
inline int max_disjoint_paths(const tsvft::RelGraph& g, int f,
                              const std::vector<char>& edge_mask,
                              int cap = std::numeric_limits<int>::max()) {
  // Memoized on the used-vertex mask; at most 2^|V| entries.
  std::map<std::uint32_t, int> memo;
  std::function<int(std::uint32_t)> solve = [&](std::uint32_t used) -> int {
    auto hit = memo.find(used);
    if (hit != memo.end()) return hit->second;
    int found = 0;
    // DFS over simple paths from f through unused vertices.
    std::function<void(int, std::uint32_t)> walk = [&](int v, std::uint32_t visited) {
      if (found >= cap) return;
      if (g.is_spare(v)) {
        int sub = 1 + solve(used | (visited & ~(1u << f)));
        found = std::max(found, sub);
        return;
      }
      for (int e : g.out_edges[static_cast<size_t>(v)]) {
        if (!edge_mask.empty() && !edge_mask[static_cast<size_t>(e)]) continue;
        int w = g.edges[static_cast<size_t>(e)].second;
        if (used & (1u << w)) continue;
        if (visited & (1u << w)) continue;
        walk(w, visited | (1u << w));
      }
    };
    walk(f, 1u << f);
    found = std::min(found, cap);
    memo[used] = found;
    return found;
  };
  return std::min(solve(0), cap);
}

inline int max_disjoint_paths(const tsvft::RelGraph& g, int f) {
  return max_disjoint_paths(g, f, {});
}

// Minimum {f}-V2 disconnecting vertex set, by enumerating vertex subsets.
inline int min_disconnecting_set(const tsvft::RelGraph& g, int f) {
  const int total = g.node_count();
  auto reaches_spare = [&](std::uint32_t removed) {
    std::vector<int> stack{f};
    std::uint32_t seen = 1u << f;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (g.is_spare(v)) return true;
      for (int e : g.out_edges[static_cast<size_t>(v)]) {
        int w = g.edges[static_cast<size_t>(e)].second;
        if ((removed & (1u << w)) || (seen & (1u << w))) continue;
        seen |= 1u << w;
        stack.push_back(w);
      }
    }
    return false;
  };
  int best = total;
  for (std::uint32_t removed = 0; removed < (1u << total); ++removed) {
    if (removed & (1u << f)) continue;
    if (!reaches_spare(removed)) {
      best = std::min(best, __builtin_popcount(removed));
    }
  }
  return best;
}

// Minimum s-t cut capacity by enumerating node bipartitions.
inline long long min_cut_capacity(const tsvft::FlowNetwork& net) {
  long long best = std::numeric_limits<long long>::max();
  const int n = net.num_nodes;
  for (std::uint32_t side = 0; side < (1u << n); ++side) {
    if (!(side & (1u << net.source))) continue;
    if (side & (1u << net.sink)) continue;
    long long cut = 0;
    for (const auto& a : net.arcs) {
      if ((side & (1u << a.from)) && !(side & (1u << a.to))) cut += a.capacity;
    }
    best = std::min(best, cut);
  }
  return best;
}

// Exhaustive search over integral flows: maximum value, and the minimum cost
// among flows of that value.
struct BruteFlow {
  long long max_value = 0;
  long long min_cost_at_max = 0;
};

inline BruteFlow brute_force_flows(const tsvft::FlowNetwork& net) {
  const int arcs = static_cast<int>(net.arcs.size());
  std::vector<long long> flow(static_cast<size_t>(arcs), 0);
  BruteFlow result;
  bool found = false;

  std::function<void(int)> assign = [&](int i) {
    if (i == arcs) {
      // Conservation everywhere except source/sink.
      std::vector<long long> net_out(static_cast<size_t>(net.num_nodes), 0);
      for (int a = 0; a < arcs; ++a) {
        net_out[static_cast<size_t>(net.arcs[static_cast<size_t>(a)].from)] +=
            flow[static_cast<size_t>(a)];
        net_out[static_cast<size_t>(net.arcs[static_cast<size_t>(a)].to)] -=
            flow[static_cast<size_t>(a)];
      }
      for (int v = 0; v < net.num_nodes; ++v) {
        if (v == net.source || v == net.sink) continue;
        if (net_out[static_cast<size_t>(v)] != 0) return;
      }
      long long value = net_out[static_cast<size_t>(net.source)];
      long long cost = 0;
      for (int a = 0; a < arcs; ++a) {
        cost += flow[static_cast<size_t>(a)] * net.arcs[static_cast<size_t>(a)].cost;
      }
      if (!found || value > result.max_value ||
          (value == result.max_value && cost < result.min_cost_at_max)) {
        if (!found || value > result.max_value) {
          result.max_value = value;
          result.min_cost_at_max = cost;
        } else {
          result.min_cost_at_max = cost;
        }
        found = true;
      }
      return;
    }
    for (long long f = 0; f <= net.arcs[static_cast<size_t>(i)].capacity; ++f) {
      flow[static_cast<size_t>(i)] = f;
      assign(i + 1);
    }
    flow[static_cast<size_t>(i)] = 0;
  };
  assign(0);
  return result;
}

// Exhaustive optimum of (max indegree + used spares) over all candidate
// connection-edge subsets that give every f-TSV k vertex-disjoint paths.
inline int structure_optimum(const tsvft::RelGraph& g, int k) {
  const int num_edges = static_cast<int>(g.edges.size());
  int best = std::numeric_limits<int>::max();
  std::vector<char> mask(static_cast<size_t>(num_edges), 0);
  for (std::uint32_t bits = 0; bits < (1u << num_edges); ++bits) {
    for (int e = 0; e < num_edges; ++e) mask[static_cast<size_t>(e)] = (bits >> e) & 1u;

    std::vector<int> indeg(static_cast<size_t>(g.node_count()), 0);
    for (int e = 0; e < num_edges; ++e) {
      if (mask[static_cast<size_t>(e)]) {
        indeg[static_cast<size_t>(g.edges[static_cast<size_t>(e)].second)]++;
      }
    }
    int lambda1 = 0;
    int lambda2 = 0;
    for (int v = 0; v < g.node_count(); ++v) {
      lambda1 = std::max(lambda1, indeg[static_cast<size_t>(v)]);
      if (g.is_spare(v) && indeg[static_cast<size_t>(v)] > 0) lambda2++;
    }
    if (lambda1 + lambda2 >= best) continue;

    bool feasible = true;
    for (int f = 0; f < g.m && feasible; ++f) {
      feasible = max_disjoint_paths(g, f, mask, k) >= k;
    }
    if (feasible) best = lambda1 + lambda2;
  }
  return best;
}

}  // namespace oracles
