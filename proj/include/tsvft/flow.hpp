#pragma once

#include <cstdint>
#include <vector>

namespace tsvft {

// Capacitated, costed directed network. Capacities and costs are integral;
// costs must be non-negative. Engines never mutate the network, so parallel
// solves on distinct (or even the same) instance are safe.
struct FlowNetwork {
  int num_nodes = 0;
  struct Arc {
    int from = 0;
    int to = 0;
    long long capacity = 0;
    long long cost = 0;
  };
  std::vector<Arc> arcs;
  int source = -1;
  int sink = -1;

  int add_node() { return num_nodes++; }
  int add_arc(int from, int to, long long capacity, long long cost = 0) {
    arcs.push_back({from, to, capacity, cost});
    return static_cast<int>(arcs.size()) - 1;
  }
};

struct FlowResult {
  long long value = 0;
  std::vector<long long> arc_flows;  // parallel to FlowNetwork::arcs
  long long total_cost = 0;
};

// Maximum integral flow (Dinic). Deterministic for a fixed arc ordering.
FlowResult max_flow(const FlowNetwork& net);

// Among all maximum flows, one of minimum total cost. Successive shortest
// paths with potentials; ties between equal-length paths resolve to the
// lowest node index. Throws CostOverflowError instead of wrapping.
FlowResult min_cost_max_flow(const FlowNetwork& net);

// Splits a flow into `value` arc-disjoint source->sink node paths covering
// exactly the flow-carrying arcs. Where several decompositions exist the
// walk picks the lowest next node index (then lowest arc index). Throws
// InternalError if the flow is not decomposable.
std::vector<std::vector<int>> decompose_paths(const FlowNetwork& net,
                                              const FlowResult& result);

}  // namespace tsvft
