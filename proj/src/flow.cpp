#include "tsvft/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "tsvft/errors.hpp"

namespace tsvft {

namespace {

constexpr long long kCostLimit = std::numeric_limits<long long>::max() / 4;

void validate(const FlowNetwork& net) {
  if (net.num_nodes <= 0) throw PreconditionError("flow network has no nodes");
  if (net.source < 0 || net.source >= net.num_nodes || net.sink < 0 ||
      net.sink >= net.num_nodes) {
    throw PreconditionError("flow network source/sink out of range");
  }
  if (net.source == net.sink) throw PreconditionError("source equals sink");
  for (const auto& a : net.arcs) {
    if (a.from < 0 || a.from >= net.num_nodes || a.to < 0 || a.to >= net.num_nodes) {
      throw PreconditionError("arc endpoint out of range");
    }
    if (a.capacity < 0) throw PreconditionError("negative arc capacity");
    if (a.cost < 0) throw PreconditionError("negative arc cost");
    if (a.cost > kCostLimit) throw CostOverflowError("arc cost exceeds 64-bit budget");
  }
}

// Paired residual arcs: forward arc 2i, reverse arc 2i+1.
struct Residual {
  std::vector<int> to;
  std::vector<long long> cap;
  std::vector<long long> cost;
  std::vector<std::vector<int>> adj;

  explicit Residual(const FlowNetwork& net) {
    adj.assign(static_cast<size_t>(net.num_nodes), {});
    to.reserve(net.arcs.size() * 2);
    cap.reserve(net.arcs.size() * 2);
    cost.reserve(net.arcs.size() * 2);
    for (const auto& a : net.arcs) {
      adj[static_cast<size_t>(a.from)].push_back(static_cast<int>(to.size()));
      to.push_back(a.to);
      cap.push_back(a.capacity);
      cost.push_back(a.cost);
      adj[static_cast<size_t>(a.to)].push_back(static_cast<int>(to.size()));
      to.push_back(a.from);
      cap.push_back(0);
      cost.push_back(-a.cost);
    }
  }

  long long flow_of(int arc_index) const {
    return cap[static_cast<size_t>(2 * arc_index + 1)];
  }
};

// Removes directed cycles from the flow support. Costs are non-negative and
// the flow is already cost-minimal, so any support cycle has zero cost and
// cancelling it changes neither value nor total cost.
void cancel_support_cycles(const FlowNetwork& net, std::vector<long long>& flows) {
  const int n = net.num_nodes;
  while (true) {
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (int e = 0; e < static_cast<int>(net.arcs.size()); ++e) {
      if (flows[static_cast<size_t>(e)] > 0) {
        adj[static_cast<size_t>(net.arcs[static_cast<size_t>(e)].from)].push_back(e);
      }
    }
    std::vector<int> color(static_cast<size_t>(n), 0);  // 0 white, 1 gray, 2 black
    std::vector<int> via_arc(static_cast<size_t>(n), -1);
    std::vector<int> cycle;

    // Iterative DFS looking for a gray-to-gray arc.
    std::vector<std::pair<int, size_t>> stack;
    for (int start = 0; start < n && cycle.empty(); ++start) {
      if (color[static_cast<size_t>(start)] != 0) continue;
      stack.clear();
      stack.emplace_back(start, 0);
      color[static_cast<size_t>(start)] = 1;
      while (!stack.empty() && cycle.empty()) {
        auto& [u, it] = stack.back();
        if (it < adj[static_cast<size_t>(u)].size()) {
          int e = adj[static_cast<size_t>(u)][it++];
          int v = net.arcs[static_cast<size_t>(e)].to;
          if (color[static_cast<size_t>(v)] == 0) {
            color[static_cast<size_t>(v)] = 1;
            via_arc[static_cast<size_t>(v)] = e;
            stack.emplace_back(v, 0);
          } else if (color[static_cast<size_t>(v)] == 1) {
            // Found a cycle v -> ... -> u -> v.
            cycle.push_back(e);
            int w = u;
            while (w != v) {
              int pe = via_arc[static_cast<size_t>(w)];
              cycle.push_back(pe);
              w = net.arcs[static_cast<size_t>(pe)].from;
            }
          }
        } else {
          color[static_cast<size_t>(u)] = 2;
          stack.pop_back();
        }
      }
    }
    if (cycle.empty()) return;
    long long reduce = std::numeric_limits<long long>::max();
    for (int e : cycle) reduce = std::min(reduce, flows[static_cast<size_t>(e)]);
    for (int e : cycle) flows[static_cast<size_t>(e)] -= reduce;
  }
}

FlowResult finish(const FlowNetwork& net, const Residual& r) {
  FlowResult res;
  res.arc_flows.resize(net.arcs.size());
  for (int e = 0; e < static_cast<int>(net.arcs.size()); ++e) {
    res.arc_flows[static_cast<size_t>(e)] = r.flow_of(e);
  }
  cancel_support_cycles(net, res.arc_flows);
  long long value = 0;
  long long cost = 0;
  for (int e = 0; e < static_cast<int>(net.arcs.size()); ++e) {
    const auto& a = net.arcs[static_cast<size_t>(e)];
    long long f = res.arc_flows[static_cast<size_t>(e)];
    if (a.from == net.source) value += f;
    if (a.to == net.source) value -= f;
    if (f > 0 && a.cost > 0 && f > kCostLimit / a.cost) {
      throw CostOverflowError("total cost exceeds 64-bit budget");
    }
    long long add = f * a.cost;
    if (cost > kCostLimit - add) {
      throw CostOverflowError("total cost exceeds 64-bit budget");
    }
    cost += add;
  }
  res.value = value;
  res.total_cost = cost;
  return res;
}

}  // namespace

FlowResult max_flow(const FlowNetwork& net) {
  validate(net);
  Residual r(net);
  const int n = net.num_nodes;
  std::vector<int> level(static_cast<size_t>(n));
  std::vector<size_t> iter(static_cast<size_t>(n));

  auto bfs = [&]() {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[static_cast<size_t>(net.source)] = 0;
    q.push(net.source);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e : r.adj[static_cast<size_t>(u)]) {
        int v = r.to[static_cast<size_t>(e)];
        if (r.cap[static_cast<size_t>(e)] > 0 && level[static_cast<size_t>(v)] < 0) {
          level[static_cast<size_t>(v)] = level[static_cast<size_t>(u)] + 1;
          q.push(v);
        }
      }
    }
    return level[static_cast<size_t>(net.sink)] >= 0;
  };

  auto dfs = [&](auto&& self, int u, long long limit) -> long long {
    if (u == net.sink) return limit;
    for (size_t& i = iter[static_cast<size_t>(u)];
         i < r.adj[static_cast<size_t>(u)].size(); ++i) {
      int e = r.adj[static_cast<size_t>(u)][i];
      int v = r.to[static_cast<size_t>(e)];
      if (r.cap[static_cast<size_t>(e)] <= 0 ||
          level[static_cast<size_t>(v)] != level[static_cast<size_t>(u)] + 1) {
        continue;
      }
      long long pushed =
          self(self, v, std::min(limit, r.cap[static_cast<size_t>(e)]));
      if (pushed > 0) {
        r.cap[static_cast<size_t>(e)] -= pushed;
        r.cap[static_cast<size_t>(e ^ 1)] += pushed;
        return pushed;
      }
    }
    return 0;
  };

  while (bfs()) {
    std::fill(iter.begin(), iter.end(), 0);
    while (dfs(dfs, net.source, std::numeric_limits<long long>::max()) > 0) {
    }
  }
  return finish(net, r);
}

FlowResult min_cost_max_flow(const FlowNetwork& net) {
  validate(net);
  Residual r(net);
  const int n = net.num_nodes;
  const long long inf = std::numeric_limits<long long>::max();

  std::vector<long long> pot(static_cast<size_t>(n), 0);  // costs are non-negative
  std::vector<long long> dist(static_cast<size_t>(n));
  std::vector<int> parent_arc(static_cast<size_t>(n));

  while (true) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    dist[static_cast<size_t>(net.source)] = 0;
    // (distance, node) keyed heap: ties pop the lowest node index first.
    std::priority_queue<std::pair<long long, int>,
                        std::vector<std::pair<long long, int>>,
                        std::greater<>>
        heap;
    heap.emplace(0, net.source);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[static_cast<size_t>(u)]) continue;
      for (int e : r.adj[static_cast<size_t>(u)]) {
        if (r.cap[static_cast<size_t>(e)] <= 0) continue;
        int v = r.to[static_cast<size_t>(e)];
        long long rc = r.cost[static_cast<size_t>(e)] + pot[static_cast<size_t>(u)] -
                       pot[static_cast<size_t>(v)];
        if (d > kCostLimit - rc) {
          throw CostOverflowError("path cost exceeds 64-bit budget");
        }
        long long nd = d + rc;
        if (nd < dist[static_cast<size_t>(v)]) {
          dist[static_cast<size_t>(v)] = nd;
          parent_arc[static_cast<size_t>(v)] = e;
          heap.emplace(nd, v);
        }
      }
    }
    if (dist[static_cast<size_t>(net.sink)] == inf) break;
    for (int v = 0; v < n; ++v) {
      if (dist[static_cast<size_t>(v)] < inf) {
        pot[static_cast<size_t>(v)] += dist[static_cast<size_t>(v)];
      }
    }
    long long bottleneck = inf;
    for (int v = net.sink; v != net.source;) {
      int e = parent_arc[static_cast<size_t>(v)];
      bottleneck = std::min(bottleneck, r.cap[static_cast<size_t>(e)]);
      v = r.to[static_cast<size_t>(e ^ 1)];
    }
    for (int v = net.sink; v != net.source;) {
      int e = parent_arc[static_cast<size_t>(v)];
      r.cap[static_cast<size_t>(e)] -= bottleneck;
      r.cap[static_cast<size_t>(e ^ 1)] += bottleneck;
      v = r.to[static_cast<size_t>(e ^ 1)];
    }
  }
  return finish(net, r);
}

std::vector<std::vector<int>> decompose_paths(const FlowNetwork& net,
                                              const FlowResult& result) {
  if (result.arc_flows.size() != net.arcs.size()) {
    throw PreconditionError("flow result does not match network");
  }
  std::vector<long long> remaining = result.arc_flows;
  long long total_steps = 0;
  for (long long f : remaining) {
    if (f < 0) throw PreconditionError("negative arc flow");
    total_steps += f;
  }

  // Per-node outgoing arc ids sorted by (target node, arc id) so every walk
  // step picks the lowest-index continuation.
  std::vector<std::vector<int>> out(static_cast<size_t>(net.num_nodes));
  for (int e = 0; e < static_cast<int>(net.arcs.size()); ++e) {
    if (remaining[static_cast<size_t>(e)] > 0) {
      out[static_cast<size_t>(net.arcs[static_cast<size_t>(e)].from)].push_back(e);
    }
  }
  for (auto& v : out) {
    std::sort(v.begin(), v.end(), [&](int a, int b) {
      if (net.arcs[static_cast<size_t>(a)].to != net.arcs[static_cast<size_t>(b)].to) {
        return net.arcs[static_cast<size_t>(a)].to < net.arcs[static_cast<size_t>(b)].to;
      }
      return a < b;
    });
  }

  std::vector<std::vector<int>> paths;
  for (long long p = 0; p < result.value; ++p) {
    std::vector<int> path{net.source};
    long long guard = 0;
    int u = net.source;
    while (u != net.sink) {
      if (++guard > total_steps + 1) {
        throw InternalError("flow not decomposable into source-sink paths");
      }
      int chosen = -1;
      for (int e : out[static_cast<size_t>(u)]) {
        if (remaining[static_cast<size_t>(e)] > 0) {
          chosen = e;
          break;
        }
      }
      if (chosen < 0) {
        throw InternalError("flow not decomposable into source-sink paths");
      }
      remaining[static_cast<size_t>(chosen)]--;
      u = net.arcs[static_cast<size_t>(chosen)].to;
      path.push_back(u);
    }
    paths.push_back(std::move(path));
  }
  for (long long f : remaining) {
    if (f != 0) throw InternalError("flow decomposition left residual flow");
  }
  return paths;
}

}  // namespace tsvft
