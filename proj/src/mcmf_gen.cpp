#include "tsvft/mcmf_gen.hpp"

#include <algorithm>
#include <utility>

#include "tsvft/errors.hpp"
#include "tsvft/rng.hpp"

namespace tsvft {

namespace {

long long pow_checked(long long c, int exponent, int cap, const std::string& edge_desc) {
  if (exponent > cap) {
    throw CostOverflowError("cost exponent " + std::to_string(exponent) +
                            " exceeds cap " + std::to_string(cap) + " on edge " +
                            edge_desc);
  }
  long long value = 1;
  for (int i = 0; i < exponent; ++i) value *= c;
  return value;
}

std::vector<std::vector<int>> solve_one(int f, const RelGraph& g, const SplitGraph& sg,
                                        int k, const PartialState& state,
                                        const HeuristicConfig& cfg) {
  FlowNetwork net = build_network_for(f, sg, k, state, cfg);
  FlowResult res = min_cost_max_flow(net);
  if (res.value != k) {
    throw InternalError("min-cost-max-flow found " + std::to_string(res.value) +
                        " paths for " + g.id_of(f) + ", expected " +
                        std::to_string(k));
  }
  std::vector<std::vector<int>> paths;
  for (const auto& node_path : decompose_paths(net, res)) {
    // node_path = f, f', v, v', ..., s, s', r; keep the in-vertices.
    std::vector<int> tsv_path{f};
    for (size_t i = 2; i + 1 < node_path.size(); i += 2) {
      tsv_path.push_back(node_path[i]);
    }
    paths.push_back(std::move(tsv_path));
  }
  return paths;
}

struct BestKey {
  int ports = 0;
  int used = 0;
  bool operator<(const BestKey& other) const {
    return ports != other.ports ? ports < other.ports : used < other.used;
  }
};

BestKey key_of(const PartialState& state, int k, const RelGraph& g) {
  StructureMetrics ms = metrics(state.to_structure(k), g);
  return {ms.max_mux_ports, ms.used_stsvs};
}

}  // namespace

void validate_config(const HeuristicConfig& cfg) {
  if (cfg.c < 2) throw PreconditionError("congestion base c must be >= 2");
  if (cfg.perturb_threshold < 0) {
    throw PreconditionError("perturb threshold must be >= 0");
  }
  if (cfg.exponent_cap < 0) throw PreconditionError("exponent cap must be >= 0");
  long long budget = (1LL << 62);
  long long value = 1;
  for (int i = 0; i < cfg.exponent_cap; ++i) {
    if (value > budget / cfg.c) {
      throw PreconditionError("c^exponent_cap exceeds the 64-bit cost budget");
    }
    value *= cfg.c;
  }
}

PartialState::PartialState(const RelGraph& graph) : g(&graph) {
  tc.assign(static_cast<size_t>(graph.node_count()), 0);
  spare_paths.assign(static_cast<size_t>(graph.n), 0);
  edge_refs.assign(graph.edges.size(), 0);
  routed.assign(static_cast<size_t>(graph.m), {});
}

void PartialState::add_route(int f, std::vector<std::vector<int>> paths) {
  for (const auto& path : paths) {
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      int e = g->edge_of(path[i], path[i + 1]);
      if (e < 0) throw InternalError("routed path uses a non-existent edge");
      if (edge_refs[static_cast<size_t>(e)]++ == 0) {
        tc[static_cast<size_t>(path[i + 1])]++;
      }
    }
    if (!path.empty()) spare_paths[static_cast<size_t>(path.back() - g->m)]++;
  }
  routed[static_cast<size_t>(f)] = std::move(paths);
}

void PartialState::remove_route(int f) {
  for (const auto& path : routed[static_cast<size_t>(f)]) {
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      int e = g->edge_of(path[i], path[i + 1]);
      if (--edge_refs[static_cast<size_t>(e)] == 0) {
        tc[static_cast<size_t>(path[i + 1])]--;
      }
    }
    if (!path.empty()) spare_paths[static_cast<size_t>(path.back() - g->m)]--;
  }
  routed[static_cast<size_t>(f)].clear();
}

void PartialState::recompute_from_scratch() {
  std::vector<std::vector<std::vector<int>>> saved = std::move(routed);
  tc.assign(tc.size(), 0);
  spare_paths.assign(spare_paths.size(), 0);
  edge_refs.assign(edge_refs.size(), 0);
  routed.assign(saved.size(), {});
  for (int f = 0; f < g->m; ++f) {
    if (!saved[static_cast<size_t>(f)].empty()) {
      add_route(f, std::move(saved[static_cast<size_t>(f)]));
    }
  }
}

ToleranceStructure PartialState::to_structure(int k) const {
  ToleranceStructure st;
  st.k = k;
  for (int f = 0; f < g->m; ++f) {
    auto& out = st.paths[g->id_of(f)];
    for (const auto& path : routed[static_cast<size_t>(f)]) {
      std::vector<std::string> ids;
      ids.reserve(path.size());
      for (int v : path) ids.push_back(g->id_of(v));
      out.push_back(std::move(ids));
    }
  }
  return st;
}

FlowNetwork build_network_for(int f, const SplitGraph& sg, int k,
                              const PartialState& state, const HeuristicConfig& cfg) {
  validate_config(cfg);
  const RelGraph& g = *state.g;
  if (f < 0 || f >= g.m) throw PreconditionError("not a functional TSV index");
  if (k < 1) throw PreconditionError("k must be >= 1");

  const int base = sg.base_count();
  FlowNetwork net;
  net.num_nodes = 2 * base + 1;
  net.source = f;
  net.sink = 2 * base;

  for (int u = 0; u < base; ++u) {
    long long cost = 0;
    if (u >= sg.m) {
      int j = u - sg.m;
      cost = state.spare_used(j)
                 ? 0
                 : pow_checked(cfg.c, k, cfg.exponent_cap,
                               sg.ids[static_cast<size_t>(u)] + " -> " +
                                   sg.ids[static_cast<size_t>(u)] + "'");
    }
    net.add_arc(u, base + u, u == f ? k : 1, cost);
  }
  for (size_t e = 0; e < g.edges.size(); ++e) {
    auto [u, v] = g.edges[e];
    long long cost = 0;
    if (!state.edge_connected(static_cast<int>(e))) {
      cost = pow_checked(cfg.c, state.tc[static_cast<size_t>(v)], cfg.exponent_cap,
                         g.id_of(u) + " -> " + g.id_of(v));
    }
    net.add_arc(base + u, v, 1, cost);
  }
  for (int j = 0; j < sg.n; ++j) {
    net.add_arc(base + sg.m + j, net.sink, 1, 0);
  }
  return net;
}

ToleranceStructure generate(const RelGraph& g, int k, const HeuristicConfig& cfg) {
  validate_config(cfg);
  if (k < 1 || k > g.n) {
    throw PreconditionError("k must lie in [1, n]; got " + std::to_string(k));
  }
  SplitGraph sg = split(g);
  PartialState state(g);
  for (int f = 0; f < g.m; ++f) {
    state.add_route(f, solve_one(f, g, sg, k, state, cfg));
  }
  ToleranceStructure st = state.to_structure(k);
  if (cfg.perturb_threshold == 0) return st;
  return perturb(st, g, cfg);
}

ToleranceStructure perturb(const ToleranceStructure& st, const RelGraph& g,
                           const HeuristicConfig& cfg) {
  validate_config(cfg);
  if (cfg.perturb_threshold == 0 || g.m == 0 || st.k < 1) return st;

  SplitGraph sg = split(g);
  PartialState state(g);
  for (int f = 0; f < g.m; ++f) {
    auto it = st.paths.find(g.id_of(f));
    if (it == st.paths.end()) continue;
    std::vector<std::vector<int>> paths;
    for (const auto& ids : it->second) {
      std::vector<int> path;
      path.reserve(ids.size());
      for (const auto& id : ids) {
        int v = g.node_of(id);
        if (v < 0) throw PreconditionError("structure references unknown TSV " + id);
        path.push_back(v);
      }
      paths.push_back(std::move(path));
    }
    state.add_route(f, std::move(paths));
  }

  ToleranceStructure best = st;
  BestKey best_key = key_of(state, st.k, g);
  SplitMix64 rng(cfg.seed);
  int stale = 0;
  while (stale < cfg.perturb_threshold) {
    int f = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.m)));
    state.remove_route(f);
    state.recompute_from_scratch();
    state.add_route(f, solve_one(f, g, sg, st.k, state, cfg));
    BestKey current = key_of(state, st.k, g);
    if (current.ports < best_key.ports) {
      stale = 0;
    } else {
      ++stale;
    }
    if (current < best_key) {
      best_key = current;
      best = state.to_structure(st.k);
    }
  }
  return best;
}

}  // namespace tsvft
