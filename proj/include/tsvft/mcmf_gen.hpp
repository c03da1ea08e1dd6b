#pragma once

#include <cstdint>
#include <vector>

#include "tsvft/flow.hpp"
#include "tsvft/relgraph.hpp"
#include "tsvft/structure.hpp"

namespace tsvft {

struct HeuristicConfig {
  long long c = 3;            // base of the exponential congestion costs
  int perturb_threshold = 50; // stale iterations before perturbation stops
  std::uint64_t seed = 0;
  int exponent_cap = 18;      // largest exponent before a hard overflow error
};

// Validates c >= 2, perturb_threshold >= 0, and that c^exponent_cap fits the
// 64-bit cost budget. Throws PreconditionError otherwise.
void validate_config(const HeuristicConfig& cfg);

// Routing state accumulated while f-TSVs are solved one by one. tc[v] counts
// the distinct connection edges ending at v; an edge stays a connection
// while any routed path traverses it (reference counted).
struct PartialState {
  explicit PartialState(const RelGraph& g);

  const RelGraph* g = nullptr;
  std::vector<int> tc;                              // per node
  std::vector<int> spare_paths;                     // per spare: #paths ending there
  std::vector<int> edge_refs;                       // per relation edge
  std::vector<std::vector<std::vector<int>>> routed;  // per f-TSV: k node paths

  bool spare_used(int spare_offset) const { return spare_paths[static_cast<size_t>(spare_offset)] > 0; }
  bool edge_connected(int edge) const { return edge_refs[static_cast<size_t>(edge)] > 0; }
  void add_route(int f, std::vector<std::vector<int>> paths);
  void remove_route(int f);
  void recompute_from_scratch();

  ToleranceStructure to_structure(int k) const;
};

// Network for routing f: the split graph plus a sink behind every split
// spare vertex. The arc from f to its split vertex carries capacity k; all
// other arcs are unit. Costs follow the congestion rules: 0 on f-TSV split
// edges and already-used spares/connections, c^k on fresh spares, c^tc[v] on
// fresh replace edges. Throws CostOverflowError, naming the edge, when an
// exponent exceeds cfg.exponent_cap.
FlowNetwork build_network_for(int f, const SplitGraph& sg, int k,
                              const PartialState& state, const HeuristicConfig& cfg);

// Routes every f-TSV in input order via min-cost-max-flow, then perturbs.
// Requires k <= the group's maximum tolerant faults (checked by callers via
// the tolerance module; violations surface as InternalError).
ToleranceStructure generate(const RelGraph& g, int k, const HeuristicConfig& cfg);

// Random re-routing loop: pick a seeded-random f-TSV, rebuild costs from the
// other f-TSVs' paths, re-solve, and keep the best structure seen by
// (max_mux_ports, used_stsvs). Stops once max_mux_ports has not improved for
// cfg.perturb_threshold consecutive iterations.
ToleranceStructure perturb(const ToleranceStructure& st, const RelGraph& g,
                           const HeuristicConfig& cfg);

}  // namespace tsvft
