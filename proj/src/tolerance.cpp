#include "tsvft/tolerance.hpp"

#include <algorithm>

#include "tsvft/errors.hpp"
#include "tsvft/flow.hpp"

namespace tsvft {

namespace {

// Unit-capacity network realizing the vertex-disjoint path count for f.
// Starting at f's out-vertex bypasses f's own split edge, so paths may share
// f and nothing else.
FlowNetwork nd_network(const RelGraph& g, int f) {
  const int base = g.node_count();
  FlowNetwork net;
  net.num_nodes = 2 * base + 1;
  net.source = base + f;
  net.sink = 2 * base;
  for (int u = 0; u < base; ++u) {
    if (u != f) net.add_arc(u, base + u, 1);
  }
  for (const auto& [u, v] : g.edges) {
    net.add_arc(base + u, v, 1);
  }
  for (int j = 0; j < g.n; ++j) {
    net.add_arc(base + g.m + j, net.sink, 1);
  }
  return net;
}

int nd_of(const RelGraph& g, int f) {
  return static_cast<int>(max_flow(nd_network(g, f)).value);
}

ToleranceReport assemble(const RelGraph& g, const std::vector<int>& nd) {
  ToleranceReport report;
  report.k = g.m > 0 ? *std::min_element(nd.begin(), nd.end()) : 0;
  for (int f = 0; f < g.m; ++f) {
    report.nd[g.id_of(f)] = nd[static_cast<size_t>(f)];
  }
  return report;
}

}  // namespace

int disjoint_path_count(const RelGraph& g, const std::string& f) {
  int v = g.node_of(f);
  if (v < 0 || !g.is_functional(v)) {
    throw PreconditionError(f + " is not a functional TSV of this group");
  }
  return nd_of(g, v);
}

ToleranceReport max_tolerant_faults(const RelGraph& g) {
  std::vector<int> nd(static_cast<size_t>(g.m), 0);
#pragma omp parallel for schedule(dynamic)
  for (int f = 0; f < g.m; ++f) {
    nd[static_cast<size_t>(f)] = nd_of(g, f);
  }
  return assemble(g, nd);
}

ToleranceReport max_tolerant_faults_serial(const RelGraph& g) {
  std::vector<int> nd(static_cast<size_t>(g.m), 0);
  for (int f = 0; f < g.m; ++f) {
    nd[static_cast<size_t>(f)] = nd_of(g, f);
  }
  return assemble(g, nd);
}

}  // namespace tsvft
