#pragma once

#include <map>
#include <string>

#include "tsvft/relgraph.hpp"

namespace tsvft {

// Per-f-TSV disjoint-path counts and the group's maximum tolerant faults.
// k is the minimum over all nd values (0 when some f-TSV reaches no spare).
struct ToleranceReport {
  std::map<std::string, int> nd;
  int k = 0;
};

// Maximum number of paths from f to spare TSVs that are vertex-disjoint
// except at f itself. Computed as max-flow on the split graph from f's
// out-vertex to a super-sink behind all split spare vertices.
int disjoint_path_count(const RelGraph& g, const std::string& f);

// OpenMP-parallel over f-TSVs, merged in input order.
ToleranceReport max_tolerant_faults(const RelGraph& g);

// Straightforward serial loop, kept as the reference the parallel kernel is
// tested against.
ToleranceReport max_tolerant_faults_serial(const RelGraph& g);

}  // namespace tsvft
