#pragma once

// Shared fixtures: the two worked TSV groups used across the test suites.
// Edge sets are the ones implied by the listed replacing paths; fig4 adds
// the two extra relations confirmed by the cost walkthrough ((f3,s2) and
// (f4,s1)).

#include <string>
#include <utility>
#include <vector>

#include "tsvft/relgraph.hpp"
#include "tsvft/rng.hpp"
#include "tsvft/structure.hpp"

namespace fixtures {

// Four f-TSVs, two spares; every f-TSV can reach both spares directly and
// the chain relations from the worked 2-fault structure are present.
inline tsvft::RelGraph fig1_graph() {
  return tsvft::build_from_edges(
      {"f1", "f2", "f3", "f4"}, {"s1", "s2"},
      {{"f1", "f2"}, {"f1", "f3"}, {"f1", "s1"}, {"f1", "s2"},
       {"f2", "f3"}, {"f2", "f4"}, {"f2", "s1"}, {"f2", "s2"},
       {"f3", "f4"}, {"f3", "s1"}, {"f3", "s2"},
       {"f4", "s1"}, {"f4", "s2"}});
}

// The regular chain structure on fig1: 3-port and 2-port multiplexers only.
inline tsvft::ToleranceStructure fig1_chain_structure() {
  tsvft::ToleranceStructure st;
  st.k = 2;
  st.paths["f1"] = {{"f1", "f3", "s1"}, {"f1", "f2", "f4", "s2"}};
  st.paths["f2"] = {{"f2", "f3", "s1"}, {"f2", "f4", "s2"}};
  st.paths["f3"] = {{"f3", "s1"}, {"f3", "f4", "s2"}};
  st.paths["f4"] = {{"f4", "s1"}, {"f4", "s2"}};
  return st;
}

// Every f-TSV wired straight to both spares: 4-port multiplexers at spares.
inline tsvft::ToleranceStructure fig1_alltoall_structure() {
  tsvft::ToleranceStructure st;
  st.k = 2;
  for (const char* f : {"f1", "f2", "f3", "f4"}) {
    st.paths[f] = {{f, "s1"}, {f, "s2"}};
  }
  return st;
}

// Five f-TSVs, four spares (s4 unreachable); the group where fixed-k
// grouping fails but a 2-fault structure over three spares exists.
inline tsvft::RelGraph fig3_graph() {
  return tsvft::build_from_edges(
      {"f1", "f2", "f3", "f4", "f5"}, {"s1", "s2", "s3", "s4"},
      {{"f1", "s1"}, {"f1", "f2"}, {"f2", "f3"}, {"f2", "f5"},
       {"f3", "f4"}, {"f3", "s1"}, {"f4", "s2"}, {"f4", "f3"},
       {"f5", "f1"}, {"f5", "s3"}});
}

// The worked 2-fault structure on fig3 (uses s1, s2, s3).
inline tsvft::ToleranceStructure fig3_structure() {
  tsvft::ToleranceStructure st;
  st.k = 2;
  st.paths["f1"] = {{"f1", "s1"}, {"f1", "f2", "f3", "f4", "s2"}};
  st.paths["f2"] = {{"f2", "f5", "f1", "s1"}, {"f2", "f3", "f4", "s2"}};
  st.paths["f3"] = {{"f3", "s1"}, {"f3", "f4", "s2"}};
  st.paths["f4"] = {{"f4", "f3", "s1"}, {"f4", "s2"}};
  st.paths["f5"] = {{"f5", "f1", "s1"}, {"f5", "s3"}};
  return st;
}

// fig3 plus the relations (f3,s2) and (f4,s1), matching the cost worked
// example.
inline tsvft::RelGraph fig4_graph() {
  return tsvft::build_from_edges(
      {"f1", "f2", "f3", "f4", "f5"}, {"s1", "s2", "s3", "s4"},
      {{"f1", "s1"}, {"f1", "f2"}, {"f2", "f3"}, {"f2", "f5"},
       {"f3", "f4"}, {"f3", "s1"}, {"f4", "s2"}, {"f4", "f3"},
       {"f5", "f1"}, {"f5", "s3"}, {"f3", "s2"}, {"f4", "s1"}});
}

// Seeded random replaceable-relation graph for the oracle suites.
inline tsvft::RelGraph random_graph(tsvft::SplitMix64& rng, int max_m, int max_n,
                                    int max_edges = -1) {
  int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_m)));
  int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n)));
  double density = 0.25 + 0.5 * rng.uniform01();
  std::vector<std::string> f_ids, s_ids;
  for (int i = 0; i < m; ++i) f_ids.push_back("f" + std::to_string(i + 1));
  for (int j = 0; j < n; ++j) s_ids.push_back("s" + std::to_string(j + 1));
  std::vector<std::pair<std::string, std::string>> edges;
  for (int u = 0; u < m; ++u) {
    for (int v = 0; v < m + n; ++v) {
      if (v == u) continue;
      if (rng.uniform01() < density) {
        edges.emplace_back(f_ids[static_cast<size_t>(u)],
                           v < m ? f_ids[static_cast<size_t>(v)]
                                 : s_ids[static_cast<size_t>(v - m)]);
      }
    }
  }
  if (max_edges >= 0 && static_cast<int>(edges.size()) > max_edges) {
    // Deterministic thinning: drop uniformly chosen edges until in budget.
    while (static_cast<int>(edges.size()) > max_edges) {
      size_t drop = static_cast<size_t>(rng.below(edges.size()));
      edges.erase(edges.begin() + static_cast<long>(drop));
    }
  }
  return tsvft::build_from_edges(f_ids, s_ids, edges);
}

}  // namespace fixtures
