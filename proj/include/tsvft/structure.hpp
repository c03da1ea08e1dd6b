#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tsvft/relgraph.hpp"

namespace tsvft {

// A generated fault-tolerance structure: k replacing paths per f-TSV. Each
// path starts at its f-TSV, ends at a spare, and a given f-TSV's paths are
// vertex-disjoint except at the source. The TSV-connection set is derived
// from the paths.
struct ToleranceStructure {
  int k = 0;
  std::map<std::string, std::vector<std::vector<std::string>>> paths;
};

// Directed TSV pairs traversed by any path. An edge used by paths of several
// f-TSVs counts once.
std::set<std::pair<std::string, std::string>> connections(const ToleranceStructure& st);

struct StructureMetrics {
  std::map<std::string, int> indegree;
  int max_indegree = 0;   // lambda1
  int used_stsvs = 0;     // lambda2: spares that terminate some path
  std::map<std::string, int> mux_ports;
  int max_mux_ports = 0;
};

// Mux-port convention: a functional TSV carries its own net signal, adding
// one port on top of its indegree; a spare does not. Zero-indegree TSVs have
// no multiplexer (reported as 1 port for functionals, 0 for spares).
StructureMetrics metrics(const ToleranceStructure& st, const RelGraph& g);

struct Violation {
  std::string f_tsv;
  std::string rule;
  std::string detail;
};

struct VerifyResult {
  bool accepted = true;
  std::vector<Violation> violations;
};

// Accepts iff every f-TSV has exactly expected_k paths satisfying the
// structure invariants against g. Failures are reported as diagnostics,
// never thrown.
VerifyResult verify(const ToleranceStructure& st, const RelGraph& g, int expected_k);

struct FaultSet {
  std::set<std::string> faulty;  // functional and/or spare ids
};

struct RepairResult {
  bool repairable = false;
  // One rerouting path per faulty f-TSV, inside the connection subgraph.
  std::map<std::string, std::vector<std::string>> assignment;
};

// True iff pairwise vertex-disjoint paths exist inside the structure's
// connection subgraph, one per faulty f-TSV, each ending at a distinct
// non-faulty spare; faulty TSVs may appear only as the source of their own
// path. Decided by a single multi-source max-flow with unit vertex
// capacities.
RepairResult repairable(const ToleranceStructure& st, const RelGraph& g,
                        const FaultSet& faults);

struct InjectionReport {
  long long enumerated = 0;
  long long repairable_count = 0;
  double fraction = 1.0;
  // First fault set (sizes ascending, then lexicographic by f-TSV input
  // order) that is not repairable.
  std::optional<std::vector<std::string>> first_counterexample;
};

// Enumerates every f-TSV fault set of size <= up_to. Throws BudgetError when
// the enumeration would exceed `budget` sets.
InjectionReport exhaustive_injection(const ToleranceStructure& st, const RelGraph& g,
                                     int up_to, long long budget = 1000000);

// Serial reference for the OpenMP enumeration above.
InjectionReport exhaustive_injection_serial(const ToleranceStructure& st,
                                            const RelGraph& g, int up_to,
                                            long long budget = 1000000);

}  // namespace tsvft
