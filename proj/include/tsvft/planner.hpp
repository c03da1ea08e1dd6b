#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsvft/relgraph.hpp"
#include "tsvft/structure.hpp"
#include "tsvft/yield.hpp"

namespace tsvft {

struct PlanParams {
  double p = 0.001;
  double target_yield = 0.997;
  double margin_um = 0.0;
  std::optional<int> kcap;     // cap on the tolerated faults per group
  std::string method = "mcmf"; // final generation engine: "ilp" or "mcmf"
};

// Chip-scope layout plus the planning parameters carried by the instance
// file.
struct PlanInstance {
  double pitch_um = 5.0;
  std::vector<LayoutFtsv> f_tsvs;
  std::vector<LayoutSite> s_sites;
  PlanParams params;
};

// Knobs that are not part of the instance file: seeds, heuristic settings,
// the ILP budget before falling back to the heuristic, and how final group
// yields are reported.
struct PlanConfig {
  std::uint64_t seed = 0;
  long long c = 3;
  int perturb_threshold = 50;
  int exponent_cap = 18;
  double ilp_timeout_s = 5.0;
  // "auto" reports exact yields where enumerable (<= 20 TSVs) and binomial
  // beyond; "binomial" and "mc" force one estimator.
  std::string final_yield_mode = "auto";
  long long mc_samples = 100000;
};

struct PlanGroup {
  int id = 0;
  std::vector<std::string> f_ids;
  std::vector<std::string> allocated_stsvs;
  int k_max = 0;
  int k_used = 0;
  ToleranceStructure structure;
  StructureMetrics group_metrics;
  double group_yield = 1.0;
  std::string engine;  // "mcmf", "ilp", "ilp_fallback_mcmf", "none", ...
};

struct PlanTotals {
  int num_groups = 0;
  int total_stsvs = 0;
  int max_mux_ports = 0;
  double tsv_yield = 1.0;
};

struct PlanResult {
  std::vector<PlanGroup> groups;
  PlanTotals totals;
  int iterations = 0;  // bipartitions performed
};

// Candidate graph of one group: its f-TSVs plus every unclaimed site covered
// by at least one member's margin-expanded bbox, with edges from layout
// containment.
RelGraph candidate_stsvs(const std::vector<LayoutFtsv>& group_ftsvs,
                         const std::vector<LayoutSite>& sites, double margin);

// Min-cut bipartition of a group's f-TSVs (FM refinement over a weighted
// graph: shared candidate sites plus one for mutual replaceability), with
// both sides holding 45-55% of the vertices, or the closest achievable split
// for small groups. Errors on singleton groups.
std::pair<std::vector<int>, std::vector<int>> bipartition(
    const std::vector<int>& members, const PlanInstance& instance, double margin);

// Top-down adaptive planning: iteratively bipartition the worst-yield group,
// allocate candidate spares, and stop once the target TSV yield is met.
// Throws PlanInfeasibleError when the target is unreachable.
PlanResult plan(const PlanInstance& instance, const PlanConfig& config);

// Prior-work baseline: recursively bipartition until every group has at
// least k unclaimed sites replaceable by every member, allocate exactly k
// shared sites per group, generate fixed-k structures, and keep partitioning
// the worst group until the target yield is met.
PlanResult plan_fixed_k(const PlanInstance& instance, int k, const PlanConfig& config);

}  // namespace tsvft
