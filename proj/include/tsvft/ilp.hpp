#pragma once

#include <optional>
#include <string>

#include "tsvft/relgraph.hpp"
#include "tsvft/structure.hpp"

namespace tsvft {

// 0/1 program for adaptive structure generation over the split graph.
// Variables: x (per edge, source, sink commodity), v (per source/sink pair),
// d (per edge), plus the two objective integers. The model is kept symbolic
// for dumping and counting; solving works on the underlying graph.
struct IlpModel {
  SplitGraph sg;
  int k = 0;

  long long num_split_edges() const { return sg.base_count(); }
  long long num_edges() const {
    return static_cast<long long>(sg.split_edges.size() + sg.replace_edges.size());
  }
  long long x_count() const {
    return static_cast<long long>(sg.m) * sg.n * num_edges();
  }
  long long v_count() const { return static_cast<long long>(sg.m) * sg.n; }
  long long d_count() const { return num_edges(); }
};

// Errors when k is outside [1, n].
IlpModel build_adaptive_model(const SplitGraph& sg, int k);

// Human-readable LP-format text (objective + constraints) for cross-checking
// against external solvers.
std::string dump_lp(const IlpModel& model);

enum class SolveStatus { Optimal, Timeout, Infeasible };

struct SolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<ToleranceStructure> structure;
  int lambda1 = 0;  // max indegree
  int lambda2 = 0;  // used spares
  double elapsed_s = 0.0;

  int objective() const { return lambda1 + lambda2; }
};

// Certified-optimal solve of the adaptive model, or Timeout with no
// structure. Infeasible only occurs when k exceeds the group's true K.
SolveOutcome solve(const IlpModel& model, double timeout_s = 3600.0);

// Prior-work baseline: iterate over all C(n, k) spare subsets, require every
// f-TSV to reach all k chosen spares, and minimize the maximum indegree.
SolveOutcome solve_fixed_k_baseline(const SplitGraph& sg, int k,
                                    double timeout_s = 3600.0);

}  // namespace tsvft
