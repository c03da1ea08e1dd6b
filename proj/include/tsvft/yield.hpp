#pragma once

#include <cstdint>
#include <vector>

#include "tsvft/relgraph.hpp"
#include "tsvft/structure.hpp"

namespace tsvft {

enum class YieldMode { ExactEnum, Binomial, MonteCarlo };

struct YieldParams {
  double p = 0.001;  // per-TSV defect probability
  YieldMode mode = YieldMode::Binomial;
  long long samples = 1000000;  // MonteCarlo only
  std::uint64_t seed = 0;
};

// Probability that the group functions under independent per-TSV faults.
// The fault domain is the group's f-TSVs plus the spares the structure
// actually uses (faults on unused candidates are vacuous); the group
// functions iff repairable() accepts the realized fault set.
//  - ExactEnum sums all 2^M fault patterns (M <= 20, else BudgetError).
//  - Binomial returns the truncated bound sum_{i<=k} C(M,i) p^i (1-p)^(M-i).
//  - MonteCarlo samples patterns in fixed-size shards with derived seeds, so
//    the estimate is identical for any thread count.
double group_yield(const RelGraph& g, const ToleranceStructure& st,
                   const YieldParams& params);

// Serial references for the two OpenMP estimators.
double group_yield_serial(const RelGraph& g, const ToleranceStructure& st,
                          const YieldParams& params);

// Product of group yields; the empty product is 1.
double tsv_yield(const std::vector<double>& group_yields);

struct ChipYieldInputs {
  std::vector<double> die_yields;      // one per layer
  std::vector<double> bonding_yields;  // one per bonding step (layers - 1)
  std::vector<double> tsv_yields;      // one per bonding step (layers - 1)
};

// Stack yield (product of die yields) times the per-step bonding and TSV
// yields.
double chip_yield(const ChipYieldInputs& inputs);

}  // namespace tsvft
