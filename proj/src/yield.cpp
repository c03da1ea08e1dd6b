#include "tsvft/yield.hpp"

#include <algorithm>
#include <cmath>

#include "tsvft/errors.hpp"
#include "tsvft/rng.hpp"

namespace tsvft {

namespace {

constexpr int kExactLimit = 20;
constexpr long long kMcShard = 65536;

// Fault domain: all f-TSVs, then the used spares, as graph node indices.
std::vector<int> fault_domain(const RelGraph& g, const ToleranceStructure& st) {
  std::vector<int> domain;
  for (int f = 0; f < g.m; ++f) domain.push_back(f);
  std::vector<char> used(static_cast<size_t>(g.node_count()), 0);
  for (const auto& [fid, paths] : st.paths) {
    for (const auto& path : paths) {
      if (!path.empty()) used[static_cast<size_t>(g.node_of(path.back()))] = 1;
    }
  }
  for (int j = 0; j < g.n; ++j) {
    if (used[static_cast<size_t>(g.m + j)]) domain.push_back(g.m + j);
  }
  return domain;
}

bool pattern_functions(const RelGraph& g, const ToleranceStructure& st,
                       const std::vector<int>& domain, std::uint64_t mask) {
  FaultSet fs;
  bool any_f = false;
  for (size_t i = 0; i < domain.size(); ++i) {
    if (mask & (1ULL << i)) {
      fs.faulty.insert(g.id_of(domain[i]));
      if (g.is_functional(domain[i])) any_f = true;
    }
  }
  if (!any_f) return true;  // only spare faults: nothing to reroute
  return repairable(st, g, fs).repairable;
}

double exact_enum(const RelGraph& g, const ToleranceStructure& st, double p,
                  bool parallel) {
  std::vector<int> domain = fault_domain(g, st);
  const int M = static_cast<int>(domain.size());
  if (M > kExactLimit) {
    throw BudgetError("exact enumeration needs 2^" + std::to_string(M) +
                      " patterns; limit is 2^" + std::to_string(kExactLimit));
  }
  const std::uint64_t total = 1ULL << M;
  std::vector<double> pow_p(static_cast<size_t>(M + 1)), pow_q(static_cast<size_t>(M + 1));
  pow_p[0] = pow_q[0] = 1.0;
  for (int i = 1; i <= M; ++i) {
    pow_p[static_cast<size_t>(i)] = pow_p[static_cast<size_t>(i - 1)] * p;
    pow_q[static_cast<size_t>(i)] = pow_q[static_cast<size_t>(i - 1)] * (1.0 - p);
  }

  // Fixed-size shards summed in shard order keep the floating-point result
  // identical between the serial and parallel runs.
  const std::uint64_t shard_size = 4096;
  const std::uint64_t num_shards = (total + shard_size - 1) / shard_size;
  std::vector<double> partial(num_shards, 0.0);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long s = 0; s < static_cast<long long>(num_shards); ++s) {
    double acc = 0.0;
    const std::uint64_t begin = static_cast<std::uint64_t>(s) * shard_size;
    const std::uint64_t end = std::min(total, begin + shard_size);
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      if (pattern_functions(g, st, domain, mask)) {
        int faults = static_cast<int>(__builtin_popcountll(mask));
        acc += pow_p[static_cast<size_t>(faults)] *
               pow_q[static_cast<size_t>(M - faults)];
      }
    }
    partial[static_cast<size_t>(s)] = acc;
  }
  double yield = 0.0;
  for (double v : partial) yield += v;
  return yield;
}

double binomial_bound(const RelGraph& g, const ToleranceStructure& st, double p) {
  std::vector<int> domain = fault_domain(g, st);
  const int M = static_cast<int>(domain.size());
  const int k = std::min(st.k, M);
  double yield = 0.0;
  double coeff = 1.0;  // C(M, i), built incrementally
  for (int i = 0; i <= k; ++i) {
    if (i > 0) coeff = coeff * (M - i + 1) / i;
    yield += coeff * std::pow(p, i) * std::pow(1.0 - p, M - i);
  }
  return std::min(yield, 1.0);
}

double monte_carlo(const RelGraph& g, const ToleranceStructure& st,
                   const YieldParams& params, bool parallel) {
  if (params.samples <= 0) throw PreconditionError("samples must be positive");
  std::vector<int> domain = fault_domain(g, st);
  const int M = static_cast<int>(domain.size());

  // When the pattern space is small, precompute a lookup table; samples then
  // cost one table read.
  std::vector<char> table;
  if (M <= kExactLimit) {
    table.resize(1ULL << M);
    const long long entries = static_cast<long long>(table.size());
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
    for (long long mask = 0; mask < entries; ++mask) {
      table[static_cast<size_t>(mask)] =
          pattern_functions(g, st, domain, static_cast<std::uint64_t>(mask)) ? 1 : 0;
    }
  }

  const long long num_shards = (params.samples + kMcShard - 1) / kMcShard;
  long long functioning = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : functioning) if (parallel)
  for (long long s = 0; s < num_shards; ++s) {
    SplitMix64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(s)));
    const long long begin = s * kMcShard;
    const long long end = std::min(params.samples, begin + kMcShard);
    long long local = 0;
    for (long long i = begin; i < end; ++i) {
      if (M <= 64) {
        std::uint64_t mask = 0;
        for (int b = 0; b < M; ++b) {
          if (rng.uniform01() < params.p) mask |= (1ULL << b);
        }
        if (!table.empty()) {
          local += table[static_cast<size_t>(mask)];
        } else {
          local += pattern_functions(g, st, domain, mask) ? 1 : 0;
        }
      } else {
        FaultSet fs;
        bool any_f = false;
        for (int b = 0; b < M; ++b) {
          if (rng.uniform01() < params.p) {
            fs.faulty.insert(g.id_of(domain[static_cast<size_t>(b)]));
            if (g.is_functional(domain[static_cast<size_t>(b)])) any_f = true;
          }
        }
        local += (!any_f || repairable(st, g, fs).repairable) ? 1 : 0;
      }
    }
    functioning += local;
  }
  return static_cast<double>(functioning) / static_cast<double>(params.samples);
}

double dispatch(const RelGraph& g, const ToleranceStructure& st,
                const YieldParams& params, bool parallel) {
  if (params.p < 0.0 || params.p >= 1.0) {
    throw PreconditionError("defect probability must lie in [0, 1)");
  }
  switch (params.mode) {
    case YieldMode::ExactEnum:
      return exact_enum(g, st, params.p, parallel);
    case YieldMode::Binomial:
      return binomial_bound(g, st, params.p);
    case YieldMode::MonteCarlo:
      return monte_carlo(g, st, params, parallel);
  }
  throw InternalError("unknown yield mode");
}

}  // namespace

double group_yield(const RelGraph& g, const ToleranceStructure& st,
                   const YieldParams& params) {
  return dispatch(g, st, params, true);
}

double group_yield_serial(const RelGraph& g, const ToleranceStructure& st,
                          const YieldParams& params) {
  return dispatch(g, st, params, false);
}

double tsv_yield(const std::vector<double>& group_yields) {
  double product = 1.0;
  for (double y : group_yields) {
    if (y < 0.0 || y > 1.0) throw PreconditionError("group yield outside [0, 1]");
    product *= y;
  }
  return product;
}

double chip_yield(const ChipYieldInputs& inputs) {
  const size_t layers = inputs.die_yields.size();
  if (layers < 1) throw PreconditionError("need at least one die yield");
  if (inputs.bonding_yields.size() != layers - 1 ||
      inputs.tsv_yields.size() != layers - 1) {
    throw PreconditionError("need exactly layers-1 bonding and TSV yields");
  }
  double stack = 1.0;
  for (double y : inputs.die_yields) stack *= y;
  double result = stack;
  for (size_t i = 0; i + 1 < layers; ++i) {
    result *= inputs.bonding_yields[i] * inputs.tsv_yields[i];
  }
  return result;
}

}  // namespace tsvft
