#include "tsvft/structure.hpp"

#include <algorithm>

#include "tsvft/errors.hpp"
#include "tsvft/flow.hpp"

namespace tsvft {

namespace {

std::vector<std::pair<int, int>> connection_indices(const ToleranceStructure& st,
                                                    const RelGraph& g) {
  std::set<std::pair<int, int>> conn;
  for (const auto& [fid, paths] : st.paths) {
    for (const auto& path : paths) {
      for (size_t i = 0; i + 1 < path.size(); ++i) {
        int u = g.node_of(path[i]);
        int v = g.node_of(path[i + 1]);
        if (u < 0 || v < 0) {
          throw PreconditionError("structure path references unknown TSV");
        }
        conn.emplace(u, v);
      }
    }
  }
  return {conn.begin(), conn.end()};
}

// Sizes-ascending, then lexicographic-by-index ordering of f-TSV subsets,
// addressable by (size, rank) so enumeration can be sharded.
class SubsetSpace {
 public:
  SubsetSpace(int m, int up_to) : m_(m) {
    // Saturating addition keeps huge binomials from wrapping; the budget
    // check rejects anything near the cap anyway.
    constexpr long long kSat = 1LL << 62;
    choose_.assign(static_cast<size_t>(m + 1),
                   std::vector<long long>(static_cast<size_t>(up_to + 1), 0));
    for (int i = 0; i <= m; ++i) {
      choose_[static_cast<size_t>(i)][0] = 1;
      for (int j = 1; j <= std::min(i, up_to); ++j) {
        long long a = binom(i - 1, j - 1);
        long long b = binom(i - 1, j);
        choose_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            (a > kSat - b) ? kSat : a + b;
      }
    }
  }

  long long binom(int items, int q) const {
    if (q < 0 || q > items) return 0;
    return choose_[static_cast<size_t>(items)][static_cast<size_t>(q)];
  }

  // Lexicographically rank-th subset of size q over {0..m-1}.
  std::vector<int> unrank(int q, long long rank) const {
    std::vector<int> subset;
    int next = 0;
    for (int slot = q; slot > 0; --slot) {
      for (int candidate = next;; ++candidate) {
        long long with_candidate = binom(m_ - candidate - 1, slot - 1);
        if (rank < with_candidate) {
          subset.push_back(candidate);
          next = candidate + 1;
          break;
        }
        rank -= with_candidate;
      }
    }
    return subset;
  }

 private:
  int m_;
  std::vector<std::vector<long long>> choose_;
};

}  // namespace

std::set<std::pair<std::string, std::string>> connections(const ToleranceStructure& st) {
  std::set<std::pair<std::string, std::string>> conn;
  for (const auto& [fid, paths] : st.paths) {
    for (const auto& path : paths) {
      for (size_t i = 0; i + 1 < path.size(); ++i) {
        conn.emplace(path[i], path[i + 1]);
      }
    }
  }
  return conn;
}

StructureMetrics metrics(const ToleranceStructure& st, const RelGraph& g) {
  StructureMetrics ms;
  std::vector<int> indeg(static_cast<size_t>(g.node_count()), 0);
  std::vector<char> endpoint(static_cast<size_t>(g.node_count()), 0);
  for (const auto& [u, v] : connection_indices(st, g)) {
    indeg[static_cast<size_t>(v)]++;
  }
  for (const auto& [fid, paths] : st.paths) {
    for (const auto& path : paths) {
      if (!path.empty()) {
        int last = g.node_of(path.back());
        if (last >= 0) endpoint[static_cast<size_t>(last)] = 1;
      }
    }
  }
  for (int v = 0; v < g.node_count(); ++v) {
    int d = indeg[static_cast<size_t>(v)];
    ms.indegree[g.id_of(v)] = d;
    ms.max_indegree = std::max(ms.max_indegree, d);
    int ports = g.is_functional(v) ? d + 1 : d;
    ms.mux_ports[g.id_of(v)] = ports;
    ms.max_mux_ports = std::max(ms.max_mux_ports, ports);
    if (g.is_spare(v) && endpoint[static_cast<size_t>(v)]) ms.used_stsvs++;
  }
  return ms;
}

VerifyResult verify(const ToleranceStructure& st, const RelGraph& g, int expected_k) {
  VerifyResult result;
  auto reject = [&](const std::string& f, const std::string& rule,
                    const std::string& detail) {
    result.accepted = false;
    result.violations.push_back({f, rule, detail});
  };

  if (st.k != expected_k) {
    reject("", "k mismatch",
           "structure declares k=" + std::to_string(st.k) + ", expected " +
               std::to_string(expected_k));
  }
  for (const auto& [fid, paths] : st.paths) {
    int f = g.node_of(fid);
    if (f < 0 || !g.is_functional(f)) {
      reject(fid, "unknown f-TSV", fid + " is not a functional TSV of the graph");
    }
  }

  for (int f = 0; f < g.m; ++f) {
    const std::string& fid = g.id_of(f);
    auto it = st.paths.find(fid);
    const auto* paths = it == st.paths.end() ? nullptr : &it->second;
    size_t count = paths ? paths->size() : 0;
    if (count != static_cast<size_t>(expected_k)) {
      reject(fid, "path count",
             "has " + std::to_string(count) + " paths, expected " +
                 std::to_string(expected_k));
      continue;
    }
    std::map<int, std::string> seen_nonsource;  // vertex -> owning rule context
    std::set<int> endpoints;
    for (const auto& path : *paths) {
      if (path.empty() || g.node_of(path.front()) != f) {
        reject(fid, "path start", "path does not start at " + fid);
        continue;
      }
      bool broken = false;
      std::set<int> on_path;
      for (size_t i = 0; i < path.size(); ++i) {
        int v = g.node_of(path[i]);
        if (v < 0) {
          reject(fid, "unknown tsv", path[i]);
          broken = true;
          break;
        }
        if (!on_path.insert(v).second) {
          reject(fid, "path not simple", "revisits " + path[i]);
          broken = true;
          break;
        }
        if (i + 1 < path.size()) {
          int w = g.node_of(path[i + 1]);
          if (w >= 0 && g.edge_of(v, w) < 0) {
            reject(fid, "edge not in relation graph",
                   path[i] + " -> " + path[i + 1]);
            broken = true;
            break;
          }
        }
      }
      if (broken) continue;
      int last = g.node_of(path.back());
      if (!g.is_spare(last)) {
        reject(fid, "path end", "path ends at non-spare " + path.back());
        continue;
      }
      if (!endpoints.insert(last).second) {
        reject(fid, "duplicate endpoint", "two paths end at " + path.back());
      }
      for (size_t i = 1; i < path.size(); ++i) {
        int v = g.node_of(path[i]);
        if (!seen_nonsource.emplace(v, fid).second) {
          reject(fid, "paths not vertex-disjoint", "at " + path[i]);
        }
      }
    }
  }
  return result;
}

RepairResult repairable(const ToleranceStructure& st, const RelGraph& g,
                        const FaultSet& faults) {
  std::vector<char> faulty(static_cast<size_t>(g.node_count()), 0);
  std::vector<int> faulty_f;
  for (const auto& id : faults.faulty) {
    int v = g.node_of(id);
    if (v < 0) throw PreconditionError("fault on unknown TSV " + id);
    faulty[static_cast<size_t>(v)] = 1;
  }
  for (int f = 0; f < g.m; ++f) {
    if (faulty[static_cast<size_t>(f)]) faulty_f.push_back(f);
  }
  RepairResult result;
  if (faulty_f.empty()) {
    result.repairable = true;
    return result;
  }

  // Split-vertex flow over the connection subgraph. Faulty vertices are
  // removed; a faulty f-TSV survives only as its own out-vertex, fed from
  // the super-source.
  const int base = g.node_count();
  FlowNetwork net;
  net.num_nodes = 2 * base + 2;
  net.source = 2 * base;
  net.sink = 2 * base + 1;
  for (int u = 0; u < base; ++u) {
    if (!faulty[static_cast<size_t>(u)]) net.add_arc(u, base + u, 1);
  }
  for (const auto& [u, v] : connection_indices(st, g)) {
    if (faulty[static_cast<size_t>(v)]) continue;
    net.add_arc(base + u, v, 1);
  }
  for (int j = 0; j < g.n; ++j) {
    if (!faulty[static_cast<size_t>(g.m + j)]) {
      net.add_arc(base + g.m + j, net.sink, 1);
    }
  }
  for (int f : faulty_f) {
    net.add_arc(net.source, base + f, 1);
  }

  FlowResult flow = max_flow(net);
  if (flow.value != static_cast<long long>(faulty_f.size())) {
    return result;
  }
  result.repairable = true;
  for (const auto& node_path : decompose_paths(net, flow)) {
    // node_path = source, f', v, v', ..., s, s', sink
    std::vector<std::string> tsv_path;
    tsv_path.push_back(g.id_of(node_path[1] - base));
    for (size_t i = 2; i + 1 < node_path.size(); i += 2) {
      tsv_path.push_back(g.id_of(node_path[i]));
    }
    result.assignment[tsv_path.front()] = std::move(tsv_path);
  }
  return result;
}

namespace {

InjectionReport run_injection(const ToleranceStructure& st, const RelGraph& g,
                              int up_to, long long budget, bool parallel) {
  if (up_to < 0 || up_to > g.m) {
    throw PreconditionError("up_to must lie in [0, number of f-TSVs]");
  }
  SubsetSpace space(g.m, up_to);
  long long total = 0;
  for (int q = 0; q <= up_to; ++q) total += space.binom(g.m, q);
  if (total > budget) {
    throw BudgetError("fault injection would enumerate " + std::to_string(total) +
                      " sets, budget is " + std::to_string(budget));
  }

  InjectionReport report;
  report.enumerated = total;
  long long good = 0;
  std::optional<std::pair<int, long long>> first_bad;  // (size, rank)

  for (int q = 0; q <= up_to; ++q) {
    const long long count = space.binom(g.m, q);
    long long good_q = 0;
    long long bad_rank = -1;

    auto eval_rank = [&](long long rank) -> bool {
      FaultSet fs;
      for (int f : space.unrank(q, rank)) fs.faulty.insert(g.id_of(f));
      return repairable(st, g, fs).repairable;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : good_q)
      for (long long rank = 0; rank < count; ++rank) {
        if (eval_rank(rank)) {
          good_q += 1;
        } else {
#pragma omp critical
          {
            if (bad_rank < 0 || rank < bad_rank) bad_rank = rank;
          }
        }
      }
    } else {
      for (long long rank = 0; rank < count; ++rank) {
        if (eval_rank(rank)) {
          good_q += 1;
        } else if (bad_rank < 0) {
          bad_rank = rank;
        }
      }
    }

    good += good_q;
    if (bad_rank >= 0 && !first_bad) first_bad = {q, bad_rank};
  }

  report.repairable_count = good;
  report.fraction = total == 0 ? 1.0 : static_cast<double>(good) / static_cast<double>(total);
  if (first_bad) {
    std::vector<std::string> ids;
    for (int f : space.unrank(first_bad->first, first_bad->second)) {
      ids.push_back(g.id_of(f));
    }
    report.first_counterexample = std::move(ids);
  }
  return report;
}

}  // namespace

InjectionReport exhaustive_injection(const ToleranceStructure& st, const RelGraph& g,
                                     int up_to, long long budget) {
  return run_injection(st, g, up_to, budget, true);
}

InjectionReport exhaustive_injection_serial(const ToleranceStructure& st,
                                            const RelGraph& g, int up_to,
                                            long long budget) {
  return run_injection(st, g, up_to, budget, false);
}

}  // namespace tsvft
