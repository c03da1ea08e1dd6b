#include "tsvft/ilp.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <sstream>

#include "tsvft/errors.hpp"
#include "tsvft/flow.hpp"

namespace tsvft {

namespace {

using Clock = std::chrono::steady_clock;

struct TimeoutSignal {};

// The solver works on the collapsed graph: selecting a set of relation edges
// (a candidate connection superset) and a spare subset fully determines
// feasibility, because a structure with connections inside an edge set D
// exists iff every f-TSV pushes k units of vertex-capacitated flow through D.
class ExactSolver {
 public:
  ExactSolver(const SplitGraph& sg, int k, double timeout_s)
      : g_(collapse(sg)), k_(k), deadline_(Clock::now() +
            std::chrono::duration_cast<Clock::duration>(
                std::chrono::duration<double>(timeout_s))) {
    for (int j = 0; j < g_.n; ++j) {
      if (!g_.in_edges[static_cast<size_t>(g_.m + j)].empty()) {
        reachable_spares_.push_back(g_.m + j);
      }
    }
  }

  SolveOutcome run_adaptive() {
    auto started = Clock::now();
    SolveOutcome outcome;
    try {
      outcome = adaptive_search();
    } catch (const TimeoutSignal&) {
      outcome.status = SolveStatus::Timeout;
    }
    outcome.elapsed_s =
        std::chrono::duration<double>(Clock::now() - started).count();
    return outcome;
  }

  SolveOutcome run_fixed_baseline() {
    auto started = Clock::now();
    SolveOutcome outcome;
    try {
      outcome = baseline_search();
    } catch (const TimeoutSignal&) {
      outcome.status = SolveStatus::Timeout;
      outcome.structure.reset();
    }
    outcome.elapsed_s =
        std::chrono::duration<double>(Clock::now() - started).count();
    return outcome;
  }

 private:
  using EdgeMask = std::vector<char>;
  using SpareMask = std::vector<char>;  // indexed by spare offset j in [0, n)

  void check_time() const {
    if (Clock::now() > deadline_) throw TimeoutSignal{};
  }

  EdgeMask edges_for(const SpareMask& spares) const {
    EdgeMask mask(g_.edges.size(), 1);
    for (size_t e = 0; e < g_.edges.size(); ++e) {
      int v = g_.edges[e].second;
      if (g_.is_spare(v) && !spares[static_cast<size_t>(v - g_.m)]) mask[e] = 0;
    }
    return mask;
  }

  // Max-flow feasibility: k vertex-disjoint paths from f to spares in T
  // using only masked edges.
  bool f_feasible(int f, const EdgeMask& mask, const SpareMask& spares) const {
    const int base = g_.node_count();
    FlowNetwork net;
    net.num_nodes = 2 * base + 1;
    net.source = base + f;
    net.sink = 2 * base;
    for (int u = 0; u < base; ++u) {
      if (u == f) continue;
      if (g_.is_spare(u) && !spares[static_cast<size_t>(u - g_.m)]) continue;
      net.add_arc(u, base + u, 1);
    }
    for (size_t e = 0; e < g_.edges.size(); ++e) {
      if (!mask[e]) continue;
      auto [u, v] = g_.edges[e];
      net.add_arc(base + u, v, 1);
    }
    for (int j = 0; j < g_.n; ++j) {
      if (spares[static_cast<size_t>(j)]) net.add_arc(base + g_.m + j, net.sink, 1);
    }
    return max_flow(net).value >= k_;
  }

  bool all_feasible(const EdgeMask& mask, const SpareMask& spares) const {
    for (int f = 0; f < g_.m; ++f) {
      if (!f_feasible(f, mask, spares)) return false;
    }
    return true;
  }

  std::vector<int> indegrees(const EdgeMask& mask) const {
    std::vector<int> indeg(static_cast<size_t>(g_.node_count()), 0);
    for (size_t e = 0; e < g_.edges.size(); ++e) {
      if (mask[e]) indeg[static_cast<size_t>(g_.edges[e].second)]++;
    }
    return indeg;
  }

  // Branch and bound over in-edge selections: at the first vertex whose
  // masked indegree exceeds lambda1, try every kept subset of exactly
  // lambda1 in-edges (lexicographic by edge index) and prune branches whose
  // relaxed flow drops below k for some f-TSV.
  std::optional<EdgeMask> degree_bounded(EdgeMask mask, int lambda1,
                                         const SpareMask& spares) {
    check_time();
    std::vector<int> indeg = indegrees(mask);
    int violator = -1;
    for (int v = 0; v < g_.node_count(); ++v) {
      if (indeg[static_cast<size_t>(v)] > lambda1) {
        violator = v;
        break;
      }
    }
    if (violator < 0) return mask;

    std::vector<int> in;
    for (int e : g_.in_edges[static_cast<size_t>(violator)]) {
      if (mask[static_cast<size_t>(e)]) in.push_back(e);
    }
    const int deg = static_cast<int>(in.size());
    std::vector<int> keep(static_cast<size_t>(lambda1));
    for (int i = 0; i < lambda1; ++i) keep[static_cast<size_t>(i)] = i;
    while (true) {
      EdgeMask child = mask;
      {
        size_t pos = 0;
        for (int i = 0; i < deg; ++i) {
          bool kept = pos < keep.size() && keep[pos] == i;
          if (kept) {
            ++pos;
          } else {
            child[static_cast<size_t>(in[static_cast<size_t>(i)])] = 0;
          }
        }
      }
      if (all_feasible(child, spares)) {
        auto found = degree_bounded(std::move(child), lambda1, spares);
        if (found) return found;
      }
      // Next lexicographic combination.
      int i = lambda1 - 1;
      while (i >= 0 && keep[static_cast<size_t>(i)] == deg - lambda1 + i) --i;
      if (i < 0) break;
      keep[static_cast<size_t>(i)]++;
      for (int j = i + 1; j < lambda1; ++j) {
        keep[static_cast<size_t>(j)] = keep[static_cast<size_t>(j - 1)] + 1;
      }
    }
    return std::nullopt;
  }

  std::optional<EdgeMask> feasible_with(const SpareMask& spares, int lambda1) {
    EdgeMask mask = edges_for(spares);
    if (!all_feasible(mask, spares)) return std::nullopt;
    if (lambda1 < 1) return std::nullopt;
    return degree_bounded(std::move(mask), lambda1, spares);
  }

  // Routes f-TSVs in input order inside the selected edge set, preferring
  // already-traversed edges so the extracted connection set stays small. A
  // super-source arc of capacity k pins the flow value at exactly k paths.
  ToleranceStructure extract(const EdgeMask& mask, const SpareMask& spares) {
    ToleranceStructure st;
    st.k = k_;
    const int base = g_.node_count();
    std::vector<char> traversed(g_.edges.size(), 0);
    for (int f = 0; f < g_.m; ++f) {
      FlowNetwork net;
      net.num_nodes = 2 * base + 2;
      net.source = 2 * base + 1;
      net.sink = 2 * base;
      net.add_arc(net.source, base + f, k_, 0);
      for (int u = 0; u < base; ++u) {
        if (u == f) continue;
        if (g_.is_spare(u) && !spares[static_cast<size_t>(u - g_.m)]) continue;
        net.add_arc(u, base + u, 1, 0);
      }
      for (size_t e = 0; e < g_.edges.size(); ++e) {
        if (!mask[e]) continue;
        auto [u, v] = g_.edges[e];
        net.add_arc(base + u, v, 1, traversed[e] ? 0 : 1);
      }
      for (int j = 0; j < g_.n; ++j) {
        if (spares[static_cast<size_t>(j)]) net.add_arc(base + g_.m + j, net.sink, 1, 0);
      }
      FlowResult res = min_cost_max_flow(net);
      if (res.value != k_) {
        throw InternalError("extraction lost feasibility certified by search");
      }
      auto& out = st.paths[g_.id_of(f)];
      for (const auto& node_path : decompose_paths(net, res)) {
        // node_path = super, f', v, v', ..., s, s', sink
        std::vector<std::string> tsv_path{g_.id_of(f)};
        for (size_t i = 2; i + 1 < node_path.size(); i += 2) {
          tsv_path.push_back(g_.id_of(node_path[i]));
        }
        for (size_t i = 0; i + 1 < tsv_path.size(); ++i) {
          int e = g_.edge_of(g_.node_of(tsv_path[i]), g_.node_of(tsv_path[i + 1]));
          traversed[static_cast<size_t>(e)] = 1;
        }
        out.push_back(std::move(tsv_path));
      }
    }
    return st;
  }

  // Enumerates spare subsets in lexicographic id-set order (prefix-first),
  // yielding only sizes within [k, max_size]. Returns true when the visitor
  // accepts a subset.
  template <typename Visitor>
  bool lex_subsets(int max_size, Visitor&& visit) {
    std::vector<int> chosen;
    return lex_subsets_rec(0, max_size, chosen, visit);
  }

  template <typename Visitor>
  bool lex_subsets_rec(size_t next, int max_size, std::vector<int>& chosen,
                       Visitor&& visit) {
    if (static_cast<int>(chosen.size()) >= k_) {
      if (visit(chosen)) return true;
    }
    if (static_cast<int>(chosen.size()) == max_size) return false;
    for (size_t i = next; i < reachable_spares_.size(); ++i) {
      chosen.push_back(reachable_spares_[i]);
      if (lex_subsets_rec(i + 1, max_size, chosen, visit)) return true;
      chosen.pop_back();
    }
    return false;
  }

  SolveOutcome adaptive_search() {
    SolveOutcome outcome;
    if (k_ > static_cast<int>(reachable_spares_.size())) {
      outcome.status = SolveStatus::Infeasible;
      return outcome;
    }
    // Upper bound: all reachable spares with indegrees left free.
    SpareMask all(static_cast<size_t>(g_.n), 0);
    for (int s : reachable_spares_) all[static_cast<size_t>(s - g_.m)] = 1;
    EdgeMask all_edges = edges_for(all);
    if (!all_feasible(all_edges, all)) {
      outcome.status = SolveStatus::Infeasible;  // k exceeds the true K
      return outcome;
    }
    std::vector<int> indeg = indegrees(all_edges);
    int lambda1_ub = std::max(1, *std::max_element(indeg.begin(), indeg.end()));
    const int b_ub = lambda1_ub + static_cast<int>(reachable_spares_.size());

    for (int b = k_ + 1; b <= b_ub; ++b) {
      check_time();
      std::optional<EdgeMask> found_mask;
      SpareMask found_spares;
      auto visit = [&](const std::vector<int>& chosen) {
        int lambda1 = b - static_cast<int>(chosen.size());
        if (lambda1 < 1) return false;
        SpareMask spares(static_cast<size_t>(g_.n), 0);
        for (int s : chosen) spares[static_cast<size_t>(s - g_.m)] = 1;
        auto mask = feasible_with(spares, lambda1);
        if (!mask) return false;
        found_mask = std::move(mask);
        found_spares = std::move(spares);
        return true;
      };
      if (lex_subsets(std::min(b - 1, static_cast<int>(reachable_spares_.size())),
                      visit)) {
        ToleranceStructure st = extract(*found_mask, found_spares);
        StructureMetrics ms = metrics(st, g_);
        if (ms.max_indegree + ms.used_stsvs != b) {
          throw InternalError("extracted structure does not match certified objective");
        }
        outcome.status = SolveStatus::Optimal;
        outcome.structure = std::move(st);
        outcome.lambda1 = ms.max_indegree;
        outcome.lambda2 = ms.used_stsvs;
        return outcome;
      }
    }
    outcome.status = SolveStatus::Infeasible;
    return outcome;
  }

  SolveOutcome baseline_search() {
    SolveOutcome outcome;
    outcome.status = SolveStatus::Infeasible;
    if (k_ > static_cast<int>(reachable_spares_.size())) return outcome;

    int best_lambda1 = -1;
    SpareMask best_spares;
    EdgeMask best_mask;

    std::vector<int> chosen;
    auto enumerate = [&](auto&& self, size_t next) -> void {
      if (static_cast<int>(chosen.size()) == k_) {
        check_time();
        SpareMask spares(static_cast<size_t>(g_.n), 0);
        for (int s : chosen) spares[static_cast<size_t>(s - g_.m)] = 1;
        EdgeMask mask = edges_for(spares);
        if (!all_feasible(mask, spares)) return;
        std::vector<int> indeg = indegrees(mask);
        int ub = std::max(1, *std::max_element(indeg.begin(), indeg.end()));
        if (best_lambda1 >= 0) ub = std::min(ub, best_lambda1 - 1);
        for (int lambda1 = 1; lambda1 <= ub; ++lambda1) {
          auto found = degree_bounded(mask, lambda1, spares);
          if (found) {
            best_lambda1 = lambda1;
            best_spares = spares;
            best_mask = std::move(*found);
            break;
          }
        }
        return;
      }
      for (size_t i = next; i < reachable_spares_.size(); ++i) {
        chosen.push_back(reachable_spares_[i]);
        self(self, i + 1);
        chosen.pop_back();
      }
    };
    enumerate(enumerate, 0);

    if (best_lambda1 < 0) return outcome;
    ToleranceStructure st = extract(best_mask, best_spares);
    StructureMetrics ms = metrics(st, g_);
    outcome.status = SolveStatus::Optimal;
    outcome.structure = std::move(st);
    outcome.lambda1 = ms.max_indegree;
    outcome.lambda2 = ms.used_stsvs;
    return outcome;
  }

  RelGraph g_;
  int k_;
  Clock::time_point deadline_;
  std::vector<int> reachable_spares_;  // node indices with indegree > 0
};

std::string lp_name(const std::string& id) {
  std::string out;
  for (char c : id) {
    out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

}  // namespace

IlpModel build_adaptive_model(const SplitGraph& sg, int k) {
  if (k < 1 || k > sg.n) {
    throw PreconditionError("k must lie in [1, n]; got " + std::to_string(k));
  }
  IlpModel model;
  model.sg = sg;
  model.k = k;
  return model;
}

std::string dump_lp(const IlpModel& model) {
  const SplitGraph& sg = model.sg;
  const int base = sg.base_count();

  // Edge list of E': split edges first, then replace edges.
  std::vector<std::pair<int, int>> eprime = sg.split_edges;
  eprime.insert(eprime.end(), sg.replace_edges.begin(), sg.replace_edges.end());

  auto vertex_name = [&](int v) {
    std::string id = lp_name(sg.ids[static_cast<size_t>(v % base)]);
    return v < base ? id : id + "p";
  };
  auto edge_name = [&](int e) {
    return vertex_name(eprime[static_cast<size_t>(e)].first) + "__" +
           vertex_name(eprime[static_cast<size_t>(e)].second);
  };
  auto xvar = [&](int s, int t, int e) {
    return "x_" + vertex_name(base + s) + "_" + vertex_name(base + sg.m + t) + "_" +
           edge_name(e);
  };
  auto vvar = [&](int s, int t) {
    return "v_" + vertex_name(base + s) + "_" + vertex_name(base + sg.m + t);
  };

  std::ostringstream os;
  os << "\\ adaptive fault-tolerance structure model, k=" << model.k << "\n";
  os << "Minimize\n obj: l1 + l2\nSubject To\n";

  const int num_e = static_cast<int>(eprime.size());
  std::vector<std::vector<int>> out_of(static_cast<size_t>(2 * base));
  std::vector<std::vector<int>> into(static_cast<size_t>(2 * base));
  for (int e = 0; e < num_e; ++e) {
    out_of[static_cast<size_t>(eprime[static_cast<size_t>(e)].first)].push_back(e);
    into[static_cast<size_t>(eprime[static_cast<size_t>(e)].second)].push_back(e);
  }

  // Flow conservation with v^(s,t) sources and sinks.
  for (int s = 0; s < sg.m; ++s) {
    for (int t = 0; t < sg.n; ++t) {
      const int src = base + s;
      const int snk = base + sg.m + t;
      for (int u = 0; u < 2 * base; ++u) {
        std::ostringstream lhs;
        bool any = false;
        for (int e : out_of[static_cast<size_t>(u)]) {
          lhs << (any ? " + " : "") << xvar(s, t, e);
          any = true;
        }
        for (int e : into[static_cast<size_t>(u)]) {
          lhs << (any ? " - " : "- ") << xvar(s, t, e);
          any = true;
        }
        if (!any) continue;
        os << " cons_" << vertex_name(u) << "_" << vertex_name(src) << "_"
           << vertex_name(snk) << ": " << lhs.str();
        if (u == src) {
          os << " - " << vvar(s, t) << " = 0\n";
        } else if (u == snk) {
          os << " + " << vvar(s, t) << " = 0\n";
        } else {
          os << " = 0\n";
        }
      }
    }
  }
  // Per-source split-edge disjointness.
  for (int s = 0; s < sg.m; ++s) {
    for (int e = 0; e < base; ++e) {
      os << " disj_" << vertex_name(base + s) << "_" << edge_name(e) << ":";
      for (int t = 0; t < sg.n; ++t) {
        os << (t ? " + " : " ") << xvar(s, t, e);
      }
      os << " <= 1\n";
    }
  }
  // Exactly k paths per source.
  for (int s = 0; s < sg.m; ++s) {
    os << " kpaths_" << vertex_name(base + s) << ":";
    for (int t = 0; t < sg.n; ++t) {
      os << (t ? " + " : " ") << vvar(s, t);
    }
    os << " = " << model.k << "\n";
  }
  // d/x linking.
  for (int e = 0; e < num_e; ++e) {
    for (int s = 0; s < sg.m; ++s) {
      for (int t = 0; t < sg.n; ++t) {
        os << " dge_" << edge_name(e) << "_" << s << "_" << t << ": d_"
           << edge_name(e) << " - " << xvar(s, t, e) << " >= 0\n";
      }
    }
    os << " dle_" << edge_name(e) << ": d_" << edge_name(e);
    for (int s = 0; s < sg.m; ++s) {
      for (int t = 0; t < sg.n; ++t) {
        os << " - " << xvar(s, t, e);
      }
    }
    os << " <= 0\n";
  }
  // Indegree bound on original vertices (incoming replace edges).
  for (int u = 0; u < base; ++u) {
    if (into[static_cast<size_t>(u)].empty()) continue;
    os << " indeg_" << vertex_name(u) << ":";
    bool any = false;
    for (int e : into[static_cast<size_t>(u)]) {
      os << (any ? " + " : " ") << "d_" << edge_name(e);
      any = true;
    }
    os << " - l1 <= 0\n";
  }
  // Used-spare count.
  os << " used:";
  for (int j = 0; j < sg.n; ++j) {
    os << (j ? " + " : " ") << "d_" << edge_name(sg.m + j);
  }
  os << " - l2 = 0\n";

  os << "Bounds\n l1 >= 0\n l2 >= 0\nBinaries\n";
  for (int e = 0; e < num_e; ++e) os << " d_" << edge_name(e) << "\n";
  for (int s = 0; s < sg.m; ++s) {
    for (int t = 0; t < sg.n; ++t) {
      os << " " << vvar(s, t) << "\n";
      for (int e = 0; e < num_e; ++e) os << " " << xvar(s, t, e) << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

SolveOutcome solve(const IlpModel& model, double timeout_s) {
  if (timeout_s <= 0.0) {
    SolveOutcome outcome;
    outcome.status = SolveStatus::Timeout;
    return outcome;
  }
  ExactSolver solver(model.sg, model.k, timeout_s);
  return solver.run_adaptive();
}

SolveOutcome solve_fixed_k_baseline(const SplitGraph& sg, int k, double timeout_s) {
  if (k < 1 || k > sg.n) {
    throw PreconditionError("k must lie in [1, n]; got " + std::to_string(k));
  }
  if (timeout_s <= 0.0) {
    SolveOutcome outcome;
    outcome.status = SolveStatus::Timeout;
    return outcome;
  }
  ExactSolver solver(sg, k, timeout_s);
  return solver.run_fixed_baseline();
}

}  // namespace tsvft
