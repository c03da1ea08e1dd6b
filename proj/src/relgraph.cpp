#include "tsvft/relgraph.hpp"

#include <set>
#include <sstream>

#include "tsvft/errors.hpp"

namespace tsvft {

namespace {

void index_ids(RelGraph& g, const std::vector<std::string>& f_ids,
               const std::vector<std::string>& s_ids) {
  g.m = static_cast<int>(f_ids.size());
  g.n = static_cast<int>(s_ids.size());
  if (g.m < 1) {
    throw PreconditionError("a TSV group needs at least one functional TSV");
  }
  g.ids.reserve(static_cast<size_t>(g.m + g.n));
  for (const auto& id : f_ids) g.ids.push_back(id);
  for (const auto& id : s_ids) g.ids.push_back(id);
  for (int v = 0; v < g.node_count(); ++v) {
    if (!g.index.emplace(g.ids[static_cast<size_t>(v)], v).second) {
      throw PreconditionError("duplicate TSV id: " + g.ids[static_cast<size_t>(v)]);
    }
  }
}

void add_edge_checked(RelGraph& g, int u, int v, std::set<std::pair<int, int>>& seen) {
  if (u == v) {
    throw PreconditionError("self-loop on TSV " + g.id_of(u));
  }
  if (!g.is_functional(u)) {
    throw PreconditionError("edge sourced at spare TSV " + g.id_of(u));
  }
  if (!seen.emplace(u, v).second) return;  // silently deduplicate
  g.edges.emplace_back(u, v);
}

void finish(RelGraph& g) {
  g.out_edges.assign(static_cast<size_t>(g.node_count()), {});
  g.in_edges.assign(static_cast<size_t>(g.node_count()), {});
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    g.out_edges[static_cast<size_t>(g.edges[static_cast<size_t>(e)].first)].push_back(e);
    g.in_edges[static_cast<size_t>(g.edges[static_cast<size_t>(e)].second)].push_back(e);
  }
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

int RelGraph::edge_of(int u, int v) const {
  for (int e : out_edges[static_cast<size_t>(u)]) {
    if (edges[static_cast<size_t>(e)].second == v) return e;
  }
  return -1;
}

RelGraph build_from_edges(
    const std::vector<std::string>& f_ids, const std::vector<std::string>& s_ids,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  RelGraph g;
  index_ids(g, f_ids, s_ids);
  std::set<std::pair<int, int>> seen;
  for (const auto& [uid, vid] : edges) {
    int u = g.node_of(uid);
    int v = g.node_of(vid);
    if (u < 0) throw PreconditionError("edge references undeclared TSV " + uid);
    if (v < 0) throw PreconditionError("edge references undeclared TSV " + vid);
    add_edge_checked(g, u, v, seen);
  }
  finish(g);
  return g;
}

RelGraph build_from_layout(const LayoutGroup& group) {
  if (group.margin < 0.0) {
    throw PreconditionError("negative margin");
  }
  for (const auto& f : group.f_tsvs) {
    if (f.bbox.xmin > f.bbox.xmax || f.bbox.ymin > f.bbox.ymax) {
      throw PreconditionError("degenerate bbox on f-TSV " + f.id);
    }
    if (!f.bbox.contains(f.x, f.y)) {
      throw PreconditionError("f-TSV " + f.id + " lies outside its own bbox");
    }
  }

  RelGraph g;
  std::vector<std::string> f_ids, s_ids;
  f_ids.reserve(group.f_tsvs.size());
  s_ids.reserve(group.s_sites.size());
  for (const auto& f : group.f_tsvs) f_ids.push_back(f.id);
  for (const auto& s : group.s_sites) s_ids.push_back(s.id);
  index_ids(g, f_ids, s_ids);

  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < g.m; ++i) {
    const Rect box = group.f_tsvs[static_cast<size_t>(i)].bbox.expanded(group.margin);
    for (int j = 0; j < g.m; ++j) {
      if (j == i) continue;
      const auto& other = group.f_tsvs[static_cast<size_t>(j)];
      if (box.contains(other.x, other.y)) add_edge_checked(g, i, j, seen);
    }
    for (int j = 0; j < g.n; ++j) {
      const auto& site = group.s_sites[static_cast<size_t>(j)];
      if (box.contains(site.x, site.y)) add_edge_checked(g, i, g.m + j, seen);
    }
  }
  finish(g);
  return g;
}

SplitGraph split(const RelGraph& g) {
  SplitGraph sg;
  sg.m = g.m;
  sg.n = g.n;
  sg.ids = g.ids;
  sg.split_edges.reserve(static_cast<size_t>(g.node_count()));
  for (int u = 0; u < g.node_count(); ++u) {
    sg.split_edges.emplace_back(u, sg.out_vertex(u));
  }
  sg.replace_edges.reserve(g.edges.size());
  for (const auto& [u, v] : g.edges) {
    sg.replace_edges.emplace_back(sg.out_vertex(u), v);
  }
  return sg;
}

RelGraph collapse(const SplitGraph& sg) {
  RelGraph g;
  std::vector<std::string> f_ids(sg.ids.begin(), sg.ids.begin() + sg.m);
  std::vector<std::string> s_ids(sg.ids.begin() + sg.m, sg.ids.end());
  index_ids(g, f_ids, s_ids);
  std::set<std::pair<int, int>> seen;
  for (const auto& [up, v] : sg.replace_edges) {
    add_edge_checked(g, up - sg.base_count(), v, seen);
  }
  finish(g);
  return g;
}

std::string to_dot(const RelGraph& g) {
  std::ostringstream os;
  os << "digraph relgraph {\n  rankdir=LR;\n";
  for (int v = 0; v < g.node_count(); ++v) {
    os << "  " << quoted(g.id_of(v))
       << (g.is_functional(v) ? " [shape=box];\n" : " [shape=circle];\n");
  }
  for (const auto& [u, v] : g.edges) {
    os << "  " << quoted(g.id_of(u)) << " -> " << quoted(g.id_of(v)) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const SplitGraph& sg) {
  auto name = [&](int v) {
    return v < sg.base_count() ? sg.ids[static_cast<size_t>(v)]
                               : sg.ids[static_cast<size_t>(v - sg.base_count())] + "'";
  };
  std::ostringstream os;
  os << "digraph splitgraph {\n  rankdir=LR;\n";
  for (int v = 0; v < sg.vertex_count(); ++v) {
    bool functional = (v % sg.base_count()) < sg.m;
    os << "  " << quoted(name(v))
       << (functional ? " [shape=box];\n" : " [shape=circle];\n");
  }
  for (const auto& [u, up] : sg.split_edges) {
    os << "  " << quoted(name(u)) << " -> " << quoted(name(up)) << " [style=dashed];\n";
  }
  for (const auto& [up, v] : sg.replace_edges) {
    os << "  " << quoted(name(up)) << " -> " << quoted(name(v)) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tsvft
