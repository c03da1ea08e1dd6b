#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tsvft {

// Directed replaceable-relation graph of one TSV group. Vertices are dense
// indices: functional TSVs occupy [0, m) in input order, spares [m, m+n).
// Edge sources are always functional. Immutable after construction; safe to
// share across threads.
struct RelGraph {
  int m = 0;
  int n = 0;
  std::vector<std::string> ids;                    // size m+n
  std::vector<std::pair<int, int>> edges;          // deduplicated, input order
  std::vector<std::vector<int>> out_edges;         // node -> edge indices
  std::vector<std::vector<int>> in_edges;          // node -> edge indices
  std::unordered_map<std::string, int> index;      // id -> node

  int node_count() const { return m + n; }
  bool is_functional(int v) const { return v < m; }
  bool is_spare(int v) const { return v >= m; }
  const std::string& id_of(int v) const { return ids[static_cast<size_t>(v)]; }

  // Returns -1 when the id is unknown.
  int node_of(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? -1 : it->second;
  }

  // Returns -1 when (u, v) is not an edge.
  int edge_of(int u, int v) const;

  bool operator==(const RelGraph& other) const {
    return m == other.m && n == other.n && ids == other.ids &&
           edges == other.edges;
  }
};

// Vertex-split transform of a RelGraph. In-vertex u keeps index u; its
// out-vertex u' is u + (m+n). Every path in the split graph alternates a
// split edge (u, u') and a replace edge (u', v).
struct SplitGraph {
  int m = 0;
  int n = 0;
  std::vector<std::string> ids;                    // base ids, size m+n
  std::vector<std::pair<int, int>> split_edges;    // (u, u'), size m+n
  std::vector<std::pair<int, int>> replace_edges;  // (u', v), one per edge

  int base_count() const { return m + n; }
  int out_vertex(int u) const { return u + m + n; }
  int vertex_count() const { return 2 * (m + n); }
};

struct Rect {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;

  bool contains(double x, double y) const {
    // Closed rectangle: the boundary counts as inside.
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
  Rect expanded(double margin) const {
    return {xmin - margin, ymin - margin, xmax + margin, ymax + margin};
  }
};

struct LayoutFtsv {
  std::string id;
  double x = 0, y = 0;
  Rect bbox;
};

struct LayoutSite {
  std::string id;
  double x = 0, y = 0;
};

// Physical view of a group: f-TSVs with their net bounding boxes, candidate
// spare sites, and the rectilinear margin that widens every bbox.
struct LayoutGroup {
  std::vector<LayoutFtsv> f_tsvs;
  std::vector<LayoutSite> s_sites;
  double margin = 0.0;  // micrometers
};

RelGraph build_from_edges(
    const std::vector<std::string>& f_ids, const std::vector<std::string>& s_ids,
    const std::vector<std::pair<std::string, std::string>>& edges);

// Adds edge (f, v) iff v != f and v's position lies inside f's bbox expanded
// outward by the group margin on all four sides.
RelGraph build_from_layout(const LayoutGroup& group);

SplitGraph split(const RelGraph& g);

// Inverse of split(); with the round-trip property collapse(split(g)) == g.
RelGraph collapse(const SplitGraph& sg);

// DOT rendering: f-TSVs as boxes, s-TSVs as circles.
std::string to_dot(const RelGraph& g);
std::string to_dot(const SplitGraph& sg);

}  // namespace tsvft
