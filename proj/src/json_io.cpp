#include "tsvft/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "tsvft/errors.hpp"

namespace tsvft {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const char* context) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string(context) + ": missing field \"" + key + "\"");
  }
  return *it;
}

}  // namespace

json graph_to_json(const RelGraph& g) {
  json j;
  j["f_tsvs"] = json::array();
  for (int f = 0; f < g.m; ++f) j["f_tsvs"].push_back(g.id_of(f));
  j["s_tsvs"] = json::array();
  for (int s = 0; s < g.n; ++s) j["s_tsvs"].push_back(g.id_of(g.m + s));
  j["edges"] = json::array();
  for (const auto& [u, v] : g.edges) {
    j["edges"].push_back(json::array({g.id_of(u), g.id_of(v)}));
  }
  return j;
}

RelGraph graph_from_json(const json& j) {
  std::vector<std::string> f_ids, s_ids;
  for (const auto& id : require(j, "f_tsvs", "graph")) f_ids.push_back(id.get<std::string>());
  for (const auto& id : require(j, "s_tsvs", "graph")) s_ids.push_back(id.get<std::string>());
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : require(j, "edges", "graph")) {
    if (!e.is_array() || e.size() != 2) {
      throw ParseError("graph: each edge must be a [\"u\",\"v\"] pair");
    }
    edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return build_from_edges(f_ids, s_ids, edges);
}

json structure_to_json(const ToleranceStructure& st) {
  json j;
  j["k"] = st.k;
  j["paths"] = json::object();
  for (const auto& [fid, paths] : st.paths) {
    json arr = json::array();
    for (const auto& path : paths) arr.push_back(path);
    j["paths"][fid] = std::move(arr);
  }
  return j;
}

ToleranceStructure structure_from_json(const json& j) {
  ToleranceStructure st;
  st.k = require(j, "k", "structure").get<int>();
  for (const auto& [fid, arr] : require(j, "paths", "structure").items()) {
    std::vector<std::vector<std::string>> paths;
    for (const auto& path : arr) {
      paths.push_back(path.get<std::vector<std::string>>());
    }
    st.paths[fid] = std::move(paths);
  }
  return st;
}

json instance_to_json(const PlanInstance& inst) {
  json j;
  j["pitch_um"] = inst.pitch_um;
  j["f_tsvs"] = json::array();
  for (const auto& f : inst.f_tsvs) {
    j["f_tsvs"].push_back(json{{"id", f.id},
                               {"x", f.x},
                               {"y", f.y},
                               {"bbox",
                                {{"xmin", f.bbox.xmin},
                                 {"ymin", f.bbox.ymin},
                                 {"xmax", f.bbox.xmax},
                                 {"ymax", f.bbox.ymax}}}});
  }
  j["s_sites"] = json::array();
  for (const auto& s : inst.s_sites) {
    j["s_sites"].push_back(json{{"id", s.id}, {"x", s.x}, {"y", s.y}});
  }
  j["params"] = {{"p", inst.params.p},
                 {"target_yield", inst.params.target_yield},
                 {"margin_um", inst.params.margin_um},
                 {"method", inst.params.method}};
  if (inst.params.kcap) {
    j["params"]["kcap"] = *inst.params.kcap;
  } else {
    j["params"]["kcap"] = nullptr;
  }
  return j;
}

PlanInstance instance_from_json(const json& j) {
  PlanInstance inst;
  inst.pitch_um = require(j, "pitch_um", "instance").get<double>();
  for (const auto& f : require(j, "f_tsvs", "instance")) {
    LayoutFtsv ftsv;
    ftsv.id = require(f, "id", "f_tsv").get<std::string>();
    ftsv.x = require(f, "x", "f_tsv").get<double>();
    ftsv.y = require(f, "y", "f_tsv").get<double>();
    const json& box = require(f, "bbox", "f_tsv");
    ftsv.bbox.xmin = require(box, "xmin", "bbox").get<double>();
    ftsv.bbox.ymin = require(box, "ymin", "bbox").get<double>();
    ftsv.bbox.xmax = require(box, "xmax", "bbox").get<double>();
    ftsv.bbox.ymax = require(box, "ymax", "bbox").get<double>();
    inst.f_tsvs.push_back(std::move(ftsv));
  }
  for (const auto& s : require(j, "s_sites", "instance")) {
    LayoutSite site;
    site.id = require(s, "id", "s_site").get<std::string>();
    site.x = require(s, "x", "s_site").get<double>();
    site.y = require(s, "y", "s_site").get<double>();
    inst.s_sites.push_back(std::move(site));
  }
  const json& params = require(j, "params", "instance");
  inst.params.p = require(params, "p", "params").get<double>();
  inst.params.target_yield = require(params, "target_yield", "params").get<double>();
  inst.params.margin_um = require(params, "margin_um", "params").get<double>();
  if (params.contains("method")) inst.params.method = params["method"].get<std::string>();
  if (params.contains("kcap") && !params["kcap"].is_null()) {
    inst.params.kcap = params["kcap"].get<int>();
  }
  return inst;
}

json tolerance_report_to_json(const ToleranceReport& report) {
  json j;
  j["k"] = report.k;
  j["nd"] = json::object();
  for (const auto& [id, nd] : report.nd) j["nd"][id] = nd;
  return j;
}

json metrics_to_json(const StructureMetrics& ms) {
  json j;
  j["max_indegree"] = ms.max_indegree;
  j["used_stsvs"] = ms.used_stsvs;
  j["max_mux_ports"] = ms.max_mux_ports;
  j["indegree"] = json::object();
  for (const auto& [id, d] : ms.indegree) j["indegree"][id] = d;
  j["mux_ports"] = json::object();
  for (const auto& [id, p] : ms.mux_ports) j["mux_ports"][id] = p;
  return j;
}

json plan_result_to_json(const PlanResult& result) {
  json j;
  j["groups"] = json::array();
  for (const auto& grp : result.groups) {
    json g;
    g["id"] = grp.id;
    g["f_tsvs"] = grp.f_ids;
    g["allocated_stsvs"] = grp.allocated_stsvs;
    g["k_max"] = grp.k_max;
    g["k_used"] = grp.k_used;
    g["engine"] = grp.engine;
    g["group_yield"] = round_yield(grp.group_yield);
    g["structure"] = structure_to_json(grp.structure);
    g["metrics"] = {{"max_indegree", grp.group_metrics.max_indegree},
                    {"used_stsvs", grp.group_metrics.used_stsvs},
                    {"max_mux_ports", grp.group_metrics.max_mux_ports}};
    j["groups"].push_back(std::move(g));
  }
  j["totals"] = {{"num_groups", result.totals.num_groups},
                 {"total_stsvs", result.totals.total_stsvs},
                 {"max_mux_ports", result.totals.max_mux_ports},
                 {"tsv_yield", round_yield(result.totals.tsv_yield)}};
  j["iterations"] = result.iterations;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
}

std::string file_digest(const std::string& path) {
  std::string bytes = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << h;
  return os.str();
}

double round_yield(double y) { return std::round(y * 1e6) / 1e6; }

}  // namespace tsvft
