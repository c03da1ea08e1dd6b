#include "tsvft/cli.hpp"

#include <chrono>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsvft/errors.hpp"
#include "tsvft/ilp.hpp"
#include "tsvft/json_io.hpp"
#include "tsvft/mcmf_gen.hpp"
#include "tsvft/planner.hpp"
#include "tsvft/rng.hpp"
#include "tsvft/structure.hpp"
#include "tsvft/synth.hpp"
#include "tsvft/tolerance.hpp"
#include "tsvft/yield.hpp"

namespace tsvft {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct GenOptions {
  std::string graph_path;
  std::string method = "mcmf";
  int k = -1;  // default: min(K, kcap)
  int kcap = -1;
  std::uint64_t seed = 0;
  long long c = 3;
  int threshold = 50;
  int exponent_cap = 18;
  double timeout = 3600.0;
  std::string out_path = "structure.json";
  std::string lp_dump;
  std::string dot_path;
};

int cmd_ktol(const std::string& graph_path, const std::string& dot_path,
             const std::string& dot_split_path, std::ostream& out) {
  RelGraph g = graph_from_json(load_json_file(graph_path));
  ToleranceReport report = max_tolerant_faults(g);
  if (!dot_path.empty()) write_file(dot_path, to_dot(g));
  if (!dot_split_path.empty()) write_file(dot_split_path, to_dot(split(g)));
  out << tolerance_report_to_json(report).dump(2) << "\n";
  return kExitOk;
}

int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  auto start = Clock::now();
  RelGraph g = graph_from_json(load_json_file(opt.graph_path));
  ToleranceReport tolerance = max_tolerant_faults(g);

  int k = opt.k;
  if (k < 0) {
    k = opt.kcap > 0 ? std::min(tolerance.k, opt.kcap) : tolerance.k;
  }
  if (k > tolerance.k) {
    throw PreconditionError("requested k=" + std::to_string(k) +
                            " exceeds the group's maximum tolerant faults K=" +
                            std::to_string(tolerance.k));
  }
  if (k < 1) {
    throw PreconditionError("group admits no fault-tolerance structure (k=" +
                            std::to_string(k) + ")");
  }

  json report;
  report["command"] = "gen";
  report["input"] = {{"path", opt.graph_path}, {"digest", file_digest(opt.graph_path)}};
  report["config"] = {{"method", opt.method}, {"k", k},
                      {"seed", opt.seed},     {"c", opt.c},
                      {"threshold", opt.threshold}, {"timeout_s", opt.timeout}};

  ToleranceStructure st;
  if (opt.method == "ilp") {
    IlpModel model = build_adaptive_model(split(g), k);
    if (!opt.lp_dump.empty()) write_file(opt.lp_dump, dump_lp(model));
    SolveOutcome outcome = solve(model, opt.timeout);
    if (outcome.status != SolveStatus::Optimal) {
      report["outputs"] = {{"status", "NA"}};
      report["elapsed_s"] = seconds_since(start);
      out << report.dump(2) << "\n";
      err << "gen: no structure within the time limit\n";
      return kExitTimeout;
    }
    st = *outcome.structure;
  } else if (opt.method == "mcmf") {
    HeuristicConfig cfg;
    cfg.c = opt.c;
    cfg.seed = opt.seed;
    cfg.perturb_threshold = opt.threshold;
    cfg.exponent_cap = opt.exponent_cap;
    st = generate(g, k, cfg);
  } else {
    throw ParseError("unknown method \"" + opt.method + "\" (expected ilp or mcmf)");
  }

  VerifyResult check = verify(st, g, k);
  if (!check.accepted) {
    throw InternalError("generated structure failed verification: " +
                        check.violations.front().rule);
  }
  save_json_file(opt.out_path, structure_to_json(st));
  if (!opt.dot_path.empty()) write_file(opt.dot_path, to_dot(g));

  StructureMetrics ms = metrics(st, g);
  report["outputs"] = {{"status", "ok"},
                       {"k", k},
                       {"structure_path", opt.out_path},
                       {"max_mux_ports", ms.max_mux_ports},
                       {"max_indegree", ms.max_indegree},
                       {"used_stsvs", ms.used_stsvs}};
  report["elapsed_s"] = seconds_since(start);
  out << report.dump(2) << "\n";
  return kExitOk;
}

struct PlanOptions {
  std::string instance_path;
  int baseline_k = 0;  // 0: adaptive
  std::uint64_t seed = 0;
  long long c = 3;
  int threshold = 50;
  double ilp_timeout = 5.0;
  std::string yield_mode = "auto";
  long long mc_samples = 100000;
  std::string out_path = "plan.json";
};

int cmd_plan(const PlanOptions& opt, std::ostream& out, std::ostream& err) {
  auto start = Clock::now();
  PlanInstance inst = instance_from_json(load_json_file(opt.instance_path));
  PlanConfig cfg;
  cfg.seed = opt.seed;
  cfg.c = opt.c;
  cfg.perturb_threshold = opt.threshold;
  cfg.ilp_timeout_s = opt.ilp_timeout;
  cfg.final_yield_mode = opt.yield_mode;
  cfg.mc_samples = opt.mc_samples;

  json report;
  report["command"] = "plan";
  report["input"] = {{"path", opt.instance_path},
                     {"digest", file_digest(opt.instance_path)}};
  report["config"] = {{"baseline_k", opt.baseline_k}, {"seed", opt.seed},
                      {"c", opt.c},                   {"threshold", opt.threshold},
                      {"ilp_timeout_s", opt.ilp_timeout},
                      {"yield_mode", opt.yield_mode}};

  try {
    PlanResult result = opt.baseline_k > 0 ? plan_fixed_k(inst, opt.baseline_k, cfg)
                                           : plan(inst, cfg);
    json result_json = plan_result_to_json(result);
    report["result"] = result_json;
    report["elapsed_s"] = seconds_since(start);
    save_json_file(opt.out_path, result_json);
    json summary = report;
    summary["result"] = {{"totals", result_json["totals"]},
                         {"iterations", result_json["iterations"]},
                         {"report_path", opt.out_path}};
    out << summary.dump(2) << "\n";
    return kExitOk;
  } catch (const PlanInfeasibleError& e) {
    err << "plan: infeasible: " << e.what() << "\n";
    for (const auto& grp : e.limiting_groups) err << "  limited by " << grp << "\n";
    return kExitInfeasible;
  }
}

int cmd_verify(const std::string& graph_path, const std::string& structure_path,
               int expected_k, std::ostream& out) {
  RelGraph g = graph_from_json(load_json_file(graph_path));
  ToleranceStructure st = structure_from_json(load_json_file(structure_path));
  int k = expected_k >= 0 ? expected_k : st.k;
  VerifyResult result = verify(st, g, k);
  json j;
  j["accepted"] = result.accepted;
  j["violations"] = json::array();
  for (const auto& v : result.violations) {
    j["violations"].push_back({{"f_tsv", v.f_tsv}, {"rule", v.rule}, {"detail", v.detail}});
  }
  out << j.dump(2) << "\n";
  return result.accepted ? kExitOk : kExitRejectOrInternal;
}

int cmd_inject(const std::string& graph_path, const std::string& structure_path,
               int up_to, long long samples, long long budget, std::uint64_t seed,
               std::ostream& out) {
  RelGraph g = graph_from_json(load_json_file(graph_path));
  ToleranceStructure st = structure_from_json(load_json_file(structure_path));
  int limit = up_to >= 0 ? up_to : st.k;

  json j;
  j["up_to"] = limit;
  if (samples <= 0) {
    InjectionReport report = exhaustive_injection(st, g, limit, budget);
    j["mode"] = "exhaustive";
    j["enumerated"] = report.enumerated;
    j["repairable_fraction"] = report.fraction;
    j["first_counterexample"] =
        report.first_counterexample ? json(*report.first_counterexample) : json();
  } else {
    // Monte-Carlo over fault sets of size <= up_to, uniform by size then set.
    SplitMix64 rng(seed);
    long long good = 0;
    std::optional<std::vector<std::string>> counterexample;
    for (long long i = 0; i < samples; ++i) {
      int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(limit + 1)));
      FaultSet fs;
      // Floyd-style distinct sampling of q f-TSV indices.
      for (int picked = 0; picked < q;) {
        int f = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.m)));
        if (fs.faulty.insert(g.id_of(f)).second) ++picked;
      }
      if (repairable(st, g, fs).repairable) {
        ++good;
      } else if (!counterexample) {
        counterexample = std::vector<std::string>(fs.faulty.begin(), fs.faulty.end());
      }
    }
    j["mode"] = "sampled";
    j["enumerated"] = samples;
    j["repairable_fraction"] = static_cast<double>(good) / static_cast<double>(samples);
    j["first_counterexample"] = counterexample ? json(*counterexample) : json();
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

struct SynthOptions {
  int n_ftsv = 50;
  std::string area = "300x300";
  double bbox_scale = 1.0;
  double site_pitch = 5.0;
  std::uint64_t seed = 0;
  double p = 0.001;
  double target_yield = 0.997;
  double margin = 0.0;
  int kcap = 0;
  std::string method = "mcmf";
  std::string out_path = "instance.json";
};

SynthConfig parse_synth(const SynthOptions& opt) {
  SynthConfig cfg;
  cfg.n_ftsv = opt.n_ftsv;
  auto xpos = opt.area.find('x');
  if (xpos == std::string::npos) {
    throw ParseError("--area expects WxH in micrometers, e.g. 300x300");
  }
  try {
    cfg.area_w_um = std::stod(opt.area.substr(0, xpos));
    cfg.area_h_um = std::stod(opt.area.substr(xpos + 1));
  } catch (const std::exception&) {
    throw ParseError("--area expects WxH in micrometers, e.g. 300x300");
  }
  cfg.bbox_scale = opt.bbox_scale;
  cfg.site_pitch_um = opt.site_pitch;
  cfg.seed = opt.seed;
  cfg.params.p = opt.p;
  cfg.params.target_yield = opt.target_yield;
  cfg.params.margin_um = opt.margin;
  if (opt.kcap > 0) cfg.params.kcap = opt.kcap;
  cfg.params.method = opt.method;
  return cfg;
}

int cmd_synth(const SynthOptions& opt, std::ostream& out) {
  PlanInstance inst = synth_instance(parse_synth(opt));
  save_json_file(opt.out_path, instance_to_json(inst));
  json j;
  j["command"] = "synth";
  j["out"] = opt.out_path;
  j["n_ftsv"] = static_cast<int>(inst.f_tsvs.size());
  j["n_sites"] = static_cast<int>(inst.s_sites.size());
  out << j.dump(2) << "\n";
  return kExitOk;
}

struct BenchOptions {
  int instances = 5;
  int min_ftsv = 40;
  int max_ftsv = 160;
  std::uint64_t seed = 1;
  int kcap = 3;
  int baseline_k = 3;
  bool sweep = false;
  double p = 0.001;
  double target_yield = 0.997;
};

struct BenchRow {
  int total_stsvs = 0;
  int groups = 0;
  int ports = 0;
  double yield = 0.0;
  double elapsed = 0.0;
};

BenchRow bench_row(const PlanResult& result, double elapsed) {
  return {result.totals.total_stsvs, result.totals.num_groups,
          result.totals.max_mux_ports, result.totals.tsv_yield, elapsed};
}

int cmd_bench(const BenchOptions& opt, std::ostream& out) {
  auto make_instance = [&](int n, std::uint64_t seed, double target) {
    SynthConfig cfg;
    cfg.n_ftsv = n;
    double side = std::max(60.0, std::ceil(std::sqrt(n * 150.0) / 5.0) * 5.0);
    cfg.area_w_um = cfg.area_h_um = side;
    cfg.seed = seed;
    cfg.params.p = opt.p;
    cfg.params.target_yield = target;
    return synth_instance(cfg);
  };

  PlanConfig cfg;
  cfg.seed = opt.seed;

  if (opt.sweep) {
    out << "target_yield  adaptive_stsvs  baseline_stsvs\n";
    for (int t = 991; t <= 999; ++t) {
      double target = t / 1000.0;
      PlanInstance inst = make_instance(opt.max_ftsv, opt.seed, target);
      inst.params.kcap = opt.kcap;
      BenchRow adaptive, baseline;
      {
        auto s = Clock::now();
        adaptive = bench_row(plan(inst, cfg), seconds_since(s));
      }
      {
        auto s = Clock::now();
        baseline = bench_row(plan_fixed_k(inst, opt.baseline_k, cfg), seconds_since(s));
      }
      out << std::fixed << std::setprecision(3) << target << "         "
          << std::setw(6) << adaptive.total_stsvs << "          " << std::setw(6)
          << baseline.total_stsvs << "\n";
    }
    return kExitOk;
  }

  out << "instance  n_ftsv  mode           #s-TSV  #gp  #Port  yield     RT(s)\n";
  double sum_adaptive = 0, sum_capped = 0, sum_baseline = 0;
  int done = 0;
  for (int i = 0; i < opt.instances; ++i) {
    int n = opt.min_ftsv +
            (opt.instances > 1
                 ? (opt.max_ftsv - opt.min_ftsv) * i / (opt.instances - 1)
                 : 0);
    PlanInstance inst = make_instance(n, derive_seed(opt.seed, static_cast<std::uint64_t>(i)),
                                      opt.target_yield);

    auto print = [&](const char* mode, const BenchRow& row) {
      out << std::setw(8) << i + 1 << "  " << std::setw(6) << n << "  " << std::left
          << std::setw(13) << mode << std::right << "  " << std::setw(6)
          << row.total_stsvs << "  " << std::setw(3) << row.groups << "  "
          << std::setw(5) << row.ports << "  " << std::fixed << std::setprecision(6)
          << row.yield << "  " << std::setprecision(3) << row.elapsed << "\n";
    };

    {
      PlanInstance adaptive = inst;
      auto s = Clock::now();
      BenchRow row = bench_row(plan(adaptive, cfg), seconds_since(s));
      print("adaptive", row);
      sum_adaptive += row.total_stsvs;
    }
    {
      PlanInstance capped = inst;
      capped.params.kcap = opt.kcap;
      auto s = Clock::now();
      BenchRow row = bench_row(plan(capped, cfg), seconds_since(s));
      print("adaptive-kcap", row);
      sum_capped += row.total_stsvs;
    }
    {
      auto s = Clock::now();
      BenchRow row = bench_row(plan_fixed_k(inst, opt.baseline_k, cfg), seconds_since(s));
      print("fixed-k", row);
      sum_baseline += row.total_stsvs;
    }
    ++done;
  }
  if (done > 0 && sum_baseline > 0) {
    out << "avg #s-TSV: adaptive " << sum_adaptive / done << ", adaptive-kcap "
        << sum_capped / done << ", fixed-k " << sum_baseline / done << "\n";
    out << "ratio vs fixed-k: adaptive " << std::fixed << std::setprecision(2)
        << (sum_adaptive - sum_baseline) / sum_baseline * 100.0
        << "%, adaptive-kcap "
        << (sum_capped - sum_baseline) / sum_baseline * 100.0 << "%\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "tsvft: adaptive TSV fault-tolerance structure generation and planning.\n"
      "Worker count for parallel kernels follows OMP_NUM_THREADS."};
  app.require_subcommand(1);

  // ktol
  std::string ktol_graph, ktol_dot, ktol_dot_split;
  auto* ktol = app.add_subcommand("ktol", "Maximum tolerant faults of a graph");
  ktol->add_option("graph", ktol_graph, "replaceable-relation graph JSON")->required();
  ktol->add_option("--dot", ktol_dot, "write the graph as DOT");
  ktol->add_option("--dot-split", ktol_dot_split, "write the split graph as DOT");

  // gen
  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "Generate a fault-tolerance structure");
  gen->add_option("graph", gen_opt.graph_path, "replaceable-relation graph JSON")->required();
  gen->add_option("--method", gen_opt.method, "ilp or mcmf")->default_val("mcmf");
  gen->add_option("--k", gen_opt.k, "tolerated faults (default min(K, kcap))");
  gen->add_option("--kcap", gen_opt.kcap, "cap on the default k");
  gen->add_option("--seed", gen_opt.seed, "heuristic seed");
  gen->add_option("--c", gen_opt.c, "congestion cost base");
  gen->add_option("--threshold", gen_opt.threshold, "perturbation stop threshold");
  gen->add_option("--exponent-cap", gen_opt.exponent_cap, "cost exponent cap");
  gen->add_option("--timeout", gen_opt.timeout, "ILP time limit in seconds");
  gen->add_option("--out", gen_opt.out_path, "structure output file");
  gen->add_option("--lp-dump", gen_opt.lp_dump, "write the ILP model in LP format");
  gen->add_option("--dot", gen_opt.dot_path, "write the graph as DOT");

  // plan
  PlanOptions plan_opt;
  auto* planc = app.add_subcommand("plan", "Yield-driven top-down TSV planning");
  planc->add_option("instance", plan_opt.instance_path, "plan instance JSON")->required();
  planc->add_option("--baseline-k", plan_opt.baseline_k,
                    "run the fixed-k baseline with this k instead of adaptive");
  planc->add_option("--seed", plan_opt.seed, "heuristic seed");
  planc->add_option("--c", plan_opt.c, "congestion cost base");
  planc->add_option("--threshold", plan_opt.threshold, "perturbation stop threshold");
  planc->add_option("--ilp-timeout", plan_opt.ilp_timeout,
                    "per-group ILP budget before falling back to mcmf");
  planc->add_option("--yield-mode", plan_opt.yield_mode, "auto, binomial, or mc");
  planc->add_option("--mc-samples", plan_opt.mc_samples, "Monte-Carlo sample count");
  planc->add_option("--out", plan_opt.out_path, "plan report output file");

  // verify
  std::string verify_graph, verify_structure;
  int verify_k = -1;
  auto* verifyc = app.add_subcommand("verify", "Check a structure against its graph");
  verifyc->add_option("graph", verify_graph, "graph JSON")->required();
  verifyc->add_option("structure", verify_structure, "structure JSON")->required();
  verifyc->add_option("--k", verify_k, "expected k (default: structure's k)");

  // inject
  std::string inject_graph, inject_structure;
  int inject_up_to = -1;
  long long inject_samples = 0, inject_budget = 1000000;
  std::uint64_t inject_seed = 0;
  auto* injectc = app.add_subcommand("inject", "Fault-injection repairability check");
  injectc->add_option("graph", inject_graph, "graph JSON")->required();
  injectc->add_option("structure", inject_structure, "structure JSON")->required();
  injectc->add_option("--up-to", inject_up_to, "max faulty f-TSVs (default: k)");
  injectc->add_option("--samples", inject_samples,
                      "sample this many fault sets instead of exhausting");
  injectc->add_option("--budget", inject_budget, "exhaustive enumeration budget");
  injectc->add_option("--seed", inject_seed, "sampling seed");

  // synth
  SynthOptions synth_opt;
  auto* synthc = app.add_subcommand("synth", "Generate a synthetic plan instance");
  synthc->add_option("--n-ftsv", synth_opt.n_ftsv, "number of f-TSVs")->required();
  synthc->add_option("--area", synth_opt.area, "chip area WxH in um (default 300x300)");
  synthc->add_option("--bbox-scale", synth_opt.bbox_scale, "bbox size scale factor");
  synthc->add_option("--site-pitch", synth_opt.site_pitch, "site grid pitch in um");
  synthc->add_option("--seed", synth_opt.seed, "placement seed");
  synthc->add_option("--p", synth_opt.p, "TSV defect probability");
  synthc->add_option("--target-yield", synth_opt.target_yield, "target TSV yield");
  synthc->add_option("--margin", synth_opt.margin, "replaceability margin in um");
  synthc->add_option("--kcap", synth_opt.kcap, "cap on tolerated faults per group");
  synthc->add_option("--method", synth_opt.method, "final engine: ilp or mcmf");
  synthc->add_option("--out", synth_opt.out_path, "instance output file");

  // bench
  BenchOptions bench_opt;
  auto* benchc = app.add_subcommand(
      "bench", "Replay the adaptive / kcap / fixed-k comparison matrix");
  benchc->add_option("--instances", bench_opt.instances, "number of instances");
  benchc->add_option("--min-ftsv", bench_opt.min_ftsv, "smallest instance size");
  benchc->add_option("--max-ftsv", bench_opt.max_ftsv, "largest instance size");
  benchc->add_option("--seed", bench_opt.seed, "suite seed");
  benchc->add_option("--kcap", bench_opt.kcap, "kcap for the capped mode");
  benchc->add_option("--baseline-k", bench_opt.baseline_k, "k for the fixed-k baseline");
  benchc->add_flag("--sweep", bench_opt.sweep,
                   "sweep target yield 0.991..0.999 instead of the matrix");
  benchc->add_option("--p", bench_opt.p, "TSV defect probability");
  benchc->add_option("--target-yield", bench_opt.target_yield, "target TSV yield");

  try {
    std::vector<std::string> args(argv, argv + argc);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (*ktol) return cmd_ktol(ktol_graph, ktol_dot, ktol_dot_split, out);
    if (*gen) return cmd_gen(gen_opt, out, err);
    if (*planc) return cmd_plan(plan_opt, out, err);
    if (*verifyc) return cmd_verify(verify_graph, verify_structure, verify_k, out);
    if (*injectc) {
      return cmd_inject(inject_graph, inject_structure, inject_up_to, inject_samples,
                        inject_budget, inject_seed, out);
    }
    if (*synthc) return cmd_synth(synth_opt, out);
    if (*benchc) return cmd_bench(bench_opt, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const CostOverflowError& e) {
    err << "error: cost overflow: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const PlanInfeasibleError& e) {
    err << "error: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitRejectOrInternal;
  }
  err << "error: no subcommand\n";
  return kExitParse;
}

}  // namespace tsvft
