#include "tsvft/planner.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tsvft/errors.hpp"
#include "tsvft/ilp.hpp"
#include "tsvft/mcmf_gen.hpp"
#include "tsvft/rng.hpp"
#include "tsvft/tolerance.hpp"

namespace tsvft {

namespace {

struct Coverage {
  // Per f-TSV: indices of sites inside its margin-expanded bbox.
  std::vector<std::vector<int>> sites_of;
  // Per f-TSV: other f-TSVs inside its margin-expanded bbox.
  std::vector<std::vector<int>> ftsvs_of;
};

std::pair<std::vector<int>, std::vector<int>> bipartition_impl(
    const std::vector<int>& members, const PlanInstance& instance, const Coverage& cov);

Coverage compute_coverage(const PlanInstance& inst, double margin) {
  Coverage cov;
  const int m = static_cast<int>(inst.f_tsvs.size());
  const int s = static_cast<int>(inst.s_sites.size());
  cov.sites_of.assign(static_cast<size_t>(m), {});
  cov.ftsvs_of.assign(static_cast<size_t>(m), {});
  for (int f = 0; f < m; ++f) {
    const Rect box = inst.f_tsvs[static_cast<size_t>(f)].bbox.expanded(margin);
    for (int j = 0; j < s; ++j) {
      const auto& site = inst.s_sites[static_cast<size_t>(j)];
      if (box.contains(site.x, site.y)) cov.sites_of[static_cast<size_t>(f)].push_back(j);
    }
    for (int other = 0; other < m; ++other) {
      if (other == f) continue;
      const auto& tsv = inst.f_tsvs[static_cast<size_t>(other)];
      if (box.contains(tsv.x, tsv.y)) cov.ftsvs_of[static_cast<size_t>(f)].push_back(other);
    }
  }
  return cov;
}

std::vector<int> group_sites(const std::vector<int>& members, const Coverage& cov,
                             const std::vector<char>& claimed) {
  std::set<int> sites;
  for (int f : members) {
    for (int j : cov.sites_of[static_cast<size_t>(f)]) {
      if (!claimed[static_cast<size_t>(j)]) sites.insert(j);
    }
  }
  return {sites.begin(), sites.end()};
}

RelGraph group_graph(const PlanInstance& inst, const std::vector<int>& members,
                     const std::vector<int>& sites, double margin) {
  LayoutGroup lg;
  lg.margin = margin;
  for (int f : members) lg.f_tsvs.push_back(inst.f_tsvs[static_cast<size_t>(f)]);
  for (int j : sites) lg.s_sites.push_back(inst.s_sites[static_cast<size_t>(j)]);
  return build_from_layout(lg);
}

ToleranceStructure empty_structure(const RelGraph& g) {
  ToleranceStructure st;
  st.k = 0;
  for (int f = 0; f < g.m; ++f) st.paths[g.id_of(f)] = {};
  return st;
}

std::uint64_t group_seed(std::uint64_t base, const std::vector<int>& members) {
  std::uint64_t h = base;
  for (int f : members) h = derive_seed(h, static_cast<std::uint64_t>(f) + 0x51);
  return h;
}

HeuristicConfig heuristic_config(const PlanConfig& cfg, const std::vector<int>& members) {
  HeuristicConfig h;
  h.c = cfg.c;
  h.perturb_threshold = cfg.perturb_threshold;
  h.exponent_cap = cfg.exponent_cap;
  h.seed = group_seed(cfg.seed, members);
  return h;
}

double final_group_yield(const RelGraph& g, const ToleranceStructure& st,
                         const StructureMetrics& ms, const PlanParams& params,
                         const PlanConfig& cfg) {
  YieldParams yp;
  yp.p = params.p;
  yp.seed = cfg.seed;
  yp.samples = cfg.mc_samples;
  if (cfg.final_yield_mode == "binomial") {
    yp.mode = YieldMode::Binomial;
  } else if (cfg.final_yield_mode == "mc") {
    yp.mode = YieldMode::MonteCarlo;
  } else {  // auto
    yp.mode = (g.m + ms.used_stsvs <= 20) ? YieldMode::ExactEnum : YieldMode::Binomial;
  }
  return group_yield(g, st, yp);
}

// One evaluated group in the partitioning loop.
struct Group {
  int id = 0;
  std::vector<int> members;
  RelGraph cand;
  int k_max = 0;
  int k_used = 0;
  ToleranceStructure temp_st;
  double yield = 1.0;
};

class Planner {
 public:
  Planner(const PlanInstance& inst, const PlanConfig& cfg)
      : inst_(inst), cfg_(cfg), cov_(compute_coverage(inst, inst.params.margin_um)),
        claimed_(inst.s_sites.size(), 0) {
    if (inst.params.target_yield <= 0.0 || inst.params.target_yield > 1.0) {
      throw PreconditionError("target yield must lie in (0, 1]");
    }
    if (inst.params.kcap && *inst.params.kcap < 1) {
      throw PreconditionError("kcap must be >= 1 when present");
    }
    if (inst.f_tsvs.empty()) throw PreconditionError("instance has no f-TSVs");
    for (size_t j = 0; j < inst.s_sites.size(); ++j) {
      site_index_[inst.s_sites[j].id] = static_cast<int>(j);
    }
  }

  PlanResult run_adaptive() {
    std::vector<int> all(inst_.f_tsvs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    groups_.push_back(evaluate(all));

    const int max_partitions = static_cast<int>(inst_.f_tsvs.size());
    int partitions = 0;
    double best_yield = -1.0;
    while (true) {
      double product = 1.0;
      for (const auto& grp : groups_) product *= grp.yield;
      best_yield = std::max(best_yield, product);

      if (product >= inst_.params.target_yield) {
        auto result = finalize(partitions);
        if (result) return *result;
      }
      if (!partition_worst()) {
        throw PlanInfeasibleError(
            "target TSV yield " + std::to_string(inst_.params.target_yield) +
                " unreachable; best achieved " + std::to_string(best_yield),
            best_yield, limiting_groups());
      }
      if (++partitions > max_partitions) {
        throw InternalError("partition loop exceeded its bound");
      }
    }
  }

  PlanResult run_fixed_k(int k) {
    if (k < 1) throw PreconditionError("baseline k must be >= 1");
    std::vector<int> all(inst_.f_tsvs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    fixed_groups_.push_back(make_fixed_group(all));

    const int max_partitions = static_cast<int>(inst_.f_tsvs.size());
    int partitions = 0;
    double best_yield = -1.0;
    while (true) {
      // Structural pass: every group needs k unclaimed sites shared by all
      // members.
      bool structural_ok = true;
      for (size_t gi = 0; gi < fixed_groups_.size() && structural_ok; ++gi) {
        FixedGroup& grp = fixed_groups_[gi];
        if (grp.assigned) continue;
        std::vector<int> shared = shared_sites(grp.members);
        if (static_cast<int>(shared.size()) >= k && assign_fixed(grp, shared, k)) {
          continue;
        }
        if (grp.members.size() == 1) {
          throw PlanInfeasibleError(
              "f-TSV " + inst_.f_tsvs[static_cast<size_t>(grp.members[0])].id +
                  " cannot obtain " + std::to_string(k) + " shared spare sites",
              best_yield < 0 ? 0.0 : best_yield, {fixed_label(grp)});
        }
        split_fixed(gi);
        structural_ok = false;
        if (++partitions > max_partitions) {
          throw InternalError("partition loop exceeded its bound");
        }
      }
      if (!structural_ok) continue;

      double product = 1.0;
      for (const auto& grp : fixed_groups_) product *= grp.yield;
      best_yield = std::max(best_yield, product);
      if (product >= inst_.params.target_yield) {
        return assemble_fixed(partitions);
      }

      // Partition the worst-yield group that still has >= 2 members.
      int worst = -1;
      for (size_t gi = 0; gi < fixed_groups_.size(); ++gi) {
        const auto& grp = fixed_groups_[gi];
        if (grp.members.size() < 2) continue;
        if (worst < 0 || grp.yield < fixed_groups_[static_cast<size_t>(worst)].yield ||
            (grp.yield == fixed_groups_[static_cast<size_t>(worst)].yield &&
             grp.id < fixed_groups_[static_cast<size_t>(worst)].id)) {
          worst = static_cast<int>(gi);
        }
      }
      if (worst < 0) {
        std::vector<std::string> limiting;
        for (const auto& grp : fixed_groups_) {
          if (limiting.size() < 5) limiting.push_back(fixed_label(grp));
        }
        throw PlanInfeasibleError(
            "target TSV yield " + std::to_string(inst_.params.target_yield) +
                " unreachable under fixed-k grouping; best achieved " +
                std::to_string(best_yield),
            best_yield, limiting);
      }
      release_fixed(fixed_groups_[static_cast<size_t>(worst)]);
      split_fixed(static_cast<size_t>(worst));
      if (++partitions > max_partitions) {
        throw InternalError("partition loop exceeded its bound");
      }
    }
  }

 private:
  int cap_k(int k_max) const {
    // k beyond the exponent cap cannot be priced (c^k overflows by
    // construction), so the planner never requests it.
    int k = std::min(k_max, cfg_.exponent_cap);
    if (inst_.params.kcap) k = std::min(k, *inst_.params.kcap);
    return k;
  }

  Group evaluate(std::vector<int> members) {
    Group grp;
    grp.id = next_id_++;
    grp.members = std::move(members);
    std::vector<int> sites = group_sites(grp.members, cov_, claimed_);
    grp.cand = group_graph(inst_, grp.members, sites, inst_.params.margin_um);
    grp.k_max = max_tolerant_faults(grp.cand).k;
    grp.k_used = cap_k(grp.k_max);
    grp.temp_st = empty_structure(grp.cand);
    grp.yield = 0.0;
    if (grp.k_used >= 1) {
      try {
        grp.temp_st = generate(grp.cand, grp.k_used, heuristic_config(cfg_, grp.members));
      } catch (const CostOverflowError&) {
        // Congestion beyond the cost budget: the group is too crowded to
        // structure and keeps yield 0 until it gets partitioned.
        grp.k_used = 0;
        grp.temp_st = empty_structure(grp.cand);
        return grp;
      }
    }
    YieldParams yp;
    yp.p = inst_.params.p;
    yp.mode = YieldMode::Binomial;
    grp.yield = group_yield(grp.cand, grp.temp_st, yp);
    return grp;
  }

  bool partition_worst() {
    int worst = -1;
    for (size_t gi = 0; gi < groups_.size(); ++gi) {
      const auto& grp = groups_[gi];
      if (grp.members.size() < 2) continue;
      if (worst < 0 || grp.yield < groups_[static_cast<size_t>(worst)].yield ||
          (grp.yield == groups_[static_cast<size_t>(worst)].yield &&
           grp.id < groups_[static_cast<size_t>(worst)].id)) {
        worst = static_cast<int>(gi);
      }
    }
    if (worst < 0) return false;
    auto [left, right] =
        bipartition_impl(groups_[static_cast<size_t>(worst)].members, inst_, cov_);
    groups_.erase(groups_.begin() + worst);
    groups_.push_back(evaluate(std::move(left)));
    groups_.push_back(evaluate(std::move(right)));
    return true;
  }

  std::vector<std::string> limiting_groups() const {
    std::vector<size_t> order(groups_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return groups_[a].yield < groups_[b].yield;
    });
    std::vector<std::string> out;
    for (size_t i = 0; i < order.size() && i < 5; ++i) {
      const auto& grp = groups_[order[i]];
      std::string label = "group " + std::to_string(grp.id) + " (";
      for (size_t j = 0; j < grp.members.size() && j < 4; ++j) {
        if (j) label += ", ";
        label += inst_.f_tsvs[static_cast<size_t>(grp.members[j])].id;
      }
      if (grp.members.size() > 4) label += ", ...";
      label += ")";
      out.push_back(std::move(label));
    }
    return out;
  }

  // Claims sites and regenerates final structures, worst-yield groups first.
  // Returns nothing when the finalized yield falls short, releasing claims so
  // the partition loop can continue.
  std::optional<PlanResult> finalize(int partitions) {
    std::vector<size_t> order(groups_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (groups_[a].yield != groups_[b].yield) {
        return groups_[a].yield < groups_[b].yield;
      }
      return groups_[a].id < groups_[b].id;
    });

    std::vector<char> claimed = claimed_;
    std::vector<PlanGroup> out(groups_.size());
    double product = 1.0;
    for (size_t oi = 0; oi < order.size(); ++oi) {
      const Group& grp = groups_[order[oi]];
      PlanGroup pg;
      pg.id = grp.id;
      for (int f : grp.members) pg.f_ids.push_back(inst_.f_tsvs[static_cast<size_t>(f)].id);

      std::vector<int> sites = group_sites(grp.members, cov_, claimed);
      RelGraph cand = group_graph(inst_, grp.members, sites, inst_.params.margin_um);
      pg.k_max = max_tolerant_faults(cand).k;
      pg.k_used = cap_k(pg.k_max);

      ToleranceStructure st = empty_structure(cand);
      pg.engine = "none";
      if (pg.k_used >= 1) {
        try {
          if (inst_.params.method == "ilp") {
            SolveOutcome outcome =
                solve(build_adaptive_model(split(cand), pg.k_used), cfg_.ilp_timeout_s);
            if (outcome.status == SolveStatus::Optimal) {
              st = *outcome.structure;
              pg.engine = "ilp";
            } else {
              st = generate(cand, pg.k_used, heuristic_config(cfg_, grp.members));
              pg.engine = "ilp_fallback_mcmf";
            }
          } else {
            st = generate(cand, pg.k_used, heuristic_config(cfg_, grp.members));
            pg.engine = "mcmf";
          }
        } catch (const CostOverflowError&) {
          st = empty_structure(cand);
          pg.k_used = 0;
          pg.engine = "none";
        }
      }
      pg.structure = st;
      pg.group_metrics = metrics(st, cand);
      pg.group_yield = final_group_yield(cand, st, pg.group_metrics,
                                         inst_.params, cfg_);
      product *= pg.group_yield;

      // Claim exactly the spares the structure ends at.
      std::set<std::string> used_ids;
      for (const auto& [fid, paths] : st.paths) {
        for (const auto& path : paths) {
          if (!path.empty()) used_ids.insert(path.back());
        }
      }
      for (const auto& sid : used_ids) {
        pg.allocated_stsvs.push_back(sid);
        auto it = site_index_.find(sid);
        if (it == site_index_.end()) throw InternalError("structure used unknown site " + sid);
        claimed[static_cast<size_t>(it->second)] = 1;
      }
      out[order[oi]] = std::move(pg);
    }

    if (product < inst_.params.target_yield) return std::nullopt;

    PlanResult result;
    result.groups = std::move(out);
    std::sort(result.groups.begin(), result.groups.end(),
              [](const PlanGroup& a, const PlanGroup& b) { return a.id < b.id; });
    result.iterations = partitions;
    fill_totals(result);
    return result;
  }

  void fill_totals(PlanResult& result) const {
    result.totals.num_groups = static_cast<int>(result.groups.size());
    result.totals.total_stsvs = 0;
    result.totals.max_mux_ports = 0;
    result.totals.tsv_yield = 1.0;
    for (const auto& grp : result.groups) {
      result.totals.total_stsvs += grp.group_metrics.used_stsvs;
      result.totals.max_mux_ports =
          std::max(result.totals.max_mux_ports, grp.group_metrics.max_mux_ports);
      result.totals.tsv_yield *= grp.group_yield;
    }
  }

  // ---- fixed-k baseline ----

  struct FixedGroup {
    int id = 0;
    std::vector<int> members;
    bool assigned = false;
    std::vector<int> sites;  // exactly k once assigned
    ToleranceStructure st;
    StructureMetrics ms;
    double yield = 1.0;
    std::string engine;
  };

  std::vector<int> shared_sites(const std::vector<int>& members) const {
    std::vector<int> shared;
    for (int j : cov_.sites_of[static_cast<size_t>(members[0])]) {
      if (claimed_[static_cast<size_t>(j)]) continue;
      bool everywhere = true;
      for (size_t i = 1; i < members.size() && everywhere; ++i) {
        const auto& list = cov_.sites_of[static_cast<size_t>(members[i])];
        everywhere = std::binary_search(list.begin(), list.end(), j);
      }
      if (everywhere) shared.push_back(j);
    }
    return shared;
  }

  // Returns false when even the heuristic fallback cannot price a structure
  // for the group (cost overflow); the caller then partitions it.
  bool assign_fixed(FixedGroup& grp, const std::vector<int>& shared, int k) {
    double cx = 0, cy = 0;
    for (int f : grp.members) {
      cx += inst_.f_tsvs[static_cast<size_t>(f)].x;
      cy += inst_.f_tsvs[static_cast<size_t>(f)].y;
    }
    cx /= static_cast<double>(grp.members.size());
    cy /= static_cast<double>(grp.members.size());

    std::vector<int> picked = shared;
    std::sort(picked.begin(), picked.end(), [&](int a, int b) {
      const auto& sa = inst_.s_sites[static_cast<size_t>(a)];
      const auto& sb = inst_.s_sites[static_cast<size_t>(b)];
      double da = (sa.x - cx) * (sa.x - cx) + (sa.y - cy) * (sa.y - cy);
      double db = (sb.x - cx) * (sb.x - cx) + (sb.y - cy) * (sb.y - cy);
      if (da != db) return da < db;
      return a < b;
    });
    picked.resize(static_cast<size_t>(k));
    std::sort(picked.begin(), picked.end());
    for (int j : picked) claimed_[static_cast<size_t>(j)] = 1;
    grp.sites = picked;

    RelGraph cand = group_graph(inst_, grp.members, picked, inst_.params.margin_um);
    SolveOutcome outcome = solve_fixed_k_baseline(split(cand), k, cfg_.ilp_timeout_s);
    if (outcome.status == SolveStatus::Optimal) {
      grp.st = *outcome.structure;
      grp.engine = "fixed_k_ilp";
    } else {
      try {
        grp.st = generate(cand, k, heuristic_config(cfg_, grp.members));
      } catch (const CostOverflowError&) {
        release_fixed(grp);
        return false;
      }
      grp.engine = "fixed_k_ilp_fallback_mcmf";
    }
    grp.ms = metrics(grp.st, cand);
    grp.yield = final_group_yield(cand, grp.st, grp.ms, inst_.params, cfg_);
    grp.assigned = true;
    return true;
  }

  void release_fixed(FixedGroup& grp) {
    for (int j : grp.sites) claimed_[static_cast<size_t>(j)] = 0;
    grp.sites.clear();
    grp.assigned = false;
  }

  FixedGroup make_fixed_group(std::vector<int> members) {
    FixedGroup grp;
    grp.id = next_id_++;
    grp.members = std::move(members);
    return grp;
  }

  void split_fixed(size_t gi) {
    auto members = fixed_groups_[gi].members;
    fixed_groups_.erase(fixed_groups_.begin() + static_cast<long>(gi));
    auto [left, right] = bipartition_impl(members, inst_, cov_);
    fixed_groups_.push_back(make_fixed_group(std::move(left)));
    fixed_groups_.push_back(make_fixed_group(std::move(right)));
  }

  std::string fixed_label(const FixedGroup& grp) const {
    std::string label = "group " + std::to_string(grp.id) + " (";
    for (size_t j = 0; j < grp.members.size() && j < 4; ++j) {
      if (j) label += ", ";
      label += inst_.f_tsvs[static_cast<size_t>(grp.members[j])].id;
    }
    if (grp.members.size() > 4) label += ", ...";
    return label + ")";
  }

  PlanResult assemble_fixed(int partitions) {
    PlanResult result;
    for (const auto& grp : fixed_groups_) {
      PlanGroup pg;
      pg.id = grp.id;
      for (int f : grp.members) pg.f_ids.push_back(inst_.f_tsvs[static_cast<size_t>(f)].id);
      for (int j : grp.sites) pg.allocated_stsvs.push_back(inst_.s_sites[static_cast<size_t>(j)].id);
      pg.k_max = static_cast<int>(grp.sites.size());
      pg.k_used = static_cast<int>(grp.sites.size());
      pg.structure = grp.st;
      pg.group_metrics = grp.ms;
      pg.group_yield = grp.yield;
      pg.engine = grp.engine;
      result.groups.push_back(std::move(pg));
    }
    std::sort(result.groups.begin(), result.groups.end(),
              [](const PlanGroup& a, const PlanGroup& b) { return a.id < b.id; });
    result.iterations = partitions;
    fill_totals(result);
    return result;
  }

  const PlanInstance& inst_;
  const PlanConfig& cfg_;
  Coverage cov_;
  std::vector<char> claimed_;
  std::vector<Group> groups_;
  std::vector<FixedGroup> fixed_groups_;
  std::unordered_map<std::string, int> site_index_;
  int next_id_ = 0;
};

}  // namespace

RelGraph candidate_stsvs(const std::vector<LayoutFtsv>& group_ftsvs,
                         const std::vector<LayoutSite>& sites, double margin) {
  LayoutGroup lg;
  lg.margin = margin;
  lg.f_tsvs = group_ftsvs;
  for (const auto& site : sites) {
    bool covered = false;
    for (const auto& f : group_ftsvs) {
      if (f.bbox.expanded(margin).contains(site.x, site.y)) {
        covered = true;
        break;
      }
    }
    if (covered) lg.s_sites.push_back(site);
  }
  return build_from_layout(lg);
}

namespace {

std::pair<std::vector<int>, std::vector<int>> bipartition_impl(
    const std::vector<int>& members, const PlanInstance& instance, const Coverage& cov) {
  const int count = static_cast<int>(members.size());
  if (count < 2) throw PreconditionError("cannot bipartition a singleton group");

  // Pairwise weights: shared candidate sites, plus one when either f-TSV is
  // replaceable by the other.
  std::vector<std::vector<long long>> weight(
      static_cast<size_t>(count), std::vector<long long>(static_cast<size_t>(count), 0));
  for (int a = 0; a < count; ++a) {
    for (int b = a + 1; b < count; ++b) {
      const auto& sa = cov.sites_of[static_cast<size_t>(members[static_cast<size_t>(a)])];
      const auto& sb = cov.sites_of[static_cast<size_t>(members[static_cast<size_t>(b)])];
      long long shared = 0;
      size_t ia = 0, ib = 0;
      while (ia < sa.size() && ib < sb.size()) {
        if (sa[ia] == sb[ib]) {
          ++shared;
          ++ia;
          ++ib;
        } else if (sa[ia] < sb[ib]) {
          ++ia;
        } else {
          ++ib;
        }
      }
      const auto& fa = cov.ftsvs_of[static_cast<size_t>(members[static_cast<size_t>(a)])];
      const auto& fb = cov.ftsvs_of[static_cast<size_t>(members[static_cast<size_t>(b)])];
      bool related =
          std::binary_search(fa.begin(), fa.end(), members[static_cast<size_t>(b)]) ||
          std::binary_search(fb.begin(), fb.end(), members[static_cast<size_t>(a)]);
      long long w = shared + (related ? 1 : 0);
      weight[static_cast<size_t>(a)][static_cast<size_t>(b)] = w;
      weight[static_cast<size_t>(b)][static_cast<size_t>(a)] = w;
    }
  }

  // Balance window: both sides within 45-55%, or the nearest achievable
  // split when the window is empty.
  int lo = static_cast<int>(std::ceil(0.45 * count));
  int hi = static_cast<int>(std::floor(0.55 * count));
  if (lo > hi) {
    lo = count / 2;
    hi = count - count / 2;
    if (lo > hi) std::swap(lo, hi);
  }
  lo = std::max(lo, 1);
  hi = std::min(hi, count - 1);

  // Initial split: sort along the longer spatial axis and cut in half.
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (int i = 0; i < count; ++i) {
    const auto& f = instance.f_tsvs[static_cast<size_t>(members[static_cast<size_t>(i)])];
    xmin = std::min(xmin, f.x);
    xmax = std::max(xmax, f.x);
    ymin = std::min(ymin, f.y);
    ymax = std::max(ymax, f.y);
  }
  const bool by_x = (xmax - xmin) >= (ymax - ymin);
  std::vector<int> order(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& fa = instance.f_tsvs[static_cast<size_t>(members[static_cast<size_t>(a)])];
    const auto& fb = instance.f_tsvs[static_cast<size_t>(members[static_cast<size_t>(b)])];
    double ka = by_x ? fa.x : fa.y;
    double kb = by_x ? fb.x : fb.y;
    if (ka != kb) return ka < kb;
    return a < b;
  });
  std::vector<char> side(static_cast<size_t>(count), 1);
  for (int i = 0; i < count / 2; ++i) side[static_cast<size_t>(order[static_cast<size_t>(i)])] = 0;

  auto cut_of = [&](const std::vector<char>& s) {
    long long cut = 0;
    for (int a = 0; a < count; ++a) {
      for (int b = a + 1; b < count; ++b) {
        if (s[static_cast<size_t>(a)] != s[static_cast<size_t>(b)]) {
          cut += weight[static_cast<size_t>(a)][static_cast<size_t>(b)];
        }
      }
    }
    return cut;
  };

  // FM-style passes: move every vertex once per pass (best gain first, one
  // step of imbalance allowed mid-pass), keep the best balanced prefix.
  // Gains are maintained incrementally, so a pass costs O(count^2).
  long long best_cut = cut_of(side);
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<char> work = side;
    std::vector<char> locked(static_cast<size_t>(count), 0);
    std::vector<long long> gain(static_cast<size_t>(count), 0);
    for (int v = 0; v < count; ++v) {
      for (int u = 0; u < count; ++u) {
        if (u == v) continue;
        long long w = weight[static_cast<size_t>(v)][static_cast<size_t>(u)];
        gain[static_cast<size_t>(v)] +=
            (work[static_cast<size_t>(u)] != work[static_cast<size_t>(v)]) ? w : -w;
      }
    }
    int left = 0;
    for (char s : work) {
      if (s == 0) ++left;
    }
    std::vector<std::pair<int, long long>> history;  // (vertex, cut after move)
    long long cut = best_cut;
    for (int step = 0; step < count; ++step) {
      int best_v = -1;
      long long best_gain = 0;
      for (int v = 0; v < count; ++v) {
        if (locked[static_cast<size_t>(v)]) continue;
        int new_left = left + (work[static_cast<size_t>(v)] == 0 ? -1 : 1);
        if (new_left < lo - 1 || new_left > hi + 1) continue;
        if (best_v < 0 || gain[static_cast<size_t>(v)] > best_gain) {
          best_v = v;
          best_gain = gain[static_cast<size_t>(v)];
        }
      }
      if (best_v < 0) break;
      left += (work[static_cast<size_t>(best_v)] == 0 ? -1 : 1);
      work[static_cast<size_t>(best_v)] ^= 1;
      locked[static_cast<size_t>(best_v)] = 1;
      cut -= best_gain;
      for (int u = 0; u < count; ++u) {
        if (u == best_v) continue;
        long long w = weight[static_cast<size_t>(best_v)][static_cast<size_t>(u)];
        if (w == 0) continue;
        gain[static_cast<size_t>(u)] +=
            (work[static_cast<size_t>(u)] == work[static_cast<size_t>(best_v)]) ? -2 * w
                                                                                : 2 * w;
      }
      gain[static_cast<size_t>(best_v)] = -gain[static_cast<size_t>(best_v)];
      history.emplace_back(best_v, cut);
    }
    // Best balanced prefix.
    int best_prefix = -1;
    long long prefix_cut = best_cut;
    {
      std::vector<char> replay = side;
      int replay_left = 0;
      for (char s : side) {
        if (s == 0) ++replay_left;
      }
      for (size_t i = 0; i < history.size(); ++i) {
        int v = history[i].first;
        replay_left += (replay[static_cast<size_t>(v)] == 0 ? -1 : 1);
        replay[static_cast<size_t>(v)] ^= 1;
        if (replay_left >= lo && replay_left <= hi && history[i].second < prefix_cut) {
          prefix_cut = history[i].second;
          best_prefix = static_cast<int>(i);
        }
      }
    }
    if (best_prefix < 0) break;
    for (int i = 0; i <= best_prefix; ++i) {
      side[static_cast<size_t>(history[static_cast<size_t>(i)].first)] ^= 1;
    }
    best_cut = prefix_cut;
  }

  std::vector<int> left_members, right_members;
  for (int i = 0; i < count; ++i) {
    if (side[static_cast<size_t>(i)] == 0) {
      left_members.push_back(members[static_cast<size_t>(i)]);
    } else {
      right_members.push_back(members[static_cast<size_t>(i)]);
    }
  }
  if (left_members.empty() || right_members.empty()) {
    throw InternalError("bipartition produced an empty side");
  }
  return {left_members, right_members};
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> bipartition(
    const std::vector<int>& members, const PlanInstance& instance, double margin) {
  Coverage cov = compute_coverage(instance, margin);
  return bipartition_impl(members, instance, cov);
}

PlanResult plan(const PlanInstance& instance, const PlanConfig& config) {
  Planner planner(instance, config);
  return planner.run_adaptive();
}

PlanResult plan_fixed_k(const PlanInstance& instance, int k, const PlanConfig& config) {
  Planner planner(instance, config);
  return planner.run_fixed_k(k);
}

}  // namespace tsvft
