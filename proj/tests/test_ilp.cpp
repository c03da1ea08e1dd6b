#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tsvft/errors.hpp"
#include "tsvft/ilp.hpp"
#include "tsvft/mcmf_gen.hpp"
#include "tsvft/rng.hpp"
#include "tsvft/tolerance.hpp"

using namespace tsvft;

TEST_CASE("model variable counts follow the m*n*|E'| accounting") {
  RelGraph g = fixtures::fig3_graph();
  IlpModel model = build_adaptive_model(split(g), 2);
  CHECK(model.num_edges() == 9 + 10);
  CHECK(model.x_count() == 5LL * 4 * 19);
  CHECK(model.v_count() == 20);
  CHECK(model.d_count() == 19);
}

TEST_CASE("k out of range is rejected") {
  SplitGraph sg = split(fixtures::fig3_graph());
  CHECK_THROWS_AS(build_adaptive_model(sg, 0), PreconditionError);
  CHECK_THROWS_AS(build_adaptive_model(sg, 5), PreconditionError);
}

TEST_CASE("optimal structure on the five-f-TSV fixture uses three spares") {
  RelGraph g = fixtures::fig3_graph();
  SolveOutcome outcome = solve(build_adaptive_model(split(g), 2));
  REQUIRE(outcome.status == SolveStatus::Optimal);
  CHECK(outcome.lambda1 == 2);
  CHECK(outcome.lambda2 == 3);
  REQUIRE(outcome.structure.has_value());
  CHECK(verify(*outcome.structure, g, 2).accepted);
  // Every valid 2-fault structure on this fixture traverses all ten edges.
  CHECK(connections(*outcome.structure).size() == 10);
  StructureMetrics ms = metrics(*outcome.structure, g);
  CHECK(ms.max_mux_ports <= 3);
  CHECK(ms.max_indegree == outcome.lambda1);
}

TEST_CASE("optimal structure on the four-f-TSV fixture") {
  RelGraph g = fixtures::fig1_graph();
  SolveOutcome outcome = solve(build_adaptive_model(split(g), 2));
  REQUIRE(outcome.status == SolveStatus::Optimal);
  CHECK(outcome.lambda1 == 2);
  CHECK(outcome.lambda2 == 2);
  CHECK(metrics(*outcome.structure, g).max_mux_ports <= 3);
  CHECK(verify(*outcome.structure, g, 2).accepted);
}

TEST_CASE("complete bipartite graph at k=n forces the all-to-all structure") {
  std::vector<std::pair<std::string, std::string>> edges;
  for (const char* f : {"f1", "f2", "f3", "f4"}) {
    for (const char* s : {"s1", "s2"}) edges.emplace_back(f, s);
  }
  RelGraph g = build_from_edges({"f1", "f2", "f3", "f4"}, {"s1", "s2"}, edges);
  SolveOutcome outcome = solve(build_adaptive_model(split(g), 2));
  REQUIRE(outcome.status == SolveStatus::Optimal);
  CHECK(outcome.lambda1 == 4);  // every f-TSV feeds every spare
  CHECK(outcome.lambda2 == 2);

  SolveOutcome baseline = solve_fixed_k_baseline(split(g), 2);
  REQUIRE(baseline.status == SolveStatus::Optimal);
  CHECK(baseline.lambda1 == outcome.lambda1);
  CHECK(baseline.lambda2 == outcome.lambda2);
}

TEST_CASE("zero timeout reports Timeout") {
  SplitGraph sg = split(fixtures::fig3_graph());
  CHECK(solve(build_adaptive_model(sg, 2), 0.0).status == SolveStatus::Timeout);
  CHECK(solve_fixed_k_baseline(sg, 2, 0.0).status == SolveStatus::Timeout);
}

TEST_CASE("no spare subset of size two admits a structure on the fixture") {
  SolveOutcome outcome = solve_fixed_k_baseline(split(fixtures::fig3_graph()), 2);
  CHECK(outcome.status == SolveStatus::Infeasible);
}

TEST_CASE("solve is infeasible only above the true K") {
  RelGraph g = fixtures::fig3_graph();
  SolveOutcome outcome = solve(build_adaptive_model(split(g), 3));
  CHECK(outcome.status == SolveStatus::Infeasible);
}

TEST_CASE("objective equals the exhaustive optimum on tiny graphs") {
  SplitMix64 rng(301);
  int done = 0;
  while (done < 12) {
    RelGraph g = fixtures::random_graph(rng, 4, 3, 14);
    int k = max_tolerant_faults(g).k;
    if (k < 1) continue;
    SolveOutcome outcome = solve(build_adaptive_model(split(g), k), 60.0);
    REQUIRE(outcome.status == SolveStatus::Optimal);
    CHECK(outcome.objective() == oracles::structure_optimum(g, k));
    CHECK(verify(*outcome.structure, g, k).accepted);
    ++done;
  }
}

TEST_CASE("adaptive objective never exceeds the fixed-k baseline") {
  SplitMix64 rng(307);
  int done = 0;
  while (done < 10) {
    RelGraph g = fixtures::random_graph(rng, 4, 3);
    int k = max_tolerant_faults(g).k;
    if (k < 1) continue;
    SolveOutcome adaptive = solve(build_adaptive_model(split(g), k), 60.0);
    SolveOutcome baseline = solve_fixed_k_baseline(split(g), k, 60.0);
    REQUIRE(adaptive.status == SolveStatus::Optimal);
    if (baseline.status == SolveStatus::Optimal) {
      CHECK(adaptive.objective() <= baseline.objective());
    }
    ++done;
  }
}

TEST_CASE("LP dump is deterministic and shaped like a program") {
  IlpModel model = build_adaptive_model(split(fixtures::fig1_graph()), 2);
  std::string lp = dump_lp(model);
  CHECK(lp.find("Minimize") != std::string::npos);
  CHECK(lp.find("obj: l1 + l2") != std::string::npos);
  CHECK(lp.find("Binaries") != std::string::npos);
  CHECK(lp.find("kpaths_f1p:") != std::string::npos);
  CHECK(lp == dump_lp(model));
}
