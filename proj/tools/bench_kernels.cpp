// Compares the OpenMP kernels against their serial reference
// implementations: per-f-TSV disjoint-path counting, exhaustive fault
// injection, and Monte-Carlo group yield.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tsvft/mcmf_gen.hpp"
#include "tsvft/relgraph.hpp"
#include "tsvft/rng.hpp"
#include "tsvft/structure.hpp"
#include "tsvft/tolerance.hpp"
#include "tsvft/yield.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

tsvft::RelGraph random_graph(int m, int n, double density, std::uint64_t seed) {
  tsvft::SplitMix64 rng(seed);
  std::vector<std::string> f_ids, s_ids;
  for (int i = 0; i < m; ++i) f_ids.push_back("f" + std::to_string(i + 1));
  for (int j = 0; j < n; ++j) s_ids.push_back("s" + std::to_string(j + 1));
  std::vector<std::pair<std::string, std::string>> edges;
  for (int u = 0; u < m; ++u) {
    for (int v = 0; v < m + n; ++v) {
      if (v == u) continue;
      if (rng.uniform01() < density) {
        edges.emplace_back(f_ids[static_cast<size_t>(u)],
                           v < m ? f_ids[static_cast<size_t>(v)]
                                 : s_ids[static_cast<size_t>(v - m)]);
      }
    }
  }
  return tsvft::build_from_edges(f_ids, s_ids, edges);
}

void report(const char* name, double serial_s, double parallel_s, bool same) {
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  match %s\n",
              name, serial_s, parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0,
              same ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif

  // Kernel 1: per-f-TSV disjoint path counts on a large group.
  {
    tsvft::RelGraph g = random_graph(160, 40, 0.22, 11);
    auto t0 = Clock::now();
    tsvft::ToleranceReport serial = tsvft::max_tolerant_faults_serial(g);
    double ts = seconds(t0);
    auto t1 = Clock::now();
    tsvft::ToleranceReport parallel = tsvft::max_tolerant_faults(g);
    double tp = seconds(t1);
    report("tolerance (160f/40s)", ts, tp,
           serial.k == parallel.k && serial.nd == parallel.nd);
  }

  // Kernel 2: exhaustive fault injection on a mid-size structure.
  {
    tsvft::RelGraph g = random_graph(18, 6, 0.5, 12);
    int k = std::min(3, tsvft::max_tolerant_faults(g).k);
    if (k >= 1) {
      tsvft::HeuristicConfig cfg;
      tsvft::ToleranceStructure st = tsvft::generate(g, k, cfg);
      auto t0 = Clock::now();
      auto serial = tsvft::exhaustive_injection_serial(st, g, std::min(5, g.m));
      double ts = seconds(t0);
      auto t1 = Clock::now();
      auto parallel = tsvft::exhaustive_injection(st, g, std::min(5, g.m));
      double tp = seconds(t1);
      report("injection (18f, size<=5)", ts, tp,
             serial.repairable_count == parallel.repairable_count &&
                 serial.first_counterexample == parallel.first_counterexample);
    }
  }

  // Kernel 3: Monte-Carlo group yield.
  {
    tsvft::RelGraph g = random_graph(12, 5, 0.5, 13);
    int k = std::min(2, tsvft::max_tolerant_faults(g).k);
    if (k >= 1) {
      tsvft::HeuristicConfig cfg;
      tsvft::ToleranceStructure st = tsvft::generate(g, k, cfg);
      tsvft::YieldParams params;
      params.p = 0.01;
      params.mode = tsvft::YieldMode::MonteCarlo;
      params.samples = 4000000;
      params.seed = 5;
      auto t0 = Clock::now();
      double serial = tsvft::group_yield_serial(g, st, params);
      double ts = seconds(t0);
      auto t1 = Clock::now();
      double parallel = tsvft::group_yield(g, st, params);
      double tp = seconds(t1);
      report("monte-carlo yield (4M)", ts, tp, serial == parallel);
    }
  }
  return 0;
}
