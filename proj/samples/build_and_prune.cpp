// Sample a clause system, count its K_{2,2}s, prune, and verify the
// survivors are butterfly-free.

#include <iostream>

#include "cnfgraph/cnfgraph.hpp"

int main() {
  using namespace cnfgraph;

  ModelParams params;
  params.d = 10.0;
  params.p = 0.3;
  params.n_left = 120;
  params.n_right = 120;
  params.seed = 7;

  ClauseSystem64 cs = sample_cnf<Mask64>(params);
  std::cout << "clauses: " << cs.n << "\n";
  std::cout << "average degree: " << average_degree(cs) << "\n";

  K22Report report = count_k22(cs);
  std::cout << "k22 total: " << report.total << " (" << to_string(report.algorithm)
            << ")\n";

  std::uint64_t threshold = default_threshold(params);
  PrunedGraph<Mask64> pg = prune(cs, threshold);
  std::cout << "threshold: " << threshold << ", survivors: "
            << pg.stats.surviving_count << ", surviving avg degree: "
            << pg.stats.surviving_average_degree << "\n";

  ClauseSystem64 restricted = restricted_system(pg);
  std::cout << "k22 after pruning: " << count_k22(restricted).total << "\n";
  std::cout << "cnf lower bound: " << cnf_size_lower_bound(materialize(cs)) << "\n";
  return 0;
}
