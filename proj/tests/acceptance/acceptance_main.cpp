// Acceptance suite: one pass/fail line per criterion, nonzero exit if
// any fails. argv[1] must name the CLI binary (used by the determinism
// criterion).

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cnfgraph/cnfgraph.hpp"

namespace fs = std::filesystem;
using namespace cnfgraph;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

constexpr std::uint64_t kAcceptanceSeed = 20240810;

// ---------------------------------------------------------------- 1
// Exact oracle equivalence on random small instances.
Outcome criterion_oracle_equivalence() {
  Outcome out;
  SplitMix64 gen(kAcceptanceSeed);
  int instances = 0;
  for (double p : {0.1, 0.3, 0.5}) {
    for (int t = 0; t < 72; ++t) {
      ModelParams params;
      params.p = p;
      params.n_left = 1 + static_cast<int>(gen.next() % 40);
      params.n_right = 1 + static_cast<int>(gen.next() % 40);
      params.n_clauses = static_cast<int>(gen.next() % 9);
      params.seed = gen.next();
      ClauseSystem64 cs = sample_cnf<Mask64>(params);
      ++instances;

      K22Report fast = count_k22(cs);
      K22Report pairs = count_k22_class_pair(cs);
      K22Report oracle = count_k22_explicit(materialize(cs));
      out.expect(fast.total == oracle.total, "k22 total mismatch vs oracle");
      out.expect(fast.left_participation == oracle.left_participation,
                 "left participation mismatch vs oracle");
      out.expect(fast.right_participation == oracle.right_participation,
                 "right participation mismatch vs oracle");
      out.expect(pairs.total == oracle.total &&
                     pairs.left_participation == oracle.left_participation &&
                     pairs.right_participation == oracle.right_participation,
                 "class-pair path disagrees with oracle");
      for (int v = 0; v < cs.n_left(); ++v)
        out.expect(degree(cs, v) == neighborhood(cs, v).size(),
                   "degree != |neighborhood|");
      if (!out.pass) return out;
    }
  }
  out.expect(instances >= 200, "fewer than 200 instances");
  return out;
}

// ---------------------------------------------------------------- 2
// Closed forms against outcome enumeration, and the quadratic
// expansion envelope.
Outcome criterion_closed_forms() {
  Outcome out;
  for (int n = 0; n <= 6 && out.pass; ++n) {
    std::uint64_t outcomes = 1;
    for (int i = 0; i < n; ++i) outcomes *= 4;
    for (int pi = 0; pi <= 20; ++pi) {
      double p = static_cast<double>(pi) / 20.0;
      double brute = 0.0;
      for (std::uint64_t code = 0; code < outcomes; ++code) {
        double prob = 1.0;
        bool edge = true;
        std::uint64_t c = code;
        for (int i = 0; i < n; ++i) {
          int x = static_cast<int>(c % 2);
          int y = static_cast<int>((c / 2) % 2);
          c /= 4;
          prob *= (x ? p : 1.0 - p) * (y ? p : 1.0 - p);
          if (x && y) edge = false;
        }
        if (edge) brute += prob;
      }
      if (std::abs(edge_probability(p, n) - brute) > 1e-12) {
        out.fail("edge probability off at p=" + std::to_string(p) +
                 " n=" + std::to_string(n));
        break;
      }
    }
  }
  for (int pi = 0; pi <= 20; ++pi) {
    double p = static_cast<double>(pi) / 20.0;
    double brute = 0.0;
    for (int code = 0; code < 16; ++code) {
      int a1 = code & 1, a2 = (code >> 1) & 1;
      int b1 = (code >> 2) & 1, b2 = (code >> 3) & 1;
      double prob = (a1 ? p : 1 - p) * (a2 ? p : 1 - p) * (b1 ? p : 1 - p) *
                    (b2 ? p : 1 - p);
      if (!((a1 || a2) && (b1 || b2))) brute += prob;
    }
    double survival = k22_clause_survival(p);
    out.expect(std::abs(survival - brute) <= 1e-12,
               "survival off at p=" + std::to_string(p));
    out.expect(std::abs(survival - (1.0 - 4.0 * p * p)) <= 4.0 * p * p * p + 1e-15,
               "expansion envelope violated at p=" + std::to_string(p));
  }
  return out;
}

ExperimentConfig default_acceptance_config() {
  ExperimentConfig config;
  config.params.p = 0.3;
  config.params.n_left = 300;
  config.params.n_right = 300;
  config.params.n_clauses = 10;
  config.replicates = 100;
  config.threshold_safety = 0.5;
  config.degree_band = 4.0;
  config.master_seed = kAcceptanceSeed;
  return config;
}

// ---------------------------------------------------------------- 3
// Statistical match between empirical means and the closed forms.
Outcome criterion_expectation_match(const ExperimentReport& rep) {
  Outcome out;
  double expected_density = std::pow(0.91, 10);
  double expected_k22_total = static_cast<double>(choose2(300)) *
                              static_cast<double>(choose2(300)) *
                              std::pow(k22_clause_survival(0.3), 10);
  out.expect(rep.completed == 100, "incomplete replicates");
  out.expect(std::abs(*rep.edge_density.expected - expected_density) <
                 1e-9 * expected_density,
             "edge density expectation drifted from (1-p^2)^n");
  out.expect(std::abs(*rep.k22_total.expected - expected_k22_total) <
                 1e-9 * expected_k22_total,
             "k22 expectation drifted from C(300,2)^2 survival^10");
  out.expect(std::abs(*rep.edge_density.z_score) <= 5.0,
             "edge density off by more than 5 standard errors (z=" +
                 format_double(*rep.edge_density.z_score) + ")");
  out.expect(std::abs(*rep.k22_total.z_score) <= 5.0,
             "k22 total off by more than 5 standard errors (z=" +
                 format_double(*rep.k22_total.z_score) + ")");
  return out;
}

// ---------------------------------------------------------------- 4
// Pruned graphs are exactly K22-free with survivor neighborhoods
// unchanged: checked on every replicate of the default config, and on
// a sparse batch with nontrivial survivor sets verified against the
// explicit oracle.
Outcome criterion_pruning(const ExperimentConfig& config, const ExperimentReport& rep) {
  Outcome out;
  for (const ReplicateRow& row : rep.rows) {
    out.expect(!row.skipped, "unexpected skip in default config");
    if (row.skipped) continue;
    out.expect(*row.pruned_k22_total == 0, "nonzero pruned k22 in a row");
  }
  // re-derive each replicate and verify freeness + neighborhoods
  for (const ReplicateRow& row : rep.rows) {
    ModelParams params = config.params;
    params.seed = row.seed;
    ClauseSystem64 cs = sample_cnf<Mask64>(params);
    K22Report report = count_k22(cs);
    std::vector<std::uint64_t> degs = degrees(cs);
    std::vector<int> survivors;
    detail::side_prune(degs, report.left_participation, rep.threshold, survivors);
    out.expect(survivors.size() == *row.surviving_count,
               "replicate survivors disagree with the report");
    ClauseSystem64 restricted;
    restricted.n = cs.n;
    for (int v : survivors)
      restricted.left_masks.push_back(cs.left_masks[static_cast<std::size_t>(v)]);
    restricted.right_masks = cs.right_masks;
    out.expect(count_k22(restricted).total == 0, "restricted count nonzero");
    for (std::size_t i = 0; i < survivors.size(); ++i)
      out.expect(neighborhood(restricted, static_cast<int>(i)) ==
                     neighborhood(cs, survivors[i]),
                 "survivor neighborhood changed");
    if (!out.pass) return out;
  }

  // sparse regime: wide masks, few butterflies, many survivors
  SplitMix64 gen(kAcceptanceSeed + 4);
  bool saw_mixed_survivors = false;
  for (int t = 0; t < 30; ++t) {
    ModelParams params;
    params.p = 0.3;
    params.n_left = 60;
    params.n_right = 60;
    params.n_clauses = 40;
    params.seed = gen.next();
    ClauseSystem64 cs = sample_cnf<Mask64>(params);
    auto pg = prune(cs, 1);
    auto restricted = restricted_system(pg);
    out.expect(count_k22(restricted).total == 0, "sparse restricted count nonzero");
    out.expect(count_k22_explicit(materialize(restricted)).total == 0,
               "oracle found a K22 after pruning");
    for (std::size_t i = 0; i < pg.surviving_left.size(); ++i)
      out.expect(neighborhood(restricted, static_cast<int>(i)) ==
                     neighborhood(cs, pg.surviving_left[i]),
                 "sparse survivor neighborhood changed");
    if (pg.stats.surviving_count > 0 &&
        pg.stats.surviving_count < static_cast<std::uint64_t>(cs.n_left()))
      saw_mixed_survivors = true;
    if (!out.pass) return out;
  }
  out.expect(saw_mixed_survivors, "sparse batch never produced a proper survivor set");
  return out;
}

// ---------------------------------------------------------------- 5
// Sharpness: distinct neighborhoods <= 2^n and the certified lower
// bound never exceeds the clause count used.
Outcome criterion_sharpness(const ExperimentReport& rep) {
  Outcome out;
  for (const ReplicateRow& row : rep.rows) {
    out.expect(row.distinct_neighborhoods <=
                   (std::uint64_t{1} << std::min(row.n_clauses, 63)),
               "distinct neighborhoods above 2^n in a report row");
    out.expect(row.lower_bound <= row.n_clauses, "lower bound above n in a row");
  }
  SplitMix64 gen(kAcceptanceSeed + 5);
  for (int t = 0; t < 60; ++t) {
    ModelParams params;
    params.p = (t % 3 == 0) ? 0.1 : (t % 3 == 1) ? 0.3 : 0.5;
    params.n_left = 2 + static_cast<int>(gen.next() % 39);
    params.n_right = 2 + static_cast<int>(gen.next() % 39);
    params.n_clauses = static_cast<int>(gen.next() % 21);
    params.seed = gen.next();
    ClauseSystem64 cs = sample_cnf<Mask64>(params);
    std::uint64_t distinct = distinct_neighborhood_count(cs, 0);
    out.expect(distinct <= (std::uint64_t{1} << cs.n),
               "distinct neighborhoods above 2^n");
    int bound = cnf_size_lower_bound(materialize(cs));
    out.expect(bound <= cs.n, "materialized lower bound above n");
    out.expect(distinct == distinct_neighborhood_count(materialize(cs), 0),
               "mask-side distinct count disagrees with the materialized graph");
    if (!out.pass) return out;
  }
  // wide masks: the dynamic representation on n = 70 clauses
  for (int t = 0; t < 3; ++t) {
    ModelParams params;
    params.p = 0.3;
    params.n_left = 50;
    params.n_right = 50;
    params.n_clauses = 70;
    params.seed = gen.next();
    ClauseSystemDyn cs = sample_cnf<MaskDyn>(params);
    std::uint64_t distinct = distinct_neighborhood_count(cs, 0);
    int bound_bits = distinct <= 1
                         ? 0
                         : static_cast<int>(std::bit_width(distinct - 1));
    out.expect(bound_bits <= 70, "wide-mask distinct count above 2^n");
    out.expect(cnf_size_lower_bound(materialize(cs)) <= cs.n,
               "wide-mask lower bound above n");
  }
  return out;
}

// ---------------------------------------------------------------- 6
// Degree concentration: within a factor-4 band of the expected degree
// for at least 90% of the left side, in at least 90% of replicates.
Outcome criterion_degree_concentration() {
  Outcome out;
  ExperimentConfig config;
  config.params.p = 0.3;
  config.params.n_left = 4096;
  config.params.n_right = 4096;
  config.params.n_clauses = 17;
  config.replicates = 50;
  config.threshold_safety = 0.5;
  config.degree_band = 4.0;
  config.master_seed = kAcceptanceSeed + 6;
  ExperimentReport rep = run_experiment(config);
  int passing = 0;
  for (const ReplicateRow& row : rep.rows)
    if (!row.skipped && row.degree_band_fraction >= 0.9) ++passing;
  out.expect(rep.completed == 50, "incomplete replicates");
  out.expect(passing >= 45,
             "band fraction >= 0.9 in only " + std::to_string(passing) +
                 "/50 replicates");
  return out;
}

// ---------------------------------------------------------------- 7
// Observed binomial tails never beat the Chernoff bound by more than
// three binomial standard errors.
Outcome criterion_chernoff() {
  Outcome out;
  auto checks = chernoff_empirical(200, 0.5, 1000, {0.05, 0.1, 0.2},
                                   kAcceptanceSeed + 7);
  for (const auto& c : checks) {
    double slack = 3.0 * std::sqrt(c.bound * (1.0 - c.bound) / 1000.0);
    out.expect(c.observed <= c.bound + slack,
               "tail frequency " + format_double(c.observed) + " above bound " +
                   format_double(c.bound) + " + " + format_double(slack) +
                   " at mu=" + format_double(c.mu));
  }
  return out;
}

// ---------------------------------------------------------------- 8
// Byte-identical CLI output for fixed seeds, across runs and thread
// counts.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.fail("path to the CLI binary was not provided");
    return out;
  }
  fs::path dir = fs::temp_directory_path() /
                 ("cnfgraph_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto run = [&](const std::string& args) {
    std::string cmd = cli + " " + args;
    return std::system(cmd.c_str()) == 0;
  };
  auto path = [&](const char* name) { return (dir / name).string(); };

  bool ok = true;
  ok = ok && run("--seed 7 gen --p 0.3 --n-left 50 --n-right 50 --n-clauses 12 -o " +
                 path("gen_a.json"));
  ok = ok && run("--seed 7 gen --p 0.3 --n-left 50 --n-right 50 --n-clauses 12 -o " +
                 path("gen_b.json"));
  ok = ok && run("count-k22 " + path("gen_a.json") + " -o " + path("k22_a.json"));
  ok = ok && run("count-k22 " + path("gen_a.json") + " -o " + path("k22_b.json"));
  ok = ok && run("expect --p 0.3 --n-clauses 10 --n-left 300 --n-right 300 "
                 "--samples 200 --mu 0.1 -o " + path("expect_a.json"));
  ok = ok && run("expect --p 0.3 --n-clauses 10 --n-left 300 --n-right 300 "
                 "--samples 200 --mu 0.1 -o " + path("expect_b.json"));
  std::string exp_args =
      "--seed 11 --format csv experiment --p 0.3 --n-clauses 8 --n-left 80 "
      "--n-right 80 --replicates 12 ";
  ok = ok && run(exp_args + "--threads 1 -o " + path("exp_t1.csv"));
  ok = ok && run(exp_args + "--threads 2 -o " + path("exp_t2.csv"));
  ok = ok && run(exp_args + "--threads 4 -o " + path("exp_t4.csv"));
  out.expect(ok, "a CLI invocation failed");

  if (ok) {
    out.expect(slurp(path("gen_a.json")) == slurp(path("gen_b.json")),
               "gen output differs between runs");
    out.expect(!slurp(path("gen_a.json")).empty(), "gen output empty");
    out.expect(slurp(path("k22_a.json")) == slurp(path("k22_b.json")),
               "count-k22 output differs between runs");
    out.expect(slurp(path("expect_a.json")) == slurp(path("expect_b.json")),
               "expect output differs between runs");
    std::string t1 = slurp(path("exp_t1.csv"));
    out.expect(!t1.empty(), "experiment output empty");
    out.expect(t1 == slurp(path("exp_t2.csv")),
               "experiment output differs between 1 and 2 threads");
    out.expect(t1 == slurp(path("exp_t4.csv")),
               "experiment output differs between 1 and 4 threads");
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return out;
}

int report(int id, const std::string& name, const Outcome& out, double seconds) {
  std::ostringstream line;
  line << "criterion " << id << " (" << name << "): "
       << (out.pass ? "PASS" : "FAIL");
  if (!out.pass) line << " -- " << out.detail;
  line << "  [" << format_double(seconds) << "s]";
  std::cout << line.str() << std::endl;
  return out.pass ? 0 : 1;
}

template <typename Fn>
int timed(int id, const std::string& name, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start).count();
  return report(id, name, out, seconds);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  int failures = 0;

  failures += timed(1, "oracle equivalence", criterion_oracle_equivalence);
  failures += timed(2, "closed-form reproduction", criterion_closed_forms);

  ExperimentConfig config = default_acceptance_config();
  ExperimentReport rep;
  bool rep_ok = true;
  try {
    rep = run_experiment(config);
  } catch (const std::exception& e) {
    rep_ok = false;
    Outcome out;
    out.fail(std::string("default experiment failed: ") + e.what());
    failures += report(3, "expectation match", out, 0.0);
    failures += report(4, "pruning K22-freeness", out, 0.0);
    failures += report(5, "sharpness inequality", out, 0.0);
  }
  if (rep_ok) {
    failures += timed(3, "expectation match",
                      [&]() { return criterion_expectation_match(rep); });
    failures += timed(4, "pruning K22-freeness",
                      [&]() { return criterion_pruning(config, rep); });
    failures += timed(5, "sharpness inequality",
                      [&]() { return criterion_sharpness(rep); });
  }

  failures += timed(6, "degree concentration", criterion_degree_concentration);
  failures += timed(7, "chernoff dominance", criterion_chernoff);
  failures += timed(8, "determinism", [&]() { return criterion_determinism(cli); });

  if (failures == 0)
    std::cout << "all acceptance criteria passed" << std::endl;
  else
    std::cout << failures << " acceptance criteria failed" << std::endl;
  return failures == 0 ? 0 : 1;
}
