// Command-line workbench for clause-system graphs: generation, exact
// analytics, pruning, certification and the Monte Carlo harness.
//
// Exit codes: 0 success, 2 validation error, 3 resource cap exceeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cnfgraph/cnfgraph.hpp"

namespace {

using cnfgraph::json;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

void emit_json(const std::string& path, const json& j) {
  write_output(path, j.dump(2) + "\n");
}

// key,value lines for the flat CSV rendering of a JSON object.
std::string json_to_kv_csv(const json& j) {
  std::string out = "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_structured()) continue;
    out += it.key();
    out += ',';
    out += it.value().is_string() ? it.value().get<std::string>()
                                  : it.value().dump();
    out += '\n';
  }
  return out;
}

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string format = "json";
  cnfgraph::Caps caps;
};

bool want_csv(const GlobalOptions& g) { return g.format == "csv"; }

cnfgraph::Instance load_instance_text(const std::string& text) {
  return cnfgraph::instance_from_string(text);
}

bool looks_like_edge_list(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == 'p';
  }
  return false;
}

int run_gen(const GlobalOptions& g, const cnfgraph::ModelParams& given,
            bool allow_degenerate, const std::string& out_path) {
  cnfgraph::ModelParams params = given;
  params.seed = g.seed;
  params.validate(allow_degenerate);
  int n = cnfgraph::resolved_clause_count(params);
  cnfgraph::Instance inst;
  inst.params = params;
  inst.params->n_clauses = n;
  inst.seed = params.seed;
  if (n <= cnfgraph::Mask64::kMaxBits)
    inst.cs = cnfgraph::sample_cnf<cnfgraph::Mask64>(params, allow_degenerate);
  else
    inst.cs = cnfgraph::sample_cnf<cnfgraph::MaskDyn>(params, allow_degenerate);
  emit_json(out_path, cnfgraph::instance_to_json(inst));
  return 0;
}

int run_stats(const GlobalOptions& g, const std::string& input, bool full,
              const std::string& out_path) {
  cnfgraph::Instance inst = load_instance_text(read_input(input));
  json j = std::visit(
      [&](const auto& cs) {
        json out;
        out["n"] = cs.n;
        out["n_left"] = cs.n_left();
        out["n_right"] = cs.n_right();
        auto degs = cnfgraph::degrees(cs, g.caps.sos_bits);
        std::uint64_t edges = 0, mind = 0, maxd = 0;
        for (std::size_t i = 0; i < degs.size(); ++i) {
          edges += degs[i];
          mind = i == 0 ? degs[i] : std::min(mind, degs[i]);
          maxd = std::max(maxd, degs[i]);
        }
        out["edge_count"] = edges;
        if (cs.n_left() > 0) {
          out["average_degree"] = static_cast<double>(edges) / cs.n_left();
          out["min_degree"] = mind;
          out["max_degree"] = maxd;
        }
        auto lh = cnfgraph::mask_histogram(cs, cnfgraph::Side::left);
        auto rh = cnfgraph::mask_histogram(cs, cnfgraph::Side::right);
        out["left_mask_classes"] = lh.entries.size();
        out["right_mask_classes"] = rh.entries.size();
        if (full) {
          out["degrees"] = degs;
          json lhist = json::object(), rhist = json::object();
          for (const auto& [m, c] : cnfgraph::mask_classes(lh))
            lhist[cnfgraph::mask_to_hex(m, cs.n)] = c;
          for (const auto& [m, c] : cnfgraph::mask_classes(rh))
            rhist[cnfgraph::mask_to_hex(m, cs.n)] = c;
          out["left_histogram"] = std::move(lhist);
          out["right_histogram"] = std::move(rhist);
        }
        return out;
      },
      inst.cs);
  if (want_csv(g))
    write_output(out_path, json_to_kv_csv(j));
  else
    emit_json(out_path, j);
  return 0;
}

int run_count_k22(const GlobalOptions& g, const std::string& input, bool summary,
                  const std::string& out_path) {
  cnfgraph::Instance inst = load_instance_text(read_input(input));
  cnfgraph::K22Report rep = std::visit(
      [&](const auto& cs) {
        cnfgraph::detail::check_k22_feasible(cs, g.caps);
        return cnfgraph::count_k22(cs, g.caps.sos_bits);
      },
      inst.cs);
  if (want_csv(g)) {
    std::string out = "key,value\ntotal," + std::to_string(rep.total) +
                      "\nalgorithm," + cnfgraph::to_string(rep.algorithm) + "\n";
    if (!summary) {
      out += "\nside,index,participation\n";
      for (std::size_t i = 0; i < rep.left_participation.size(); ++i)
        out += "left," + std::to_string(i) + "," +
               std::to_string(rep.left_participation[i]) + "\n";
      for (std::size_t i = 0; i < rep.right_participation.size(); ++i)
        out += "right," + std::to_string(i) + "," +
               std::to_string(rep.right_participation[i]) + "\n";
    }
    write_output(out_path, out);
  } else {
    emit_json(out_path, cnfgraph::k22_report_to_json(rep, summary));
  }
  return 0;
}

int run_prune(const GlobalOptions& g, const std::string& input,
              std::optional<std::uint64_t> threshold, double safety,
              bool prune_right, const std::string& edges_out,
              const std::string& out_path) {
  cnfgraph::Instance inst = load_instance_text(read_input(input));
  std::uint64_t t = 0;
  if (threshold) {
    t = *threshold;
  } else {
    if (!inst.params)
      throw std::invalid_argument(
          "instance carries no params; pass --threshold explicitly");
    t = cnfgraph::default_threshold(*inst.params, safety);
  }
  std::visit(
      [&](const auto& cs) {
        cnfgraph::detail::check_k22_feasible(cs, g.caps);
        cnfgraph::PruneOptions opts;
        opts.prune_right = prune_right;
        opts.sos_cap_bits = g.caps.sos_bits;
        auto pg = cnfgraph::prune(cs, t, opts);
        if (!edges_out.empty()) {
          auto restricted = cnfgraph::restricted_system(pg);
          write_output(edges_out,
                       cnfgraph::write_edge_list(
                           cnfgraph::materialize(restricted, g.caps.pairs)));
        }
        json j = cnfgraph::pruned_graph_to_json(pg);
        if (want_csv(g))
          write_output(out_path, json_to_kv_csv(j["stats"]));
        else
          emit_json(out_path, j);
      },
      inst.cs);
  return 0;
}

int run_certify(const GlobalOptions& g, const std::string& input,
                std::uint64_t min_degree, const std::string& out_path) {
  std::string text = read_input(input);
  json j;
  if (looks_like_edge_list(text)) {
    cnfgraph::ExplicitBipartiteGraph graph = cnfgraph::edge_list_from_string(text);
    std::uint64_t distinct = cnfgraph::distinct_neighborhood_count(graph, min_degree);
    j["distinct_neighborhoods"] = distinct;
    j["lower_bound"] = distinct <= 1 ? 0 : std::bit_width(distinct - 1);
  } else {
    cnfgraph::Instance inst = load_instance_text(text);
    std::visit(
        [&](const auto& cs) {
          std::uint64_t distinct =
              cnfgraph::distinct_neighborhood_count(cs, min_degree);
          int bound =
              distinct <= 1 ? 0 : static_cast<int>(std::bit_width(distinct - 1));
          j["distinct_neighborhoods"] = distinct;
          j["lower_bound"] = bound;
          j["n_clauses"] = cs.n;
          // distinct <= 2^n, phrased without overflowing 2^n
          j["distinct_le_2n"] = bound <= std::min(cs.n, 64);
          j["bound_le_n"] = bound <= cs.n;
        },
        inst.cs);
  }
  if (want_csv(g))
    write_output(out_path, json_to_kv_csv(j));
  else
    emit_json(out_path, j);
  return 0;
}

int run_expect(const GlobalOptions& g, const cnfgraph::BoundInputs& in,
               const std::string& out_path) {
  json j;
  j["p"] = in.p;
  j["n_clauses"] = in.n;
  j["n_left"] = in.n_left;
  j["n_right"] = in.n_right;
  j["edge_probability"] = cnfgraph::edge_probability(in.p, in.n);
  j["k22_clause_survival"] = cnfgraph::k22_clause_survival(in.p);
  j["k22_probability"] = cnfgraph::k22_probability(in.p, in.n);
  j["expected_degree"] = cnfgraph::expected_degree(in.n_right, in.p, in.n);
  j["expected_k22"] =
      cnfgraph::expected_k22(in.n_left, in.n_right, in.p, in.n);
  j["implied_delta"] = cnfgraph::implied_delta(in.p);
  if (in.samples && in.mu)
    j["chernoff_bound"] = cnfgraph::chernoff_bound(*in.samples, *in.mu);
  if (want_csv(g))
    write_output(out_path, json_to_kv_csv(j));
  else
    emit_json(out_path, j);
  return 0;
}

int run_experiment_cmd(const GlobalOptions& g, cnfgraph::ExperimentConfig config,
                       const std::string& out_path) {
  config.master_seed = g.seed;
  config.caps = g.caps;
  config.outputs = want_csv(g) ? cnfgraph::OutputFormat::csv
                               : cnfgraph::OutputFormat::json;
  cnfgraph::ExperimentReport rep = cnfgraph::run_experiment(config);
  if (config.outputs == cnfgraph::OutputFormat::csv)
    write_output(out_path, cnfgraph::experiment_report_to_csv(rep));
  else
    emit_json(out_path, cnfgraph::experiment_report_to_json(rep));
  return 0;
}

int run_compare_cmd(const GlobalOptions& g, cnfgraph::ExperimentConfig config,
                    const std::string& out_path) {
  config.master_seed = g.seed;
  config.caps = g.caps;
  cnfgraph::CompareReport rep = cnfgraph::compare_models(config);
  if (want_csv(g))
    write_output(out_path, cnfgraph::compare_report_to_csv(rep));
  else
    emit_json(out_path, cnfgraph::compare_report_to_json(rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clause-system bipartite graph workbench"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "master seed for sampling commands");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--cap-pairs", g.caps.pairs, "materialization pair cap");
  app.add_option("--cap-sos-bits", g.caps.sos_bits, "subset-sum table bit cap");
  app.add_option("--cap-fallback-ops", g.caps.fallback_ops,
                 "class-pair counting ops cap");
  app.add_option("--cap-quads", g.caps.quadruples, "explicit-count quadruple cap");

  // gen
  cnfgraph::ModelParams gen_params;
  bool gen_degenerate = false;
  int gen_n_clauses = -1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "sample a random clause system");
  gen->add_option("--p", gen_params.p, "per-bit probability")->required();
  gen->add_option("--d", gen_params.d, "target average degree");
  gen->add_option("--n-left", gen_params.n_left, "left side size")->required();
  gen->add_option("--n-right", gen_params.n_right, "right side size")->required();
  gen->add_option("--n-clauses", gen_n_clauses, "explicit clause count");
  gen->add_flag("--allow-degenerate-p", gen_degenerate, "accept p in {0,1} (testing)");
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");
  gen->callback([&]() {
    if (gen_n_clauses >= 0) gen_params.n_clauses = gen_n_clauses;
    run_gen(g, gen_params, gen_degenerate, gen_out);
  });

  // stats
  std::string stats_in, stats_out;
  bool stats_full = false;
  auto* stats = app.add_subcommand("stats", "degrees and mask histograms");
  stats->add_option("input", stats_in, "instance JSON file, or - for stdin")
      ->required();
  stats->add_flag("--full", stats_full, "include per-vertex degrees and histograms");
  stats->add_option("-o,--output", stats_out, "output file (default stdout)");
  stats->callback([&]() { run_stats(g, stats_in, stats_full, stats_out); });

  // count-k22
  std::string k22_in, k22_out;
  bool k22_summary = false;
  auto* k22 = app.add_subcommand("count-k22", "exact K_{2,2} count and participation");
  k22->add_option("input", k22_in, "instance JSON file, or - for stdin")->required();
  k22->add_flag("--summary", k22_summary, "omit participation arrays");
  k22->add_option("-o,--output", k22_out, "output file (default stdout)");
  k22->callback([&]() { run_count_k22(g, k22_in, k22_summary, k22_out); });

  // prune
  std::string prune_in, prune_out, prune_edges_out;
  double prune_safety = 0.5;
  std::uint64_t prune_threshold_val = 0;
  bool prune_right = false;
  auto* prune = app.add_subcommand("prune", "remove low-degree and K_{2,2} vertices");
  prune->add_option("input", prune_in, "instance JSON file, or - for stdin")
      ->required();
  auto* thr_opt = prune->add_option("--threshold", prune_threshold_val,
                                    "explicit degree threshold");
  prune->add_option("--safety", prune_safety,
                    "safety factor for the default threshold");
  prune->add_flag("--prune-right", prune_right, "also prune the right side");
  prune->add_option("--edges-out", prune_edges_out,
                    "write the restricted edge list to this file");
  prune->add_option("-o,--output", prune_out, "output file (default stdout)");
  prune->callback([&]() {
    std::optional<std::uint64_t> t;
    if (thr_opt->count() > 0) t = prune_threshold_val;
    run_prune(g, prune_in, t, prune_safety, prune_right, prune_edges_out, prune_out);
  });

  // certify
  std::string cert_in, cert_out;
  std::uint64_t cert_min_degree = 0;
  auto* cert = app.add_subcommand(
      "certify", "distinct neighborhoods and the clause-count lower bound");
  cert->add_option("input", cert_in,
                   "instance JSON or edge-list file, or - for stdin")
      ->required();
  cert->add_option("--min-degree", cert_min_degree,
                   "count only vertices of at least this degree");
  cert->add_option("-o,--output", cert_out, "output file (default stdout)");
  cert->callback([&]() { run_certify(g, cert_in, cert_min_degree, cert_out); });

  // expect
  cnfgraph::BoundInputs expect_in;
  double expect_d = 0.0;
  int expect_n = -1, expect_samples = 0;
  double expect_mu = -1.0;
  std::string expect_out;
  auto* expect = app.add_subcommand("expect", "closed-form expectations and bounds");
  expect->add_option("--p", expect_in.p, "per-bit probability")->required();
  expect->add_option("--n-left", expect_in.n_left, "left side size")->required();
  expect->add_option("--n-right", expect_in.n_right, "right side size")->required();
  expect->add_option("--n-clauses", expect_n, "clause count");
  expect->add_option("--d", expect_d, "derive the clause count from this degree");
  expect->add_option("--samples", expect_samples, "Chernoff sample count M");
  expect->add_option("--mu", expect_mu, "Chernoff deviation fraction");
  expect->add_option("-o,--output", expect_out, "output file (default stdout)");
  expect->callback([&]() {
    if (expect_n >= 0) {
      expect_in.n = expect_n;
    } else if (expect_d > 0.0) {
      long long n = cnfgraph::choose_clause_count(
          expect_in.p, std::min(expect_in.n_left, expect_in.n_right), expect_d);
      expect_in.n = static_cast<int>(n);
    } else {
      throw std::invalid_argument("give --n-clauses or --d");
    }
    if (expect_samples > 0) expect_in.samples = expect_samples;
    if (expect_mu >= 0.0) expect_in.mu = expect_mu;
    run_expect(g, expect_in, expect_out);
  });

  // experiment
  cnfgraph::ExperimentConfig exp_config;
  int exp_n_clauses = -1;
  double exp_band = 0.0;
  std::string exp_out;
  auto* exp = app.add_subcommand("experiment", "Monte Carlo replication report");
  exp->add_option("--p", exp_config.params.p, "per-bit probability")->required();
  exp->add_option("--d", exp_config.params.d, "target average degree");
  exp->add_option("--n-clauses", exp_n_clauses, "explicit clause count");
  exp->add_option("--n-left", exp_config.params.n_left, "left side size")->required();
  exp->add_option("--n-right", exp_config.params.n_right, "right side size")
      ->required();
  exp->add_option("--replicates", exp_config.replicates, "replicate count");
  exp->add_option("--safety", exp_config.threshold_safety,
                  "pruning threshold safety factor");
  exp->add_option("--epsilon", exp_config.epsilon, "degree-band exponent");
  exp->add_option("--band", exp_band, "explicit degree band factor");
  exp->add_option("--threads", exp_config.threads, "worker threads");
  exp->add_flag("--allow-degenerate-p", exp_config.allow_degenerate_p,
                "accept p in {0,1} (testing)");
  exp->add_option("-o,--output", exp_out, "output file (default stdout)");
  exp->callback([&]() {
    if (exp_n_clauses >= 0) exp_config.params.n_clauses = exp_n_clauses;
    if (exp_band > 0.0) exp_config.degree_band = exp_band;
    run_experiment_cmd(g, exp_config, exp_out);
  });

  // compare-models
  cnfgraph::ExperimentConfig cmp_config;
  int cmp_n_clauses = -1;
  std::string cmp_out;
  auto* cmp = app.add_subcommand("compare-models",
                                 "clause model vs Bernoulli baseline at matched q");
  cmp->add_option("--p", cmp_config.params.p, "per-bit probability")->required();
  cmp->add_option("--d", cmp_config.params.d, "target average degree");
  cmp->add_option("--n-clauses", cmp_n_clauses, "explicit clause count");
  cmp->add_option("--n-left", cmp_config.params.n_left, "left side size")->required();
  cmp->add_option("--n-right", cmp_config.params.n_right, "right side size")
      ->required();
  cmp->add_option("--replicates", cmp_config.replicates, "replicate count");
  cmp->add_option("--safety", cmp_config.threshold_safety,
                  "pruning threshold safety factor");
  cmp->add_option("--threads", cmp_config.threads, "worker threads");
  cmp->add_flag("--allow-degenerate-p", cmp_config.allow_degenerate_p,
                "accept p in {0,1} (testing)");
  cmp->add_option("-o,--output", cmp_out, "output file (default stdout)");
  cmp->callback([&]() {
    if (cmp_n_clauses >= 0) cmp_config.params.n_clauses = cmp_n_clauses;
    run_compare_cmd(g, cmp_config, cmp_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const cnfgraph::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
