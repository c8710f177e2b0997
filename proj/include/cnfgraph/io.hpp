#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "cnfgraph/analytics.hpp"
#include "cnfgraph/bounds.hpp"
#include "cnfgraph/experiment.hpp"
#include "cnfgraph/model.hpp"
#include "cnfgraph/pruning.hpp"

namespace cnfgraph {

using json = nlohmann::json;

// A loaded instance: the clause system in whichever mask width fits,
// plus the optional construction parameters and seed carried by the
// file.
struct Instance {
  std::variant<ClauseSystem64, ClauseSystemDyn> cs;
  std::optional<ModelParams> params;
  std::optional<std::uint64_t> seed;

  int clause_count() const {
    return std::visit([](const auto& c) { return c.n; }, cs);
  }
  int n_left() const {
    return std::visit([](const auto& c) { return c.n_left(); }, cs);
  }
  int n_right() const {
    return std::visit([](const auto& c) { return c.n_right(); }, cs);
  }
};

inline const char* to_string(K22Algorithm a) {
  switch (a) {
    case K22Algorithm::sos: return "sos";
    case K22Algorithm::class_pair: return "class-pair";
    case K22Algorithm::exhaustive: return "exhaustive";
    case K22Algorithm::common_neighbors: return "common-neighbors";
  }
  return "unknown";
}

// Shortest round-trip decimal form; identical across runs.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline json params_to_json(const ModelParams& p) {
  json j;
  j["d"] = p.d;
  j["p"] = p.p;
  j["n_left"] = p.n_left;
  j["n_right"] = p.n_right;
  if (p.n_clauses) j["n_clauses"] = *p.n_clauses;
  j["seed"] = p.seed;
  return j;
}

inline ModelParams params_from_json(const json& j) {
  ModelParams p;
  p.d = j.at("d").get<double>();
  p.p = j.at("p").get<double>();
  p.n_left = j.at("n_left").get<int>();
  p.n_right = j.at("n_right").get<int>();
  if (j.contains("n_clauses")) p.n_clauses = j.at("n_clauses").get<int>();
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

template <BitMask M>
json clause_system_to_json(const ClauseSystem<M>& cs) {
  json j;
  j["n"] = cs.n;
  json left = json::array();
  for (const M& m : cs.left_masks) left.push_back(mask_to_hex(m, cs.n));
  json right = json::array();
  for (const M& m : cs.right_masks) right.push_back(mask_to_hex(m, cs.n));
  j["left_masks"] = std::move(left);
  j["right_masks"] = std::move(right);
  return j;
}

inline json instance_to_json(const Instance& inst) {
  json j = std::visit([](const auto& cs) { return clause_system_to_json(cs); },
                      inst.cs);
  if (inst.params) j["params"] = params_to_json(*inst.params);
  if (inst.seed) j["seed"] = *inst.seed;
  return j;
}

namespace detail {

template <BitMask M>
ClauseSystem<M> masks_from_json(const json& j, int n) {
  ClauseSystem<M> cs;
  cs.n = n;
  for (const auto& s : j.at("left_masks"))
    cs.left_masks.push_back(mask_from_hex<M>(s.get<std::string>(), n));
  for (const auto& s : j.at("right_masks"))
    cs.right_masks.push_back(mask_from_hex<M>(s.get<std::string>(), n));
  cs.validate();
  return cs;
}

}  // namespace detail

inline Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance must be a JSON object");
  int n = j.at("n").get<int>();
  if (n < 0) throw std::invalid_argument("negative clause count");
  Instance inst;
  if (n <= Mask64::kMaxBits)
    inst.cs = detail::masks_from_json<Mask64>(j, n);
  else
    inst.cs = detail::masks_from_json<MaskDyn>(j, n);
  if (j.contains("params")) {
    ModelParams p = params_from_json(j.at("params"));
    if (p.n_left != inst.n_left() || p.n_right != inst.n_right())
      throw std::invalid_argument("params side sizes disagree with mask arrays");
    if (p.n_clauses && *p.n_clauses != n)
      throw std::invalid_argument("params n_clauses disagrees with n");
    inst.params = p;
  }
  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  return inst;
}

inline Instance instance_from_string(const std::string& text) {
  return instance_from_json(json::parse(text));
}

// Edge-list text format: "p bip <n_left> <n_right> <edge_count>" then
// one "v w" pair per line, zero-indexed, ascending lexicographic order.
inline std::string write_edge_list(const ExplicitBipartiteGraph& g) {
  std::ostringstream out;
  out << "p bip " << g.n_left << ' ' << g.n_right << ' ' << g.edges.size() << '\n';
  for (auto [v, w] : g.edges) out << v << ' ' << w << '\n';
  return out.str();
}

inline ExplicitBipartiteGraph read_edge_list(std::istream& in) {
  std::string tok_p, tok_bip;
  ExplicitBipartiteGraph g;
  std::size_t edge_count = 0;
  if (!(in >> tok_p >> tok_bip >> g.n_left >> g.n_right >> edge_count) ||
      tok_p != "p" || tok_bip != "bip")
    throw std::invalid_argument("edge list: bad header line");
  g.edges.reserve(edge_count);
  for (std::size_t i = 0; i < edge_count; ++i) {
    int v = 0, w = 0;
    if (!(in >> v >> w)) throw std::invalid_argument("edge list: truncated");
    g.edges.emplace_back(v, w);
  }
  std::sort(g.edges.begin(), g.edges.end());
  for (std::size_t i = 1; i < g.edges.size(); ++i)
    if (g.edges[i] == g.edges[i - 1])
      throw std::invalid_argument("edge list: duplicate edge");
  g.validate();
  return g;
}

inline ExplicitBipartiteGraph edge_list_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

inline json k22_report_to_json(const K22Report& rep, bool summary = false) {
  json j;
  j["total"] = rep.total;
  j["algorithm"] = to_string(rep.algorithm);
  if (!summary) {
    j["left_participation"] = rep.left_participation;
    j["right_participation"] = rep.right_participation;
  }
  return j;
}

inline json prune_stats_to_json(const PruneStats& st) {
  json j;
  j["removed_low_degree"] = st.removed_low_degree;
  j["removed_k22"] = st.removed_k22;
  j["surviving_count"] = st.surviving_count;
  j["surviving_average_degree"] = st.surviving_average_degree;
  return j;
}

template <BitMask M>
json pruned_graph_to_json(const PrunedGraph<M>& pg) {
  json j;
  j["surviving_left"] = pg.surviving_left;
  j["threshold"] = pg.threshold;
  j["stats"] = prune_stats_to_json(pg.stats);
  if (pg.right_pruned && pg.right_stats) {
    j["surviving_right"] = pg.surviving_right;
    j["right_stats"] = prune_stats_to_json(*pg.right_stats);
  }
  return j;
}

inline json aggregate_to_json(const AggregateStat& st) {
  json j;
  j["mean"] = st.mean;
  j["stddev"] = st.stddev;
  if (st.expected) j["expected"] = *st.expected;
  if (st.z_score) j["z_score"] = *st.z_score;
  j["count"] = st.count;
  return j;
}

inline json experiment_report_to_json(const ExperimentReport& rep) {
  json rows = json::array();
  for (const ReplicateRow& r : rep.rows) {
    json row;
    row["replicate"] = r.replicate;
    row["seed"] = r.seed;
    row["edge_count"] = r.edge_count;
    row["average_degree"] = r.average_degree;
    row["k22_total"] = r.k22_total ? json(*r.k22_total) : json(nullptr);
    row["surviving_count"] =
        r.surviving_count ? json(*r.surviving_count) : json(nullptr);
    row["surviving_average_degree"] =
        r.surviving_average_degree ? json(*r.surviving_average_degree) : json(nullptr);
    row["pruned_k22_total"] =
        r.pruned_k22_total ? json(*r.pruned_k22_total) : json(nullptr);
    row["distinct_neighborhoods"] = r.distinct_neighborhoods;
    row["lower_bound"] = r.lower_bound;
    row["n_clauses"] = r.n_clauses;
    row["degree_band_fraction"] = r.degree_band_fraction;
    row["status"] = r.skipped ? "skipped" : "ok";
    rows.push_back(std::move(row));
  }
  json j;
  j["rows"] = std::move(rows);
  j["aggregates"]["edge_density"] = aggregate_to_json(rep.edge_density);
  j["aggregates"]["k22_total"] = aggregate_to_json(rep.k22_total);
  j["aggregates"]["degree_band_fraction"] =
      aggregate_to_json(rep.degree_band_fraction);
  j["band"] = rep.band;
  j["expected_degree"] = rep.expected_deg;
  j["threshold"] = rep.threshold;
  j["n_clauses"] = rep.n_clauses;
  j["completed"] = rep.completed;
  return j;
}

namespace detail {

inline void csv_field(std::string& out, const std::string& s) {
  out += s;
  out += ',';
}

template <typename T>
void csv_opt(std::string& out, const std::optional<T>& v) {
  if (v) {
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(*v);
    else
      out += std::to_string(*v);
  }
  out += ',';
}

}  // namespace detail

// Per-replicate rows, a blank line, the aggregate table, a blank line,
// then scalar parameters. The row column order is frozen; see README.
inline std::string experiment_report_to_csv(const ExperimentReport& rep) {
  std::string out =
      "replicate,seed,edge_count,average_degree,k22_total,surviving_count,"
      "surviving_average_degree,pruned_k22_total,distinct_neighborhoods,"
      "lower_bound,n_clauses,degree_band_fraction,status\n";
  for (const ReplicateRow& r : rep.rows) {
    detail::csv_field(out, std::to_string(r.replicate));
    detail::csv_field(out, std::to_string(r.seed));
    detail::csv_field(out, std::to_string(r.edge_count));
    detail::csv_field(out, format_double(r.average_degree));
    detail::csv_opt(out, r.k22_total);
    detail::csv_opt(out, r.surviving_count);
    detail::csv_opt(out, r.surviving_average_degree);
    detail::csv_opt(out, r.pruned_k22_total);
    detail::csv_field(out, std::to_string(r.distinct_neighborhoods));
    detail::csv_field(out, std::to_string(r.lower_bound));
    detail::csv_field(out, std::to_string(r.n_clauses));
    detail::csv_field(out, format_double(r.degree_band_fraction));
    out += r.skipped ? "skipped" : "ok";
    out += '\n';
  }
  out += "\nmetric,mean,stddev,expected,z_score,count\n";
  auto agg_line = [&out](const char* name, const AggregateStat& st) {
    out += name;
    out += ',';
    out += format_double(st.mean);
    out += ',';
    out += format_double(st.stddev);
    out += ',';
    if (st.expected) out += format_double(*st.expected);
    out += ',';
    if (st.z_score) out += format_double(*st.z_score);
    out += ',';
    out += std::to_string(st.count);
    out += '\n';
  };
  agg_line("edge_density", rep.edge_density);
  agg_line("k22_total", rep.k22_total);
  agg_line("degree_band_fraction", rep.degree_band_fraction);
  out += "\nparam,value\n";
  out += "band," + format_double(rep.band) + "\n";
  out += "expected_degree," + format_double(rep.expected_deg) + "\n";
  out += "threshold," + std::to_string(rep.threshold) + "\n";
  out += "n_clauses," + std::to_string(rep.n_clauses) + "\n";
  out += "completed," + std::to_string(rep.completed) + "\n";
  return out;
}

inline json compare_report_to_json(const CompareReport& rep) {
  json rows = json::array();
  for (const CompareRow& r : rep.rows) {
    json row;
    row["replicate"] = r.replicate;
    row["seed_cnf"] = r.seed_cnf;
    row["seed_bernoulli"] = r.seed_bernoulli;
    row["cnf_k22"] = r.cnf_k22;
    row["bernoulli_k22"] = r.bernoulli_k22;
    row["cnf_surviving"] = r.cnf_surviving;
    row["bernoulli_surviving"] = r.bernoulli_surviving;
    row["cnf_pruned_k22"] = r.cnf_pruned_k22;
    row["bernoulli_pruned_k22"] = r.bernoulli_pruned_k22;
    row["status"] = r.skipped ? "skipped" : "ok";
    rows.push_back(std::move(row));
  }
  json j;
  j["rows"] = std::move(rows);
  j["cnf_k22"] = aggregate_to_json(rep.cnf_k22);
  j["bernoulli_k22"] = aggregate_to_json(rep.bernoulli_k22);
  j["q"] = rep.q;
  j["threshold"] = rep.threshold;
  j["n_clauses"] = rep.n_clauses;
  j["completed"] = rep.completed;
  return j;
}

inline std::string compare_report_to_csv(const CompareReport& rep) {
  std::string out =
      "replicate,seed_cnf,seed_bernoulli,cnf_k22,bernoulli_k22,cnf_surviving,"
      "bernoulli_surviving,cnf_pruned_k22,bernoulli_pruned_k22,status\n";
  for (const CompareRow& r : rep.rows) {
    detail::csv_field(out, std::to_string(r.replicate));
    detail::csv_field(out, std::to_string(r.seed_cnf));
    detail::csv_field(out, std::to_string(r.seed_bernoulli));
    detail::csv_field(out, std::to_string(r.cnf_k22));
    detail::csv_field(out, std::to_string(r.bernoulli_k22));
    detail::csv_field(out, std::to_string(r.cnf_surviving));
    detail::csv_field(out, std::to_string(r.bernoulli_surviving));
    detail::csv_field(out, std::to_string(r.cnf_pruned_k22));
    detail::csv_field(out, std::to_string(r.bernoulli_pruned_k22));
    out += r.skipped ? "skipped" : "ok";
    out += '\n';
  }
  out += "\nmodel,mean,stddev,expected,z_score,count\n";
  auto line = [&out](const char* name, const AggregateStat& st) {
    out += name;
    out += ',';
    out += format_double(st.mean);
    out += ',';
    out += format_double(st.stddev);
    out += ',';
    if (st.expected) out += format_double(*st.expected);
    out += ',';
    if (st.z_score) out += format_double(*st.z_score);
    out += ',';
    out += std::to_string(st.count);
    out += '\n';
  };
  line("cnf", rep.cnf_k22);
  line("bernoulli", rep.bernoulli_k22);
  out += "\nparam,value\n";
  out += "q," + format_double(rep.q) + "\n";
  out += "threshold," + std::to_string(rep.threshold) + "\n";
  out += "n_clauses," + std::to_string(rep.n_clauses) + "\n";
  out += "completed," + std::to_string(rep.completed) + "\n";
  return out;
}

}  // namespace cnfgraph
