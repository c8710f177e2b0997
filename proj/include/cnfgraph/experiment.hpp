#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cnfgraph/analytics.hpp"
#include "cnfgraph/bounds.hpp"
#include "cnfgraph/model.hpp"
#include "cnfgraph/pruning.hpp"
#include "cnfgraph/rng.hpp"

namespace cnfgraph {

enum class OutputFormat { csv, json };

struct Caps {
  std::uint64_t pairs = kDefaultPairCap;
  int sos_bits = kDefaultSosBits;
  std::uint64_t fallback_ops = 500'000'000;
  std::uint64_t quadruples = kDefaultQuadCap;
};

struct ExperimentConfig {
  ModelParams params;
  int replicates = 1;
  double threshold_safety = 0.5;
  double epsilon = 0.5;  // degree-band exponent: band = (N/d_eff)^epsilon
  std::optional<double> degree_band;  // explicit band override
  OutputFormat outputs = OutputFormat::csv;
  std::uint64_t master_seed = 0;
  Caps caps;
  int threads = 1;
  bool allow_degenerate_p = false;

  void validate() const {
    params.validate(allow_degenerate_p);
    if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
    if (!(threshold_safety > 0.0) || !(threshold_safety <= 1.0))
      throw std::invalid_argument("threshold safety must lie in (0, 1]");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
    if (degree_band && !(*degree_band >= 1.0))
      throw std::invalid_argument("degree band must be at least 1");
  }
};

// One experiment row. K_{2,2}-dependent fields are absent when the
// replicate was skipped for exceeding the counting caps.
struct ReplicateRow {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t edge_count = 0;
  double average_degree = 0.0;
  std::optional<std::uint64_t> k22_total;
  std::optional<std::uint64_t> surviving_count;
  std::optional<double> surviving_average_degree;
  std::optional<std::uint64_t> pruned_k22_total;
  std::uint64_t distinct_neighborhoods = 0;
  int lower_bound = 0;
  int n_clauses = 0;
  double degree_band_fraction = 0.0;
  bool skipped = false;
};

struct AggregateStat {
  double mean = 0.0;
  double stddev = 0.0;
  std::optional<double> expected;
  std::optional<double> z_score;
  int count = 0;
};

struct ExperimentReport {
  std::vector<ReplicateRow> rows;
  AggregateStat edge_density;
  AggregateStat k22_total;
  AggregateStat degree_band_fraction;
  double band = 0.0;
  double expected_deg = 0.0;
  std::uint64_t threshold = 0;
  int n_clauses = 0;
  int completed = 0;
};

namespace detail {

inline AggregateStat aggregate(const std::vector<double>& xs,
                               std::optional<double> expected) {
  AggregateStat st;
  st.count = static_cast<int>(xs.size());
  st.expected = expected;
  if (xs.empty()) return st;
  double sum = 0.0;
  for (double x : xs) sum += x;
  st.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - st.mean) * (x - st.mean);
    st.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  if (expected) {
    if (st.stddev > 0.0) {
      double se = st.stddev / std::sqrt(static_cast<double>(xs.size()));
      st.z_score = (st.mean - *expected) / se;
    } else {
      st.z_score = st.mean == *expected
                       ? 0.0
                       : std::copysign(std::numeric_limits<double>::infinity(),
                                       st.mean - *expected);
    }
  }
  return st;
}

inline bool in_degree_band(std::uint64_t deg, double d_eff, double band) {
  if (!(d_eff > 0.0)) return deg == 0;
  double lo = d_eff / band;
  double hi = d_eff * band;
  double d = static_cast<double>(deg);
  return d >= lo && d <= hi;
}

// K_{2,2} counting cost estimate for the class-pair fallback; harness
// skip decisions only.
template <BitMask M>
bool k22_within_caps(const ClauseSystem<M>& cs, const Caps& caps) {
  if (cs.n <= caps.sos_bits) return true;
  std::uint64_t kl = mask_histogram(cs, Side::left).entries.size();
  std::uint64_t kr = mask_histogram(cs, Side::right).entries.size();
  unsigned __int128 ops =
      static_cast<unsigned __int128>(kl * (kl + 1) / 2) * (kr * (kr + 1) / 2);
  return ops <= caps.fallback_ops;
}

template <BitMask M>
void check_k22_feasible(const ClauseSystem<M>& cs, const Caps& caps) {
  if (!k22_within_caps(cs, caps))
    throw CapExceeded("count_k22: class-pair fallback exceeds ops cap");
}

// Threaded map over replicate indices; worker t handles r == t (mod T).
// Results land in index-addressed slots, so the outcome is identical
// for every thread count.
template <typename Fn>
void for_each_replicate(int replicates, int threads, Fn&& fn) {
  if (threads <= 1) {
    for (int r = 0; r < replicates; ++r) fn(r);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int r = t; r < replicates; r += threads) {
        try {
          fn(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

template <BitMask M>
ReplicateRow run_replicate(const ExperimentConfig& config, int replicate,
                           std::uint64_t seed, int n_clauses,
                           std::uint64_t threshold, double d_eff, double band) {
  ModelParams params = config.params;
  params.seed = seed;
  params.n_clauses = n_clauses;
  ClauseSystem<M> cs = sample_cnf<M>(params, config.allow_degenerate_p);

  ReplicateRow row;
  row.replicate = replicate;
  row.seed = seed;
  row.n_clauses = n_clauses;

  std::vector<std::uint64_t> degs = degrees(cs, config.caps.sos_bits);
  std::uint64_t in_band = 0;
  for (std::uint64_t d : degs) {
    row.edge_count += d;
    if (detail::in_degree_band(d, d_eff, band)) ++in_band;
  }
  row.average_degree =
      static_cast<double>(row.edge_count) / static_cast<double>(params.n_left);
  row.degree_band_fraction =
      static_cast<double>(in_band) / static_cast<double>(params.n_left);

  std::uint64_t dn = distinct_neighborhood_count(cs, 0);
  row.distinct_neighborhoods = dn;
  row.lower_bound = dn <= 1 ? 0 : static_cast<int>(std::bit_width(dn - 1));

  if (!detail::k22_within_caps(cs, config.caps)) {
    row.skipped = true;
    return row;
  }

  K22Report report = count_k22(cs, config.caps.sos_bits);
  row.k22_total = report.total;

  PrunedGraph<M> pg;
  pg.base = cs;
  pg.threshold = threshold;
  pg.stats = detail::side_prune(degs, report.left_participation, threshold,
                                pg.surviving_left);
  row.surviving_count = pg.stats.surviving_count;
  if (!pg.surviving_left.empty()) {
    std::uint64_t total = 0;
    for (int v : pg.surviving_left) total += degs[static_cast<std::size_t>(v)];
    row.surviving_average_degree =
        static_cast<double>(total) / static_cast<double>(pg.surviving_left.size());
  } else {
    row.surviving_average_degree = 0.0;
  }

  ClauseSystem<M> restricted;
  restricted.n = cs.n;
  for (int v : pg.surviving_left)
    restricted.left_masks.push_back(cs.left_masks[static_cast<std::size_t>(v)]);
  restricted.right_masks = cs.right_masks;
  row.pruned_k22_total = count_k22(restricted, config.caps.sos_bits).total;
  return row;
}

inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int n_clauses = resolved_clause_count(config.params);
  const double d_eff = expected_degree(config.params.n_right, config.params.p, n_clauses);
  const double band =
      config.degree_band
          ? *config.degree_band
          : (d_eff > 0.0
                 ? std::pow(static_cast<double>(config.params.n_right) / d_eff,
                            config.epsilon)
                 : std::numeric_limits<double>::infinity());
  const std::uint64_t threshold = static_cast<std::uint64_t>(
      std::floor(config.threshold_safety * d_eff));

  ExperimentReport rep;
  rep.band = band;
  rep.expected_deg = d_eff;
  rep.threshold = threshold;
  rep.n_clauses = n_clauses;
  rep.rows.resize(static_cast<std::size_t>(config.replicates));

  detail::for_each_replicate(config.replicates, config.threads, [&](int r) {
    std::uint64_t seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(r));
    ReplicateRow row =
        n_clauses <= Mask64::kMaxBits
            ? run_replicate<Mask64>(config, r, seed, n_clauses, threshold, d_eff, band)
            : run_replicate<MaskDyn>(config, r, seed, n_clauses, threshold, d_eff, band);
    rep.rows[static_cast<std::size_t>(r)] = std::move(row);
  });

  const double pair_count = static_cast<double>(config.params.n_left) *
                            static_cast<double>(config.params.n_right);
  std::vector<double> densities, k22s, fractions;
  for (const ReplicateRow& row : rep.rows) {
    if (row.skipped) continue;
    densities.push_back(static_cast<double>(row.edge_count) / pair_count);
    k22s.push_back(static_cast<double>(*row.k22_total));
    fractions.push_back(row.degree_band_fraction);
    if (*row.pruned_k22_total != 0)
      throw std::logic_error("pruned graph is not K_{2,2}-free");
  }
  rep.completed = static_cast<int>(densities.size());
  rep.edge_density = detail::aggregate(
      densities, edge_probability(config.params.p, n_clauses));
  rep.k22_total = detail::aggregate(
      k22s, expected_k22(config.params.n_left, config.params.n_right,
                         config.params.p, n_clauses));
  rep.degree_band_fraction = detail::aggregate(fractions, std::nullopt);
  return rep;
}

// Bernoulli-side pruning uses the same rule as the clause model: keep
// vertices of degree >= threshold with no K_{2,2} participation. The
// removal rule is extrapolated to the baseline; nothing downstream
// depends on it beyond the reported counts.
struct ExplicitPruneResult {
  std::vector<int> surviving_left;
  PruneStats stats;
  std::uint64_t pruned_k22_total = 0;
};

inline ExplicitPruneResult prune_explicit(const ExplicitBipartiteGraph& g,
                                          std::uint64_t threshold) {
  std::vector<std::uint64_t> degs(static_cast<std::size_t>(g.n_left), 0);
  for (auto [v, w] : g.edges) ++degs[static_cast<std::size_t>(v)];
  K22Report report = count_k22_common_neighbors(g);
  ExplicitPruneResult out;
  out.stats = detail::side_prune(degs, report.left_participation, threshold,
                                 out.surviving_left);
  std::uint64_t total = 0;
  for (int v : out.surviving_left) total += degs[static_cast<std::size_t>(v)];
  out.stats.surviving_average_degree =
      out.surviving_left.empty()
          ? 0.0
          : static_cast<double>(total) / static_cast<double>(out.surviving_left.size());

  ExplicitBipartiteGraph induced;
  induced.n_left = static_cast<int>(out.surviving_left.size());
  induced.n_right = g.n_right;
  std::vector<int> remap(static_cast<std::size_t>(g.n_left), -1);
  for (std::size_t i = 0; i < out.surviving_left.size(); ++i)
    remap[static_cast<std::size_t>(out.surviving_left[i])] = static_cast<int>(i);
  for (auto [v, w] : g.edges)
    if (remap[static_cast<std::size_t>(v)] >= 0)
      induced.edges.emplace_back(remap[static_cast<std::size_t>(v)], w);
  out.pruned_k22_total = count_k22_common_neighbors(induced).total;
  return out;
}

struct CompareRow {
  int replicate = 0;
  std::uint64_t seed_cnf = 0;
  std::uint64_t seed_bernoulli = 0;
  std::uint64_t cnf_k22 = 0;
  std::uint64_t bernoulli_k22 = 0;
  std::uint64_t cnf_surviving = 0;
  std::uint64_t bernoulli_surviving = 0;
  std::uint64_t cnf_pruned_k22 = 0;
  std::uint64_t bernoulli_pruned_k22 = 0;
  bool skipped = false;
};

struct CompareReport {
  double q = 0.0;  // matched edge probability (1-p^2)^n
  std::uint64_t threshold = 0;
  int n_clauses = 0;
  std::vector<CompareRow> rows;
  AggregateStat cnf_k22;
  AggregateStat bernoulli_k22;
  int completed = 0;
};

template <BitMask M>
void compare_cnf_side(const ExperimentConfig& config, int n_clauses,
                      std::uint64_t threshold, CompareRow& row) {
  ModelParams params = config.params;
  params.seed = row.seed_cnf;
  params.n_clauses = n_clauses;
  ClauseSystem<M> cs = sample_cnf<M>(params, config.allow_degenerate_p);
  if (!detail::k22_within_caps(cs, config.caps))
    throw CapExceeded("compare_models: class-pair count exceeds ops cap");
  K22Report cnf_report = count_k22(cs, config.caps.sos_bits);
  row.cnf_k22 = cnf_report.total;
  std::vector<std::uint64_t> degs = degrees(cs, config.caps.sos_bits);
  std::vector<int> survivors;
  PruneStats st = detail::side_prune(degs, cnf_report.left_participation,
                                     threshold, survivors);
  row.cnf_surviving = st.surviving_count;
  ClauseSystem<M> restricted;
  restricted.n = cs.n;
  for (int v : survivors)
    restricted.left_masks.push_back(cs.left_masks[static_cast<std::size_t>(v)]);
  restricted.right_masks = cs.right_masks;
  row.cnf_pruned_k22 = count_k22(restricted, config.caps.sos_bits).total;
}

// Runs the clause model and the Bernoulli baseline with matched edge
// probability q = (1-p^2)^n. The analytic quadruple-survival rates
// differ: survival(p)^n for the clause model, q^4 for the baseline.
inline CompareReport compare_models(const ExperimentConfig& config) {
  config.validate();
  const int n_clauses = resolved_clause_count(config.params);
  const double q = edge_probability(config.params.p, n_clauses);
  const double d_eff = expected_degree(config.params.n_right, config.params.p, n_clauses);
  const std::uint64_t threshold = static_cast<std::uint64_t>(
      std::floor(config.threshold_safety * d_eff));

  CompareReport rep;
  rep.q = q;
  rep.threshold = threshold;
  rep.n_clauses = n_clauses;
  rep.rows.resize(static_cast<std::size_t>(config.replicates));

  detail::for_each_replicate(config.replicates, config.threads, [&](int r) {
    CompareRow row;
    row.replicate = r;
    row.seed_cnf = derive_seed(config.master_seed, 2 * static_cast<std::uint64_t>(r));
    row.seed_bernoulli =
        derive_seed(config.master_seed, 2 * static_cast<std::uint64_t>(r) + 1);
    try {
      if (n_clauses <= Mask64::kMaxBits)
        compare_cnf_side<Mask64>(config, n_clauses, threshold, row);
      else
        compare_cnf_side<MaskDyn>(config, n_clauses, threshold, row);

      SplitMix64 rng(row.seed_bernoulli);
      ExplicitBipartiteGraph g = sample_bernoulli_graph(
          config.params.n_left, config.params.n_right, q, rng);
      row.bernoulli_k22 = count_k22_common_neighbors(g).total;
      ExplicitPruneResult pr = prune_explicit(g, threshold);
      row.bernoulli_surviving = pr.stats.surviving_count;
      row.bernoulli_pruned_k22 = pr.pruned_k22_total;
    } catch (const CapExceeded&) {
      row.skipped = true;
    }
    rep.rows[static_cast<std::size_t>(r)] = std::move(row);
  });

  std::vector<double> cnf_vals, bern_vals;
  for (const CompareRow& row : rep.rows) {
    if (row.skipped) continue;
    cnf_vals.push_back(static_cast<double>(row.cnf_k22));
    bern_vals.push_back(static_cast<double>(row.bernoulli_k22));
  }
  rep.completed = static_cast<int>(cnf_vals.size());
  const std::uint64_t pairs_left =
      choose2(static_cast<std::uint64_t>(config.params.n_left));
  const std::uint64_t pairs_right =
      choose2(static_cast<std::uint64_t>(config.params.n_right));
  rep.cnf_k22 = detail::aggregate(
      cnf_vals, expected_k22(config.params.n_left, config.params.n_right,
                             config.params.p, n_clauses));
  rep.bernoulli_k22 = detail::aggregate(
      bern_vals, static_cast<double>(pairs_left) * static_cast<double>(pairs_right) *
                     q * q * q * q);
  return rep;
}

struct ChernoffCheck {
  double mu = 0.0;
  double bound = 0.0;
  double observed = 0.0;
};

// Observed two-sided tail frequencies of a binomial(M, p) sample set
// against the Chernoff bound; one entry per requested deviation mu.
inline std::vector<ChernoffCheck> chernoff_empirical(int samples_per_sum, double p,
                                                     int num_sums,
                                                     const std::vector<double>& mus,
                                                     std::uint64_t seed) {
  if (samples_per_sum < 1 || num_sums < 1)
    throw std::invalid_argument("sample counts must be positive");
  detail::check_probability(p);
  std::vector<std::uint64_t> hits(mus.size(), 0);
  for (int s = 0; s < num_sums; ++s) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    int sum = 0;
    for (int j = 0; j < samples_per_sum; ++j)
      if (rng.bernoulli(p)) ++sum;
    double dev = std::abs(static_cast<double>(sum) -
                          p * static_cast<double>(samples_per_sum));
    for (std::size_t i = 0; i < mus.size(); ++i)
      if (dev >= mus[i] * static_cast<double>(samples_per_sum)) ++hits[i];
  }
  std::vector<ChernoffCheck> out;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    ChernoffCheck c;
    c.mu = mus[i];
    c.bound = chernoff_bound(samples_per_sum, mus[i]);
    c.observed = static_cast<double>(hits[i]) / static_cast<double>(num_sums);
    out.push_back(c);
  }
  return out;
}

}  // namespace cnfgraph
