#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "cnfgraph/analytics.hpp"
#include "cnfgraph/bounds.hpp"
#include "cnfgraph/model.hpp"

namespace cnfgraph {

struct PruneStats {
  std::uint64_t removed_low_degree = 0;
  std::uint64_t removed_k22 = 0;
  std::uint64_t surviving_count = 0;
  double surviving_average_degree = 0.0;  // 0 when nothing survives
};

struct PruneOptions {
  // The construction prunes the left side only; symmetric right-side
  // pruning is available for experiments and defaults off.
  bool prune_right = false;
  int sos_cap_bits = kDefaultSosBits;
};

template <BitMask M>
struct PrunedGraph {
  ClauseSystem<M> base;
  std::vector<int> surviving_left;
  std::vector<int> surviving_right;  // all indices unless right pruning ran
  std::uint64_t threshold = 0;
  bool right_pruned = false;
  PruneStats stats;  // left side
  std::optional<PruneStats> right_stats;
};

namespace detail {

inline PruneStats side_prune(const std::vector<std::uint64_t>& degs,
                             const std::vector<std::uint64_t>& participation,
                             std::uint64_t threshold, std::vector<int>& survivors) {
  PruneStats st;
  survivors.clear();
  for (std::size_t v = 0; v < degs.size(); ++v) {
    if (degs[v] < threshold) {
      ++st.removed_low_degree;  // a vertex failing both counts here
    } else if (participation[v] > 0) {
      ++st.removed_k22;
    } else {
      survivors.push_back(static_cast<int>(v));
    }
  }
  st.surviving_count = survivors.size();
  return st;
}

}  // namespace detail

template <BitMask M>
ClauseSystem<M> restricted_system(const PrunedGraph<M>& pg);

// Keep the left vertices with degree >= threshold that sit in no
// K_{2,2}; the surviving subgraph is K_{2,2}-free and the clause count
// is unchanged. Survivor adjacency is untouched: restricting the left
// side never alters edges among retained vertices.
template <BitMask M>
PrunedGraph<M> prune(const ClauseSystem<M>& cs, std::uint64_t threshold,
                     const PruneOptions& options = {}) {
  K22Report report = count_k22(cs, options.sos_cap_bits);
  std::vector<std::uint64_t> left_degs = degrees(cs, options.sos_cap_bits);

  PrunedGraph<M> out;
  out.base = cs;
  out.threshold = threshold;
  out.right_pruned = options.prune_right;
  out.stats = detail::side_prune(left_degs, report.left_participation, threshold,
                                 out.surviving_left);

  if (options.prune_right) {
    // Right degrees come from the transposed system.
    ClauseSystem<M> flipped;
    flipped.n = cs.n;
    flipped.left_masks = cs.right_masks;
    flipped.right_masks = cs.left_masks;
    std::vector<std::uint64_t> right_degs = degrees(flipped, options.sos_cap_bits);
    out.right_stats = detail::side_prune(right_degs, report.right_participation,
                                         threshold, out.surviving_right);
  } else {
    out.surviving_right.resize(static_cast<std::size_t>(cs.n_right()));
    std::iota(out.surviving_right.begin(), out.surviving_right.end(), 0);
  }

  // Survivor average degree, within the restriction when the right side
  // shrank, against the full right side otherwise (identical values).
  if (!out.surviving_left.empty()) {
    std::uint64_t total = 0;
    if (options.prune_right) {
      ClauseSystem<M> restricted = restricted_system(out);
      for (std::uint64_t d : degrees(restricted, options.sos_cap_bits)) total += d;
    } else {
      for (int v : out.surviving_left)
        total += left_degs[static_cast<std::size_t>(v)];
    }
    out.stats.surviving_average_degree =
        static_cast<double>(total) / static_cast<double>(out.surviving_left.size());
  }
  return out;
}

// The survivors' clause system: the same n clauses restricted to the
// retained vertices.
template <BitMask M>
ClauseSystem<M> restricted_system(const PrunedGraph<M>& pg) {
  ClauseSystem<M> out;
  out.n = pg.base.n;
  out.left_masks.reserve(pg.surviving_left.size());
  out.right_masks.reserve(pg.surviving_right.size());
  for (int v : pg.surviving_left)
    out.left_masks.push_back(pg.base.left_masks[static_cast<std::size_t>(v)]);
  for (int w : pg.surviving_right)
    out.right_masks.push_back(pg.base.right_masks[static_cast<std::size_t>(w)]);
  return out;
}

// floor(safety * expected degree) for the params' clause count.
inline std::uint64_t default_threshold(const ModelParams& params, double safety = 0.5) {
  if (!(safety > 0.0) || !(safety <= 1.0))
    throw std::invalid_argument("safety factor must lie in (0, 1]");
  int n = resolved_clause_count(params);
  double expected = expected_degree(params.n_right, params.p, n);
  return static_cast<std::uint64_t>(std::floor(safety * expected));
}

}  // namespace cnfgraph
