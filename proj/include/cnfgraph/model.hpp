#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

#include "cnfgraph/clause_system.hpp"
#include "cnfgraph/rng.hpp"

namespace cnfgraph {

// Construction parameters for the random clause model: target average
// degree d, per-bit probability p, side sizes, optional explicit clause
// count, and the instance seed. When n_clauses is absent the clause
// count is derived from (p, N, d) with N = min(n_left, n_right).
struct ModelParams {
  double d = 0.0;
  double p = 0.0;
  int n_left = 0;
  int n_right = 0;
  std::optional<int> n_clauses;
  std::uint64_t seed = 0;

  // Degenerate p in {0, 1} breaks the clause-count rule and is only
  // meaningful as an oracle case; callers opt in explicitly.
  void validate(bool allow_degenerate_p = false) const {
    if (n_left <= 0 || n_right <= 0)
      throw std::invalid_argument("side sizes must be positive");
    if (!(p >= 0.0) || !(p <= 1.0))
      throw std::invalid_argument("p must lie in [0, 1]");
    if (!allow_degenerate_p && !(p > 0.0 && p < 1.0))
      throw std::invalid_argument("p must lie strictly inside (0, 1)");
    if (n_clauses) {
      if (*n_clauses < 0) throw std::invalid_argument("negative clause count");
    } else {
      if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
      if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("clause-count derivation requires 0 < p < 1");
      if (!(d < static_cast<double>(std::min(n_left, n_right))))
        throw std::invalid_argument("d must be below min side size to derive a clause count");
    }
  }
};

// Nearest integer to (1/p^2) * ln(N/d), ties rounding half away from
// zero. This makes (1 - p^2)^n track d/N.
inline long long choose_clause_count(double p, long long n_vertices, double d) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("p must lie strictly inside (0, 1)");
  if (n_vertices <= 0) throw std::invalid_argument("vertex count must be positive");
  if (!(d > 0.0) || d > static_cast<double>(n_vertices))
    throw std::invalid_argument("d must lie in (0, N]");
  double value = (1.0 / (p * p)) * std::log(static_cast<double>(n_vertices) / d);
  return std::llround(value);
}

inline int resolved_clause_count(const ModelParams& params) {
  if (params.n_clauses) {
    if (*params.n_clauses < 0) throw std::invalid_argument("negative clause count");
    return *params.n_clauses;
  }
  long long n = choose_clause_count(
      params.p, std::min(params.n_left, params.n_right), params.d);
  if (n > std::numeric_limits<int>::max())
    throw std::invalid_argument("derived clause count does not fit in int");
  return static_cast<int>(n);
}

// Every mask bit is an independent Bernoulli(p) draw. Draw order is part
// of the format contract: left side first, vertex-major, clause-minor,
// then the right side the same way.
template <BitMask M>
ClauseSystem<M> sample_cnf(const ModelParams& params, SplitMix64& rng,
                           bool allow_degenerate_p = false) {
  params.validate(allow_degenerate_p);
  int n = resolved_clause_count(params);
  ClauseSystem<M> cs;
  cs.n = n;
  cs.left_masks.reserve(static_cast<std::size_t>(params.n_left));
  cs.right_masks.reserve(static_cast<std::size_t>(params.n_right));
  for (int v = 0; v < params.n_left; ++v) {
    M m = M::zero(n);
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli(params.p)) m.set(i);
    cs.left_masks.push_back(std::move(m));
  }
  for (int w = 0; w < params.n_right; ++w) {
    M m = M::zero(n);
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli(params.p)) m.set(i);
    cs.right_masks.push_back(std::move(m));
  }
  return cs;
}

template <BitMask M>
ClauseSystem<M> sample_cnf(const ModelParams& params,
                           bool allow_degenerate_p = false) {
  SplitMix64 rng(params.seed);
  return sample_cnf<M>(params, rng, allow_degenerate_p);
}

// Baseline model: each pair is an edge independently with probability q.
// Pairs are drawn in lexicographic order.
inline ExplicitBipartiteGraph sample_bernoulli_graph(int n_left, int n_right,
                                                     double q, SplitMix64& rng) {
  if (n_left < 0 || n_right < 0)
    throw std::invalid_argument("negative side size");
  if (!(q >= 0.0) || !(q <= 1.0))
    throw std::invalid_argument("q must lie in [0, 1]");
  ExplicitBipartiteGraph g;
  g.n_left = n_left;
  g.n_right = n_right;
  for (int v = 0; v < n_left; ++v)
    for (int w = 0; w < n_right; ++w)
      if (rng.bernoulli(q)) g.edges.emplace_back(v, w);
  return g;
}

}  // namespace cnfgraph
