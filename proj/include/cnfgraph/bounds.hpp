#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "cnfgraph/analytics.hpp"

namespace cnfgraph {

// Inputs for the closed-form report. q, delta and epsilon are recorded
// for reporting only; nothing downstream consumes them.
struct BoundInputs {
  double p = 0.0;
  int n = 0;
  int n_left = 0;
  int n_right = 0;
  std::optional<int> samples;  // M, for the Chernoff bound
  std::optional<double> mu;
  std::optional<double> q;
  std::optional<double> delta;
  std::optional<double> epsilon;
};

namespace detail {

inline void check_probability(double p) {
  if (!(p >= 0.0) || !(p <= 1.0))
    throw std::invalid_argument("probability must lie in [0, 1]");
}

inline void check_clause_count(int n) {
  if (n < 0) throw std::invalid_argument("negative clause count");
}

}  // namespace detail

// Probability that a fixed pair (v, w) is an edge: each clause spares
// the pair unless it excludes both endpoints, so (1 - p^2)^n.
inline double edge_probability(double p, int n) {
  detail::check_probability(p);
  detail::check_clause_count(n);
  return std::pow(1.0 - p * p, n);
}

// Probability that one random clause fails to destroy a fixed potential
// K_{2,2}. The clause kills the quadruple iff it excludes at least one
// of v1, v2 and at least one of w1, w2, which happens with probability
// (2p - p^2)^2; the survival 1 - (2p - p^2)^2 expands to
// 1 - 4p^2 + 4p^3 - p^4.
inline double k22_clause_survival(double p) {
  detail::check_probability(p);
  double kill_side = 2.0 * p - p * p;
  return 1.0 - kill_side * kill_side;
}

// Clauses act independently, so a fixed quadruple survives all n of
// them with probability survival^n.
inline double k22_probability(double p, int n) {
  detail::check_clause_count(n);
  return std::pow(k22_clause_survival(p), n);
}

inline double expected_degree(int n_right, double p, int n) {
  if (n_right < 0) throw std::invalid_argument("negative side size");
  detail::check_probability(p);
  detail::check_clause_count(n);
  if (n == 0) return static_cast<double>(n_right);
  double per_pair = 1.0 - p * p;
  if (per_pair == 0.0) return 0.0;
  if (n_right == 0) return 0.0;
  // survival^n underflows long before the product does; stay in logs.
  return std::exp(std::log(static_cast<double>(n_right)) +
                  static_cast<double>(n) * std::log(per_pair));
}

inline double expected_k22(int n_left, int n_right, double p, int n) {
  if (n_left < 0 || n_right < 0) throw std::invalid_argument("negative side size");
  detail::check_probability(p);
  detail::check_clause_count(n);
  std::uint64_t pairs_left = choose2(static_cast<std::uint64_t>(n_left));
  std::uint64_t pairs_right = choose2(static_cast<std::uint64_t>(n_right));
  if (pairs_left == 0 || pairs_right == 0) return 0.0;
  double survival = k22_clause_survival(p);
  if (n == 0)
    return static_cast<double>(pairs_left) * static_cast<double>(pairs_right);
  if (survival == 0.0) return 0.0;
  return std::exp(std::log(static_cast<double>(pairs_left)) +
                  std::log(static_cast<double>(pairs_right)) +
                  static_cast<double>(n) * std::log(survival));
}

// Two-sided Chernoff-Hoeffding tail for M Bernoulli samples:
// Pr(|sum - pM| >= mu*M) <= 2 exp(-2 mu^2 M), clamped to 1.
inline double chernoff_bound(int samples, double mu) {
  if (samples < 1) throw std::invalid_argument("sample count must be at least 1");
  if (!(mu >= 0.0)) throw std::invalid_argument("mu must be nonnegative");
  double bound = 2.0 * std::exp(-2.0 * mu * mu * static_cast<double>(samples));
  return bound < 1.0 ? bound : 1.0;
}

// A clause system with n clauses yields at most 2^n distinct left
// neighborhoods, so a graph with D distinct neighborhoods needs at
// least ceil(log2 D) clauses in any representation.
inline int cnf_size_lower_bound(const ExplicitBipartiteGraph& g) {
  std::uint64_t distinct = distinct_neighborhood_count(g, 0);
  if (distinct <= 1) return 0;
  return std::bit_width(distinct - 1);
}

// The exponent delta implied by reading survival^n as (d/N)^(4-delta)
// with d/N = (1-p^2)^n. Reporting aid only.
inline double implied_delta(double p) {
  detail::check_probability(p);
  if (p == 0.0 || p == 1.0) return 0.0;
  return 4.0 - std::log(k22_clause_survival(p)) / std::log(1.0 - p * p);
}

}  // namespace cnfgraph
