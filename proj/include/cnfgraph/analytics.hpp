#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cnfgraph/clause_system.hpp"

namespace cnfgraph {

inline constexpr int kDefaultSosBits = 24;
inline constexpr std::uint64_t kDefaultQuadCap = 100'000'000;

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("counter overflow in subgraph count");
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("counter overflow in subgraph count");
  return r;
}

struct U32VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint32_t x : v) h = (h ^ x) * 0x100000001b3ull;
    return static_cast<std::size_t>(h);
  }
};

struct IntVecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (int x : v) h = (h ^ static_cast<std::uint32_t>(x)) * 0x100000001b3ull;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

// x choose 2, with x < 2 giving 0.
inline std::uint64_t choose2(std::uint64_t x) {
  if (x < 2) return 0;
  return (x % 2 == 0) ? detail::checked_mul(x / 2, x - 1)
                      : detail::checked_mul(x, (x - 1) / 2);
}

// Sum-over-subsets table: f[Mk] = number of vertices on one side whose
// mask is a bitwise subset of Mk. Powers O(1) degree queries
// (degree(v) = f[complement(S_v)]) and the class-pair K_{2,2} count.
struct ZetaTable {
  int n_bits = 0;
  std::vector<std::uint32_t> f;

  std::uint64_t full_mask() const {
    return n_bits == 0 ? 0 : ((std::uint64_t{1} << n_bits) - 1);
  }

  std::uint32_t subsets_of_complement(std::uint64_t mask_low) const {
    return f[(~mask_low) & full_mask()];
  }
};

// Standard n-pass subset-sum dynamic program, O(2^n * n) additions.
template <BitMask M>
ZetaTable subset_zeta(const MaskHistogram<M>& hist, int n,
                      int cap_bits = kDefaultSosBits) {
  if (n < 0) throw std::invalid_argument("negative clause count");
  if (n > cap_bits) throw CapExceeded("subset_zeta: 2^n table exceeds bit cap");
  ZetaTable zt;
  zt.n_bits = n;
  zt.f.assign(std::size_t{1} << n, 0);
  for (const auto& [mask, count] : hist.entries)
    zt.f[mask.low_word()] += static_cast<std::uint32_t>(count);
  for (int b = 0; b < n; ++b) {
    std::uint64_t bit = std::uint64_t{1} << b;
    for (std::uint64_t m = 0; m < zt.f.size(); ++m)
      if (m & bit) zt.f[m] += zt.f[m ^ bit];
  }
  return zt;
}

template <BitMask M>
std::uint64_t degree(const ClauseSystem<M>& cs, int v) {
  detail::check_index(v, cs.n_left(), "left index out of range");
  const M& sv = cs.left_masks[static_cast<std::size_t>(v)];
  std::uint64_t deg = 0;
  for (const M& tw : cs.right_masks)
    if (sv.disjoint(tw)) ++deg;
  return deg;
}

template <BitMask M>
std::uint64_t degree(const ClauseSystem<M>& cs, int v, const ZetaTable& right_zeta) {
  detail::check_index(v, cs.n_left(), "left index out of range");
  return right_zeta.subsets_of_complement(
      cs.left_masks[static_cast<std::size_t>(v)].low_word());
}

// Per-vertex degrees; zeta-backed when the table fits, otherwise a scan
// over the right mask classes.
template <BitMask M>
std::vector<std::uint64_t> degrees(const ClauseSystem<M>& cs,
                                   int sos_cap_bits = kDefaultSosBits) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(cs.n_left()), 0);
  if (cs.n <= sos_cap_bits) {
    ZetaTable zt = subset_zeta(mask_histogram(cs, Side::right), cs.n, sos_cap_bits);
    for (int v = 0; v < cs.n_left(); ++v)
      out[static_cast<std::size_t>(v)] = degree(cs, v, zt);
    return out;
  }
  auto rc = mask_classes(mask_histogram(cs, Side::right));
  std::unordered_map<M, std::uint64_t> class_degree;
  for (int v = 0; v < cs.n_left(); ++v) {
    const M& sv = cs.left_masks[static_cast<std::size_t>(v)];
    auto it = class_degree.find(sv);
    if (it == class_degree.end()) {
      std::uint64_t deg = 0;
      for (const auto& [mask, count] : rc)
        if (sv.disjoint(mask)) deg += count;
      it = class_degree.emplace(sv, deg).first;
    }
    out[static_cast<std::size_t>(v)] = it->second;
  }
  return out;
}

template <BitMask M>
std::uint64_t edge_count(const ClauseSystem<M>& cs) {
  auto lc = mask_classes(mask_histogram(cs, Side::left));
  auto rc = mask_classes(mask_histogram(cs, Side::right));
  std::uint64_t total = 0;
  for (const auto& [lm, lcount] : lc)
    for (const auto& [rm, rcount] : rc)
      if (lm.disjoint(rm))
        total = detail::checked_add(total, detail::checked_mul(lcount, rcount));
  return total;
}

// Edge count over left-side size; the left side is the convention here.
template <BitMask M>
double average_degree(const ClauseSystem<M>& cs) {
  if (cs.n_left() == 0) throw std::invalid_argument("empty left side");
  return static_cast<double>(edge_count(cs)) / static_cast<double>(cs.n_left());
}

enum class K22Algorithm { sos, class_pair, exhaustive, common_neighbors };

struct K22Report {
  std::uint64_t total = 0;
  std::vector<std::uint64_t> left_participation;
  std::vector<std::uint64_t> right_participation;
  K22Algorithm algorithm = K22Algorithm::sos;
};

// Exact K_{2,2} count of a clause system. A quadruple {v1,v2} x {w1,w2}
// is a K_{2,2} exactly when (S_v1 | S_v2) and (T_w1 | T_w2) are
// disjoint. With the zeta table the count per left class pair is
// C(f[~(a|b)], 2); above the table cap the class pairs on both sides
// are enumerated directly.
template <BitMask M>
K22Report count_k22(const ClauseSystem<M>& cs, int sos_cap_bits = kDefaultSosBits) {
  using detail::checked_add;
  using detail::checked_mul;
  auto left_hist = mask_histogram(cs, Side::left);
  auto right_hist = mask_histogram(cs, Side::right);
  auto lc = mask_classes(left_hist);
  auto rc = mask_classes(right_hist);

  std::vector<std::uint64_t> lpart(lc.size(), 0), rpart(rc.size(), 0);
  std::uint64_t total = 0;
  K22Report rep;

  if (cs.n <= sos_cap_bits) {
    rep.algorithm = K22Algorithm::sos;
    ZetaTable right_zeta = subset_zeta(right_hist, cs.n, sos_cap_bits);
    ZetaTable left_zeta = subset_zeta(left_hist, cs.n, sos_cap_bits);
    const std::uint64_t full = right_zeta.full_mask();
    for (std::size_t i = 0; i < lc.size(); ++i) {
      const std::uint64_t a = lc[i].first.low_word();
      const std::uint64_t ca = lc[i].second;
      for (std::size_t j = i; j < lc.size(); ++j) {
        std::uint64_t u = a | lc[j].first.low_word();
        std::uint64_t right_pairs = choose2(right_zeta.f[~u & full]);
        if (right_pairs == 0) continue;
        const std::uint64_t cb = lc[j].second;
        if (i == j) {
          total = checked_add(total, checked_mul(choose2(ca), right_pairs));
          lpart[i] = checked_add(lpart[i], checked_mul(ca - 1, right_pairs));
        } else {
          total = checked_add(total, checked_mul(checked_mul(ca, cb), right_pairs));
          lpart[i] = checked_add(lpart[i], checked_mul(cb, right_pairs));
          lpart[j] = checked_add(lpart[j], checked_mul(ca, right_pairs));
        }
      }
    }
    for (std::size_t k = 0; k < rc.size(); ++k) {
      const std::uint64_t u0 = rc[k].first.low_word();
      const std::uint64_t ek = rc[k].second;
      for (std::size_t l = k; l < rc.size(); ++l) {
        std::uint64_t u = u0 | rc[l].first.low_word();
        std::uint64_t left_pairs = choose2(left_zeta.f[~u & full]);
        if (left_pairs == 0) continue;
        const std::uint64_t el = rc[l].second;
        if (k == l) {
          rpart[k] = checked_add(rpart[k], checked_mul(ek - 1, left_pairs));
        } else {
          rpart[k] = checked_add(rpart[k], checked_mul(el, left_pairs));
          rpart[l] = checked_add(rpart[l], checked_mul(ek, left_pairs));
        }
      }
    }
  } else {
    rep.algorithm = K22Algorithm::class_pair;
    M scratch = M::zero(cs.n);
    for (std::size_t i = 0; i < lc.size(); ++i) {
      for (std::size_t j = i; j < lc.size(); ++j) {
        const std::uint64_t ca = lc[i].second;
        const std::uint64_t cb = lc[j].second;
        std::uint64_t mult_left = (i == j) ? choose2(ca) : checked_mul(ca, cb);
        if (mult_left == 0) continue;
        scratch.assign_or(lc[i].first, lc[j].first);
        for (std::size_t k = 0; k < rc.size(); ++k) {
          for (std::size_t l = k; l < rc.size(); ++l) {
            if (!scratch.disjoint_with_or(rc[k].first, rc[l].first)) continue;
            const std::uint64_t ek = rc[k].second;
            const std::uint64_t el = rc[l].second;
            std::uint64_t mult_right = (k == l) ? choose2(ek) : checked_mul(ek, el);
            if (mult_right == 0) continue;
            total = checked_add(total, checked_mul(mult_left, mult_right));
            if (i == j) {
              lpart[i] = checked_add(lpart[i], checked_mul(ca - 1, mult_right));
            } else {
              lpart[i] = checked_add(lpart[i], checked_mul(cb, mult_right));
              lpart[j] = checked_add(lpart[j], checked_mul(ca, mult_right));
            }
            if (k == l) {
              rpart[k] = checked_add(rpart[k], checked_mul(ek - 1, mult_left));
            } else {
              rpart[k] = checked_add(rpart[k], checked_mul(el, mult_left));
              rpart[l] = checked_add(rpart[l], checked_mul(ek, mult_left));
            }
          }
        }
      }
    }
  }

  std::unordered_map<M, std::uint64_t> lindex, rindex;
  for (std::size_t i = 0; i < lc.size(); ++i) lindex.emplace(lc[i].first, lpart[i]);
  for (std::size_t k = 0; k < rc.size(); ++k) rindex.emplace(rc[k].first, rpart[k]);
  rep.total = total;
  rep.left_participation.resize(static_cast<std::size_t>(cs.n_left()));
  rep.right_participation.resize(static_cast<std::size_t>(cs.n_right()));
  for (int v = 0; v < cs.n_left(); ++v)
    rep.left_participation[static_cast<std::size_t>(v)] =
        lindex.at(cs.left_masks[static_cast<std::size_t>(v)]);
  for (int w = 0; w < cs.n_right(); ++w)
    rep.right_participation[static_cast<std::size_t>(w)] =
        rindex.at(cs.right_masks[static_cast<std::size_t>(w)]);
  return rep;
}

// Same count by the opposite path, forced. Used by the algorithm
// agreement tests; count_k22 picks automatically.
template <BitMask M>
K22Report count_k22_class_pair(const ClauseSystem<M>& cs) {
  return count_k22(cs, -1);
}

// Brute-force ground truth: every quadruple (v1<v2, w1<w2) tested on all
// four edges against an adjacency matrix built from the edge list.
inline K22Report count_k22_explicit(const ExplicitBipartiteGraph& g,
                                    std::uint64_t cap_quadruples = kDefaultQuadCap) {
  const std::uint64_t nl = static_cast<std::uint64_t>(g.n_left);
  const std::uint64_t nr = static_cast<std::uint64_t>(g.n_right);
  unsigned __int128 quads = static_cast<unsigned __int128>(choose2(nl)) * choose2(nr);
  if (quads > cap_quadruples)
    throw CapExceeded("count_k22_explicit: quadruple count exceeds cap");
  if (nl * nr > kDefaultPairCap)
    throw CapExceeded("count_k22_explicit: adjacency matrix exceeds pair cap");

  std::vector<char> adj(static_cast<std::size_t>(nl * nr), 0);
  for (auto [v, w] : g.edges)
    adj[static_cast<std::size_t>(v) * nr + static_cast<std::size_t>(w)] = 1;
  auto at = [&](int v, int w) {
    return adj[static_cast<std::size_t>(v) * nr + static_cast<std::size_t>(w)] != 0;
  };

  K22Report rep;
  rep.algorithm = K22Algorithm::exhaustive;
  rep.left_participation.assign(static_cast<std::size_t>(g.n_left), 0);
  rep.right_participation.assign(static_cast<std::size_t>(g.n_right), 0);
  for (int v1 = 0; v1 < g.n_left; ++v1)
    for (int v2 = v1 + 1; v2 < g.n_left; ++v2)
      for (int w1 = 0; w1 < g.n_right; ++w1)
        for (int w2 = w1 + 1; w2 < g.n_right; ++w2)
          if (at(v1, w1) && at(v1, w2) && at(v2, w1) && at(v2, w2)) {
            rep.total = detail::checked_add(rep.total, 1);
            ++rep.left_participation[static_cast<std::size_t>(v1)];
            ++rep.left_participation[static_cast<std::size_t>(v2)];
            ++rep.right_participation[static_cast<std::size_t>(w1)];
            ++rep.right_participation[static_cast<std::size_t>(w2)];
          }
  return rep;
}

namespace detail {

inline std::vector<std::vector<std::uint64_t>> bit_rows(
    const ExplicitBipartiteGraph& g, bool transpose) {
  int rows = transpose ? g.n_right : g.n_left;
  int cols = transpose ? g.n_left : g.n_right;
  std::vector<std::vector<std::uint64_t>> out(
      static_cast<std::size_t>(rows),
      std::vector<std::uint64_t>(static_cast<std::size_t>((cols + 63) / 64), 0));
  for (auto [v, w] : g.edges) {
    int r = transpose ? w : v;
    int c = transpose ? v : w;
    out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c) / 64] |=
        std::uint64_t{1} << (c % 64);
  }
  return out;
}

inline int common_bits(const std::vector<std::uint64_t>& a,
                       const std::vector<std::uint64_t>& b) {
  int c = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    c += std::popcount(a[i] & b[i]);
  return c;
}

}  // namespace detail

// Exact explicit-graph count through the common-neighbour identity:
// the K_{2,2}s on a fixed pair of same-side vertices are the pairs of
// their common neighbours. O(n^2) row intersections instead of the
// quadruple loop; large explicit graphs (the Bernoulli baseline) use
// this path.
inline K22Report count_k22_common_neighbors(const ExplicitBipartiteGraph& g) {
  if (static_cast<std::uint64_t>(g.n_left) * static_cast<std::uint64_t>(g.n_right) >
      kDefaultPairCap)
    throw CapExceeded("count_k22_common_neighbors: bit rows exceed pair cap");
  K22Report rep;
  rep.algorithm = K22Algorithm::common_neighbors;
  rep.left_participation.assign(static_cast<std::size_t>(g.n_left), 0);
  rep.right_participation.assign(static_cast<std::size_t>(g.n_right), 0);

  auto rows = detail::bit_rows(g, false);
  for (int v1 = 0; v1 < g.n_left; ++v1)
    for (int v2 = v1 + 1; v2 < g.n_left; ++v2) {
      std::uint64_t pairs = choose2(static_cast<std::uint64_t>(detail::common_bits(
          rows[static_cast<std::size_t>(v1)], rows[static_cast<std::size_t>(v2)])));
      if (pairs == 0) continue;
      rep.total = detail::checked_add(rep.total, pairs);
      rep.left_participation[static_cast<std::size_t>(v1)] += pairs;
      rep.left_participation[static_cast<std::size_t>(v2)] += pairs;
    }
  auto cols = detail::bit_rows(g, true);
  for (int w1 = 0; w1 < g.n_right; ++w1)
    for (int w2 = w1 + 1; w2 < g.n_right; ++w2) {
      std::uint64_t pairs = choose2(static_cast<std::uint64_t>(detail::common_bits(
          cols[static_cast<std::size_t>(w1)], cols[static_cast<std::size_t>(w2)])));
      rep.right_participation[static_cast<std::size_t>(w1)] += pairs;
      rep.right_participation[static_cast<std::size_t>(w2)] += pairs;
    }
  return rep;
}

// Sizes of the partial intersections behind a vertex's neighborhood:
// d_0 = N_R, then one entry per clause excluding v (ascending clause
// index), counting the right vertices compatible with all bits so far.
// Nonincreasing; the last entry is degree(v).
struct DegreeTrace {
  std::vector<std::uint64_t> values;
};

template <BitMask M>
DegreeTrace degree_trace(const ClauseSystem<M>& cs, int v) {
  detail::check_index(v, cs.n_left(), "left index out of range");
  auto rc = mask_classes(mask_histogram(cs, Side::right));
  DegreeTrace trace;
  trace.values.push_back(static_cast<std::uint64_t>(cs.n_right()));
  std::vector<int> bits;
  cs.left_masks[static_cast<std::size_t>(v)].for_each_set_bit(
      [&](int b) { bits.push_back(b); });
  M acc = M::zero(cs.n);
  for (int b : bits) {
    acc.set(b);
    std::uint64_t cnt = 0;
    for (const auto& [mask, count] : rc)
      if (acc.disjoint(mask)) cnt += count;
    trace.values.push_back(cnt);
  }
  return trace;
}

// Number of distinct neighborhood sets among left vertices of degree at
// least min_degree. Two left vertices have equal neighborhoods exactly
// when they are compatible with the same set of right mask classes, so
// the canonical signature is that index set.
template <BitMask M>
std::uint64_t distinct_neighborhood_count(const ClauseSystem<M>& cs,
                                          std::uint64_t min_degree = 0) {
  auto rc = mask_classes(mask_histogram(cs, Side::right));
  auto lc = mask_classes(mask_histogram(cs, Side::left));
  std::unordered_set<std::vector<std::uint32_t>, detail::U32VecHash> signatures;
  for (const auto& [lm, lcount] : lc) {
    std::vector<std::uint32_t> sig;
    std::uint64_t deg = 0;
    for (std::uint32_t t = 0; t < rc.size(); ++t)
      if (lm.disjoint(rc[t].first)) {
        sig.push_back(t);
        deg += rc[t].second;
      }
    if (deg >= min_degree) signatures.insert(std::move(sig));
  }
  return signatures.size();
}

inline std::uint64_t distinct_neighborhood_count(const ExplicitBipartiteGraph& g,
                                                 std::uint64_t min_degree = 0) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(g.n_left));
  for (auto [v, w] : g.edges) rows[static_cast<std::size_t>(v)].push_back(w);
  std::unordered_set<std::vector<int>, detail::IntVecHash> neighborhoods;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    if (row.size() >= min_degree) neighborhoods.insert(std::move(row));
  }
  return neighborhoods.size();
}

}  // namespace cnfgraph
