#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cnfgraph/errors.hpp"
#include "cnfgraph/mask.hpp"

namespace cnfgraph {

enum class Side { left, right };

inline constexpr std::uint64_t kDefaultPairCap = 100'000'000;

// A bipartite graph given implicitly as an intersection of n clause
// graphs. left_masks[v] bit i is set when clause i excludes v on the
// left; right_masks[w] likewise on the right. (v, w) is an edge exactly
// when the two masks are disjoint: no clause excludes both endpoints.
template <BitMask M>
struct ClauseSystem {
  int n = 0;
  std::vector<M> left_masks;
  std::vector<M> right_masks;

  int n_left() const { return static_cast<int>(left_masks.size()); }
  int n_right() const { return static_cast<int>(right_masks.size()); }

  const std::vector<M>& masks(Side s) const {
    return s == Side::left ? left_masks : right_masks;
  }

  void validate() const {
    if (n < 0) throw std::invalid_argument("negative clause count");
    for (const M& m : left_masks)
      if (!m.high_bits_clear(n))
        throw std::invalid_argument("left mask has bits at or above clause count");
    for (const M& m : right_masks)
      if (!m.high_bits_clear(n))
        throw std::invalid_argument("right mask has bits at or above clause count");
  }
};

using ClauseSystem64 = ClauseSystem<Mask64>;
using ClauseSystemDyn = ClauseSystem<MaskDyn>;

// Edge-list bipartite graph; edges sorted ascending, no duplicates.
struct ExplicitBipartiteGraph {
  int n_left = 0;
  int n_right = 0;
  std::vector<std::pair<int, int>> edges;

  void normalize() {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }

  void validate() const {
    if (n_left < 0 || n_right < 0)
      throw std::invalid_argument("negative side size");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto [v, w] = edges[i];
      if (v < 0 || v >= n_left || w < 0 || w >= n_right)
        throw std::invalid_argument("edge index out of range");
      if (i > 0 && !(edges[i - 1] < edges[i]))
        throw std::invalid_argument("edges not in ascending order or duplicated");
    }
  }
};

template <BitMask M>
struct MaskHistogram {
  std::unordered_map<M, std::uint64_t> entries;
  Side side = Side::left;
};

namespace detail {

inline void check_index(int i, int size, const char* what) {
  if (i < 0 || i >= size) throw std::out_of_range(what);
}

}  // namespace detail

// Membership in the clause graph CL(A, B): every pair touching A on the
// left or B on the right. A and B are membership vectors over the sides.
inline bool clause_graph_contains(const std::vector<char>& in_A,
                                  const std::vector<char>& in_B, int v, int w) {
  detail::check_index(v, static_cast<int>(in_A.size()), "left index out of range");
  detail::check_index(w, static_cast<int>(in_B.size()), "right index out of range");
  return in_A[static_cast<std::size_t>(v)] != 0 || in_B[static_cast<std::size_t>(w)] != 0;
}

template <BitMask M>
bool adjacent(const ClauseSystem<M>& cs, int v, int w) {
  detail::check_index(v, cs.n_left(), "left index out of range");
  detail::check_index(w, cs.n_right(), "right index out of range");
  return cs.left_masks[static_cast<std::size_t>(v)].disjoint(
      cs.right_masks[static_cast<std::size_t>(w)]);
}

// Membership vectors of clause i. Bit i CLEAR in a vertex mask means the
// vertex belongs to the clause set. Reconstruction support for tests;
// masks stay the canonical representation.
template <BitMask M>
std::pair<std::vector<char>, std::vector<char>> clause_sets(
    const ClauseSystem<M>& cs, int i) {
  detail::check_index(i, cs.n, "clause index out of range");
  std::vector<char> in_A(static_cast<std::size_t>(cs.n_left()));
  std::vector<char> in_B(static_cast<std::size_t>(cs.n_right()));
  for (int v = 0; v < cs.n_left(); ++v)
    in_A[static_cast<std::size_t>(v)] = !cs.left_masks[static_cast<std::size_t>(v)].test(i);
  for (int w = 0; w < cs.n_right(); ++w)
    in_B[static_cast<std::size_t>(w)] = !cs.right_masks[static_cast<std::size_t>(w)].test(i);
  return {std::move(in_A), std::move(in_B)};
}

template <BitMask M>
std::vector<int> neighborhood(const ClauseSystem<M>& cs, int v) {
  detail::check_index(v, cs.n_left(), "left index out of range");
  const M& sv = cs.left_masks[static_cast<std::size_t>(v)];
  std::vector<int> out;
  for (int w = 0; w < cs.n_right(); ++w)
    if (sv.disjoint(cs.right_masks[static_cast<std::size_t>(w)])) out.push_back(w);
  return out;
}

template <BitMask M>
ExplicitBipartiteGraph materialize(const ClauseSystem<M>& cs,
                                   std::uint64_t cap_pairs = kDefaultPairCap) {
  std::uint64_t pairs = static_cast<std::uint64_t>(cs.n_left()) *
                        static_cast<std::uint64_t>(cs.n_right());
  if (pairs > cap_pairs)
    throw CapExceeded("materialize: pair count exceeds cap");
  ExplicitBipartiteGraph g;
  g.n_left = cs.n_left();
  g.n_right = cs.n_right();
  for (int v = 0; v < cs.n_left(); ++v) {
    const M& sv = cs.left_masks[static_cast<std::size_t>(v)];
    for (int w = 0; w < cs.n_right(); ++w)
      if (sv.disjoint(cs.right_masks[static_cast<std::size_t>(w)]))
        g.edges.emplace_back(v, w);
  }
  return g;
}

template <BitMask M>
MaskHistogram<M> mask_histogram(const ClauseSystem<M>& cs, Side side) {
  MaskHistogram<M> h;
  h.side = side;
  for (const M& m : cs.masks(side)) ++h.entries[m];
  return h;
}

// Histogram entries as a list sorted by mask value; algorithms iterate
// this instead of the unordered map so results never depend on hash
// ordering.
template <BitMask M>
std::vector<std::pair<M, std::uint64_t>> mask_classes(const MaskHistogram<M>& h) {
  std::vector<std::pair<M, std::uint64_t>> out(h.entries.begin(), h.entries.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace cnfgraph
