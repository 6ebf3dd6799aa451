// Exact loose-Hamilton-cycle detection and counting.
//
// A loose Hamilton cycle in a k-uniform hypergraph on n vertices (with
// (k-1) | n) is a cyclic vertex order in which the n/(k-1) edges cover k
// consecutive vertices each and consecutive edges overlap in exactly one
// vertex (the "link").  Cycles are identified up to rotation and reflection
// of the cyclic order.  For the minimal case n = 2(k-1) the two edges meet
// in one vertex at each of the two seams; such cycles are accepted.
//
// The searches are complete backtracking over link/edge sequences rooted at
// the minimum link vertex, so NotFound certifies non-existence and counts
// are exact.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "loosehc/hypergraph.hpp"

namespace loosehc {

struct LooseCycle {
  std::vector<Vertex> order;    // cyclic vertex sequence, length n
  std::vector<Edge> edge_list;  // n/(k-1) edges of k consecutive vertices
};

// Complete search for one loose Hamilton cycle.  Throws std::invalid_argument
// unless (k-1) divides n and n >= k.
std::optional<LooseCycle> find_loose_hamilton(const KUniformHypergraph& h);

// Exact number of distinct loose Hamilton cycles (up to rotation and
// reflection).  Intended for desk scale (n <= ~16 at k = 3).
std::uint64_t count_loose_hamilton(const KUniformHypergraph& h);

// Restricted cycles on labelled edge sets: labels X = {1..2m} and
// Y = {2m+1..2m+2*kappa*m}; a restricted cycle is 2m edges
// {x_i, x_{i+1}, y_{i,1..kappa}} forming an ordinary Hamilton cycle on X
// with pairwise disjoint kappa-sets exhausting Y (edges intersect only
// inside X).  Every edge in `edges` must carry exactly 2 X-labels and kappa
// Y-labels; mislabeled input throws std::invalid_argument.
std::uint64_t count_restricted_H(const std::vector<Edge>& edges, int m, int kappa);

// Early-exit variant of count_restricted_H.
bool has_restricted_cycle(const std::vector<Edge>& edges, int m, int kappa);

// Brute-force overlap census against the canonical 2m-cycle C0 on the
// configuration points (2m cells of d points; C0 pairs cell l's copy 1 to
// cell l+1's copy 0).  All 2m-cycles are enumerated; entry b counts cycles
// sharing exactly b point-pairs with C0:
//   raw_overlap[b]  — every cycle, classified purely by overlap;
//   compatible[b]   — only cycles whose non-shared pairs also avoid C0's
//                     points entirely (the overlap count N(b) appearing in
//                     the second-moment sum).
// Index b runs 0..2m; raw totals sum to a_2m and raw_overlap[2m] == 1 (C0
// itself).  Throws when 2dm exceeds the enumeration cap (~20 points).
struct OverlapTable {
  std::vector<std::uint64_t> compatible;
  std::vector<std::uint64_t> raw_overlap;
};

OverlapTable brute_force_overlap_table(int m, int d);

// The overlap-count oracle N(b): compatible-cycle count at overlap exactly b.
std::uint64_t brute_force_N_b(int m, int d, int b);

}  // namespace loosehc
