// k-uniform hypergraphs and the bipartite pattern graphs used throughout.
//
// Vertices are 1-based ints.  An edge is a sorted vector of k distinct
// vertices; edge lists are kept sorted lexicographically so that membership
// tests are binary searches and generation order is reproducible.

#pragma once

#include <cstdint>
#include <vector>

namespace loosehc {

using Vertex = int;
using Edge = std::vector<Vertex>;

// Advances `idx` (a strictly increasing r-subset of {0,...,n-1}) to the next
// subset in lexicographic order.  Returns false when `idx` was the last one.
bool next_k_subset(std::vector<int>& idx, int n);

struct KUniformHypergraph {
  int n = 0;  // vertex set is {1, ..., n}
  int k = 2;
  std::vector<Edge> edges;  // each sorted; list sorted lexicographically

  // Validates and canonicalizes: every edge must have k distinct vertices in
  // [1, n].  Edges are sorted individually, then the list is sorted and
  // deduplicated (set semantics).  Throws std::invalid_argument on bad input.
  static KUniformHypergraph from_edges(int n, int k, std::vector<Edge> edges);

  bool contains(const Edge& e) const;  // e need not be pre-sorted
  std::vector<int> degrees() const;    // degrees[v-1] = #edges containing v
  std::size_t edge_count() const { return edges.size(); }
};

// Samples H(n, p; k): every k-subset of {1,...,n} is an edge independently
// with probability p.  Candidates are scanned in lexicographic order and each
// consumes exactly one uniform draw, so the output is a pure function of
// (n, k, p, seed) and stays coupled across different p with the same seed.
KUniformHypergraph generate_hnpk(int n, int k, double p, std::uint64_t seed);

// Returns true iff some vertex lies in no edge.
bool has_isolated_vertex(const KUniformHypergraph& h);

// Bipartite pattern graph Gamma(S, T, p): vertex classes S (size 2m) and T
// (size kappa*m), and every k-set with exactly 2 vertices in S and
// kappa = k - 2 in T present independently with probability p.  Vertex
// labels are arbitrary distinct ints; edges are stored sorted like
// hypergraph edges.  These are the perfect-matching instances: m disjoint
// edges cover S and T exactly.
struct BipartitePatternGraph {
  std::vector<Vertex> s;  // sorted, size 2m
  std::vector<Vertex> t;  // sorted, size kappa*m
  int kappa = 1;          // k - 2
  std::vector<Edge> edges;

  int k() const { return kappa + 2; }
  int m() const { return static_cast<int>(s.size()) / 2; }
  bool in_s(Vertex v) const;
  bool in_t(Vertex v) const;
  bool contains(const Edge& e) const;

  // Validates class sizes (|S| = 2m, |T| = kappa*m, disjoint) and the
  // 2-from-S / kappa-from-T membership pattern of every edge.
  static BipartitePatternGraph from_edges(std::vector<Vertex> s, std::vector<Vertex> t,
                                          int kappa, std::vector<Edge> edges);
};

// Samples Gamma(S, T, p) on explicit vertex classes.  Candidate k-sets are
// enumerated as: each pair {s_i, s_j} (i < j, positions in sorted S) in
// lexicographic position order, and for each pair every kappa-subset of T in
// lexicographic position order; each candidate consumes one uniform draw.
BipartitePatternGraph generate_gamma_on(std::vector<Vertex> s, std::vector<Vertex> t,
                                        int kappa, double p, std::uint64_t seed);

// Standard-label convenience: S = {1,...,2m}, T = {2m+1,...,2m+(k-2)m}.
BipartitePatternGraph generate_gamma(int m, int k, double p, std::uint64_t seed);

}  // namespace loosehc
