// Perfect-matching search in bipartite pattern graphs.
//
// A matching instance is a BipartitePatternGraph with |S| = 2m and
// |T| = kappa * m; a perfect matching is a set of m pairwise disjoint edges
// covering S and T exactly.  The search is exact backtracking (complete at
// desk scale); uniform sampling enumerates all matchings below a cap and
// indexes into the list, so its distribution is exactly uniform.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "loosehc/hypergraph.hpp"

namespace loosehc {

struct PatternMatching {
  std::vector<Edge> blocks;  // m disjoint edges, sorted lexicographically
};

enum class MatchingStatus {
  kFound,           // a perfect matching was found within budget
  kExhausted,       // the full search tree was explored; no matching exists
  kBudgetExceeded,  // node budget hit before the search finished
};

struct MatchingResult {
  MatchingStatus status = MatchingStatus::kExhausted;
  PatternMatching matching;          // populated iff status == kFound
  std::uint64_t nodes_expanded = 0;  // search-tree nodes visited
};

// Returns true iff `pm` is a perfect matching of g: blocks are edges of g,
// pairwise disjoint, and cover S and T exactly.
bool is_perfect_matching(const BipartitePatternGraph& g, const PatternMatching& pm);

// Backtracking search branching on the unmatched S-vertex with the fewest
// available edges (most-constrained first), with dead-end pruning on both
// sides.  `budget` caps the number of search-tree nodes; 0 means unlimited.
// kExhausted is returned only when the search tree was fully explored.
// Throws std::invalid_argument if the class sizes are not (2m, kappa*m).
MatchingResult find_perfect_matching(const BipartitePatternGraph& g, std::uint64_t budget = 0);

// Enumerates every perfect matching in a canonical order (always extending
// the lowest unmatched S-vertex, edges in lexicographic order) and calls
// `visit` for each; stop early by returning false from `visit`.  Returns the
// number of matchings visited.
std::uint64_t enumerate_perfect_matchings(const BipartitePatternGraph& g,
                                          const std::function<bool(const PatternMatching&)>& visit);

// Exact number of perfect matchings, capped: throws std::runtime_error once
// more than `cap` matchings have been seen (cap = 0 means unlimited).
std::uint64_t count_perfect_matchings(const BipartitePatternGraph& g, std::uint64_t cap = 0);

// Uniform draw among all perfect matchings by full enumeration: counts the
// matchings (error if none, or more than `cap`), draws an index with the
// seeded generator, and re-enumerates to materialize that matching.
PatternMatching sample_uniform_matching(const BipartitePatternGraph& g, std::uint64_t seed,
                                        std::uint64_t cap = 10'000'000);

}  // namespace loosehc
