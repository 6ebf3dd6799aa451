// Multi-round exposure coupling: probability splitting and the copy
// hierarchy that embeds independent d-regular samples inside H(n, p; k).
//
// The chain p -> p1 -> p2 -> p3 splits a single exposure into
// alpha * d * beta independent sub-exposures:
//   p  = 1 - (1 - p1)^alpha   with alpha = ceil(exp(2 * kappa * d)),
//   p1 = 1 - (1 - p2)^d,
//   p2 = 1 - (1 - p3)^beta    with beta  = d^2 * (d/2)^kappa.
// Round i <= alpha owns a block A_i of copies; A_i splits into B_{i,1},
// ..., B_{i,d} by partition class, and each B_{i,j} splits into beta
// Lambda-copies indexed by the tuple of point copies inside their cells.
// Each Lambda-copy is an independent p3-exposure, so any one of them is a
// fresh chance to contain a d-regular loose-cycle sample.

#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "loosehc/configuration.hpp"
#include "loosehc/hypergraph.hpp"

namespace loosehc {

// q with 1 - (1 - q)^exponent == p, evaluated stably via expm1/log1p.
double split_probability(double p, std::uint64_t exponent);

// Inverse of split_probability: 1 - (1 - q)^exponent.
double recompose_probability(double q, std::uint64_t exponent);

struct CouplingParams {
  int k = 3;
  int kappa = 1;
  int d = 4;
  std::uint64_t alpha = 0;  // ceil(exp(2 * kappa * d))
  std::uint64_t beta = 0;   // d^2 * (d/2)^kappa
  double p = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;

  // Derives the full parameter chain.  Throws std::overflow_error when
  // exp(2 * kappa * d) does not fit in 64 bits.
  static CouplingParams derive(int k, int d, double p);
};

struct UnionCheckResult {
  long trials = 0;
  std::uint64_t candidate_count = 0;  // C(n, k)
  double expected = 0.0;              // target edge probability p
  double pooled_frequency = 0.0;      // edge occurrences / (trials * candidates)
  double max_edge_deviation = 0.0;    // max over candidates of |freq - p|
};

// Monte Carlo check that the union of `alpha` independent H(n, p1; k)
// samples with p1 = split_probability(p, alpha) has edge marginals p.
// Trial t unions graphs seeded derive_seed(seed, t * alpha + i).
UnionCheckResult union_distribution_check(int n, int k, double p, std::uint64_t alpha,
                                          long trials, std::uint64_t seed);

// Point-level vertex labels for pattern graphs on configuration points:
// X-point x gets label x + 1; Y-point y gets label 2dm + y + 1, keeping the
// two point sets disjoint inside one labelled graph.
Vertex x_point_label(const PartitionScheme& scheme, int x_point);
Vertex y_point_label(const PartitionScheme& scheme, int y_point);
int x_point_from_label(const PartitionScheme& scheme, Vertex v);  // -1 if not an X label
int y_point_from_label(const PartitionScheme& scheme, Vertex v);  // -1 if not a Y label

struct PartitionClasses {
  std::vector<std::vector<int>> x_classes;  // d classes of 2m X-points each
  std::vector<std::vector<int>> y_classes;  // d classes of kappa*m Y-points each
};

// Uniform partition of the X-points into d classes of 2m and the Y-points
// into d classes of kappa*m (one shuffle each, consecutive blocks).
PartitionClasses sample_partition_classes(const PartitionScheme& scheme, std::uint64_t seed);

// Samples the point-level Gamma(X_j, Y_j, p) for class j (1-based), with
// points carried as their point labels.
BipartitePatternGraph generate_class_gamma(const PartitionScheme& scheme,
                                           const PartitionClasses& classes, int j, double p,
                                           std::uint64_t seed);

// True iff the point-level edge is spoiled: its two X-points share an X-cell
// or two of its Y-points share a Y-cell (equal psi-images collide after
// projection).
bool is_spoiled_edge(const Edge& point_edge, const PartitionScheme& scheme);

// Gamma-hat: the same point-level pattern graph with every spoiled edge
// removed.  Classes are unchanged; the operation is idempotent.
BipartitePatternGraph build_gamma_hat(const BipartitePatternGraph& point_gamma,
                                      const PartitionScheme& scheme);

// Projects a point-level edge through psi to cell labels.  Throws on spoiled
// edges (a collision would repeat a vertex).
Edge project_point_edge(const Edge& point_edge, const PartitionScheme& scheme);

// Bookkeeping for the copy hierarchy.  Edges are filed under the Lambda-copy
// (i, j, tuple) they were exposed in; unions over tuples, classes and rounds
// recover B_{i,j}, A_i and the whole graph.
class CopyHierarchy {
 public:
  CopyHierarchy(const PartitionScheme& scheme, std::uint64_t alpha);

  std::uint64_t alpha() const { return alpha_; }
  std::uint64_t beta() const { return beta_; }
  std::uint64_t total_copies() const { return alpha_ * static_cast<std::uint64_t>(scheme_.d) * beta_; }
  const PartitionScheme& scheme() const { return scheme_; }

  // Copy tuple of a point-level edge: X-copies (j1, j2) ordered by X-cell,
  // then Y-copies ordered by Y-cell; encoded mixed-radix into [0, beta).
  std::uint64_t copy_tuple_index(const Edge& point_edge) const;

  // Files the projection of `point_edge` under Lambda-copy (i, j, tuple).
  // i is 1-based in [1, alpha], j is 1-based in [1, d].
  void insert(std::uint64_t i, int j, const Edge& point_edge);

  std::uint64_t occupied_copies() const { return copies_.size(); }
  std::vector<Edge> lambda_copy_edges(std::uint64_t i, int j, std::uint64_t tuple) const;
  KUniformHypergraph class_union(std::uint64_t i, int j) const;  // B_{i,j}
  KUniformHypergraph round_union(std::uint64_t i) const;         // A_i
  KUniformHypergraph full_union() const;

 private:
  PartitionScheme scheme_;
  std::uint64_t alpha_ = 0;
  std::uint64_t beta_ = 0;
  std::map<std::tuple<std::uint64_t, int, std::uint64_t>, std::vector<Edge>> copies_;
};

// Embeds every edge of a Gamma-hat graph into round i, class j of the
// hierarchy; each edge lands in the unique Lambda-copy named by its copy
// tuple.  Throws if an edge is spoiled (Gamma-hat input is required) or if
// the scheme disagrees with the hierarchy's.  Returns the number of edges
// filed.
std::size_t embed_edges_into_copies(const BipartitePatternGraph& gamma_hat,
                                    const PartitionScheme& scheme, CopyHierarchy& hierarchy,
                                    std::uint64_t i, int j);

struct SuccessBound {
  double per_round_success = 0.0;      // e^{-kappa d}, one round's guaranteed chance
  double log_failure = 0.0;            // alpha * log(1 - e^{-kappa d})
  double log_failure_simplified = 0.0; // -e^{kappa d}, the displayed weaker bound
  double success_lower = 0.0;          // 1 - exp(log_failure)
};

// Failure bound for alpha independent rounds, each succeeding with
// probability at least e^{-kappa d}:
//   (1 - e^{-kappa d})^alpha <= e^{-e^{kappa d}}  once alpha >= e^{2 kappa d}.
SuccessBound success_probability_bound(int d, int kappa, std::uint64_t alpha);

}  // namespace loosehc
