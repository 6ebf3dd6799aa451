// Configuration model behind the d-regular loose-cycle multigraph Lambda_d.
//
// For parameters (m, d, kappa) with d even, the point set X has 2dm points
// grouped into 2m cells of d copies, and Y has d*kappa*m points grouped into
// 2*kappa*m cells of d/2 copies.  A configuration is a uniform perfect
// pairing of X together with a uniform partition of Y into dm blocks of
// size kappa; pair j and block j project jointly to one k-edge (k = kappa+2)
// on the cell labels.  A configuration is "spoiled" when a pair hits one
// X-cell twice (counted by s1) or a block hits some Y-cell twice (s2);
// conditioning on s1 + s2 = 0 makes the projection a simple d-regular
// k-uniform multigraph sample.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "loosehc/hypergraph.hpp"

namespace loosehc {

struct PartitionScheme {
  int m = 1;
  int d = 2;      // even, >= 2
  int kappa = 1;  // k - 2 >= 1

  PartitionScheme() = default;
  PartitionScheme(int m, int d, int kappa);  // validates

  int k() const { return kappa + 2; }
  int x_point_count() const { return 2 * d * m; }
  int y_point_count() const { return d * kappa * m; }
  int x_cell_count() const { return 2 * m; }
  int y_cell_count() const { return 2 * kappa * m; }
  int pair_count() const { return d * m; }  // == block count

  // Points are 0-based; cell c holds a contiguous run of copies.
  int x_cell_of(int point) const { return point / d; }
  int y_cell_of(int point) const { return point / (d / 2); }
  int x_copy_of(int point) const { return point % d; }
  int y_copy_of(int point) const { return point % (d / 2); }

  // Projected vertex labels: X-cells map to {1,...,2m}, Y-cells to
  // {2m+1,...,2m+2*kappa*m}.
  Vertex x_cell_vertex(int cell) const { return cell + 1; }
  Vertex y_cell_vertex(int cell) const { return 2 * m + cell + 1; }
  int vertex_count() const { return 2 * m * (1 + kappa); }
};

struct Configuration {
  PartitionScheme scheme;
  std::vector<std::array<int, 2>> x_pairs;  // dm pairs, each sorted, in slot order
  std::vector<std::vector<int>> y_blocks;   // dm blocks of kappa points, each sorted
  int s1 = 0;                               // pairs with both points in one X-cell
  int s2 = 0;  // sum over blocks of C(c, 2) over Y-cell multiplicities c
};

int count_spoiled_pairs(const PartitionScheme& scheme, const std::vector<std::array<int, 2>>& pairs);
int count_spoiled_blocks(const PartitionScheme& scheme, const std::vector<std::vector<int>>& blocks);

// Draws a uniform configuration: a Fisher-Yates permutation of the X points
// read off in consecutive pairs, then one of the Y points read off in
// consecutive kappa-blocks (X first, then Y, one permutation each).
Configuration sample_configuration(int m, int d, int kappa, std::uint64_t seed);

inline bool is_unspoiled(const Configuration& c) { return c.s1 == 0 && c.s2 == 0; }

// Asymptotic probability of an unspoiled configuration:
//   exp(-(d-1)/2 - (kappa-1)(d-2)/4),
// the product of the two Poisson vanishing probabilities for s1 and s2.
// Always at least exp(-kappa*d).
double unspoiled_probability_asymptotic(int d, int kappa);

// Projects an unspoiled configuration to its dm edges on the cell labels,
// in pair-slot order.  Throws std::invalid_argument if the configuration is
// spoiled (a spoiled slot would repeat a vertex inside an edge).
std::vector<Edge> project_psi(const Configuration& c);

struct LambdaSample {
  Configuration configuration;     // the accepted draw
  std::vector<Edge> edges;         // dm projected edges with multiplicity
  KUniformHypergraph hypergraph;   // deduplicated simple version, n = 2m(1+kappa)
  std::int64_t rejections = 0;     // spoiled draws discarded before acceptance
};

// Samples Lambda_d by rejection: redraw the entire configuration (both the
// pairing and the partition) until it is unspoiled.  max_attempts < 0 selects
// the default cap of ceil(10 * exp(kappa * d)); exhausting the cap throws
// std::runtime_error.
LambdaSample sample_lambda_d(int m, int d, int kappa, std::uint64_t seed,
                             std::int64_t max_attempts = -1);

struct SpoiledStats {
  int m = 0, d = 0, kappa = 0;
  long trials = 0;
  double mean_s1 = 0.0;
  double mean_s2 = 0.0;
  double unspoiled_freq = 0.0;
  std::vector<std::int64_t> hist_total;  // hist_total[t] = #trials with s1+s2 == t
};

// Repeated sampling of s1, s2 over `trials` independent configurations; trial
// i uses seed derive_seed(seed, i).
SpoiledStats collect_spoiled_stats(int m, int d, int kappa, long trials, std::uint64_t seed);

}  // namespace loosehc
