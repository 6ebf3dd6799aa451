#include "loosehc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "loosehc/rng.hpp"

namespace loosehc {

double split_probability(double p, std::uint64_t exponent) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("split_probability: p must lie in [0, 1]");
  if (exponent == 0) throw std::invalid_argument("split_probability: exponent must be positive");
  if (p == 1.0) return 1.0;
  // q = 1 - (1-p)^(1/a) = -expm1(log1p(-p) / a), stable for tiny p and huge a.
  return -std::expm1(std::log1p(-p) / static_cast<double>(exponent));
}

double recompose_probability(double q, std::uint64_t exponent) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("recompose_probability: q must lie in [0, 1]");
  if (exponent == 0) throw std::invalid_argument("recompose_probability: exponent must be positive");
  if (q == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(exponent) * std::log1p(-q));
}

CouplingParams CouplingParams::derive(int k, int d, double p) {
  if (k < 3) throw std::invalid_argument("CouplingParams: k must be at least 3");
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("CouplingParams: d must be even and >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("CouplingParams: p must lie in [0, 1]");
  CouplingParams cp;
  cp.k = k;
  cp.kappa = k - 2;
  cp.d = d;
  cp.p = p;
  const double alpha_real = std::exp(2.0 * cp.kappa * d);
  if (alpha_real >= static_cast<double>(std::numeric_limits<std::uint64_t>::max())) {
    throw std::overflow_error("CouplingParams: ceil(exp(2*kappa*d)) exceeds 64 bits");
  }
  cp.alpha = static_cast<std::uint64_t>(std::ceil(alpha_real));
  std::uint64_t beta = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
  for (int i = 0; i < cp.kappa; ++i) {
    if (beta > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d / 2)) {
      throw std::overflow_error("CouplingParams: beta exceeds 64 bits");
    }
    beta *= static_cast<std::uint64_t>(d / 2);
  }
  cp.beta = beta;
  cp.p1 = split_probability(p, cp.alpha);
  cp.p2 = split_probability(cp.p1, static_cast<std::uint64_t>(d));
  cp.p3 = split_probability(cp.p2, cp.beta);
  return cp;
}

UnionCheckResult union_distribution_check(int n, int k, double p, std::uint64_t alpha,
                                          long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("union_distribution_check: trials must be positive");
  if (alpha == 0) throw std::invalid_argument("union_distribution_check: alpha must be positive");
  const double p1 = split_probability(p, alpha);

  // Count occurrences per candidate k-set across trials of the alpha-fold union.
  std::vector<long> counts;
  {
    const KUniformHypergraph probe = generate_hnpk(n, k, 1.0, 0);
    counts.assign(probe.edges.size(), 0);
  }
  std::vector<char> in_union(counts.size(), 0);
  for (long t = 0; t < trials; ++t) {
    std::fill(in_union.begin(), in_union.end(), 0);
    for (std::uint64_t i = 0; i < alpha; ++i) {
      const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t) * alpha + i);
      Rng rng(s);
      // Same candidate order as generate_hnpk; mark instead of materializing.
      for (std::size_t c = 0; c < in_union.size(); ++c) {
        if (rng.next_unit() < p1) in_union[c] = 1;
      }
    }
    for (std::size_t c = 0; c < in_union.size(); ++c) counts[c] += in_union[c];
  }

  UnionCheckResult r;
  r.trials = trials;
  r.candidate_count = counts.size();
  r.expected = p;
  long total = 0;
  double max_dev = 0.0;
  for (long c : counts) {
    total += c;
    const double freq = static_cast<double>(c) / static_cast<double>(trials);
    max_dev = std::max(max_dev, std::abs(freq - p));
  }
  r.pooled_frequency =
      static_cast<double>(total) / (static_cast<double>(trials) * static_cast<double>(counts.size()));
  r.max_edge_deviation = max_dev;
  return r;
}

Vertex x_point_label(const PartitionScheme& scheme, int x_point) {
  if (x_point < 0 || x_point >= scheme.x_point_count()) {
    throw std::invalid_argument("x_point_label: point out of range");
  }
  return x_point + 1;
}

Vertex y_point_label(const PartitionScheme& scheme, int y_point) {
  if (y_point < 0 || y_point >= scheme.y_point_count()) {
    throw std::invalid_argument("y_point_label: point out of range");
  }
  return scheme.x_point_count() + y_point + 1;
}

int x_point_from_label(const PartitionScheme& scheme, Vertex v) {
  if (v >= 1 && v <= scheme.x_point_count()) return v - 1;
  return -1;
}

int y_point_from_label(const PartitionScheme& scheme, Vertex v) {
  if (v > scheme.x_point_count() && v <= scheme.x_point_count() + scheme.y_point_count()) {
    return v - scheme.x_point_count() - 1;
  }
  return -1;
}

PartitionClasses sample_partition_classes(const PartitionScheme& scheme, std::uint64_t seed) {
  Rng rng(seed);
  PartitionClasses pc;
  std::vector<int> xs(static_cast<std::size_t>(scheme.x_point_count()));
  std::iota(xs.begin(), xs.end(), 0);
  rng.shuffle(xs);
  const std::size_t x_class_size = static_cast<std::size_t>(2 * scheme.m);
  for (int j = 0; j < scheme.d; ++j) {
    std::vector<int> cls(xs.begin() + static_cast<std::ptrdiff_t>(j * x_class_size),
                         xs.begin() + static_cast<std::ptrdiff_t>((j + 1) * x_class_size));
    std::sort(cls.begin(), cls.end());
    pc.x_classes.push_back(std::move(cls));
  }
  std::vector<int> ys(static_cast<std::size_t>(scheme.y_point_count()));
  std::iota(ys.begin(), ys.end(), 0);
  rng.shuffle(ys);
  const std::size_t y_class_size = static_cast<std::size_t>(scheme.kappa * scheme.m);
  for (int j = 0; j < scheme.d; ++j) {
    std::vector<int> cls(ys.begin() + static_cast<std::ptrdiff_t>(j * y_class_size),
                         ys.begin() + static_cast<std::ptrdiff_t>((j + 1) * y_class_size));
    std::sort(cls.begin(), cls.end());
    pc.y_classes.push_back(std::move(cls));
  }
  return pc;
}

BipartitePatternGraph generate_class_gamma(const PartitionScheme& scheme,
                                           const PartitionClasses& classes, int j, double p,
                                           std::uint64_t seed) {
  if (j < 1 || j > scheme.d || classes.x_classes.size() != static_cast<std::size_t>(scheme.d) ||
      classes.y_classes.size() != static_cast<std::size_t>(scheme.d)) {
    throw std::invalid_argument("generate_class_gamma: class index or partition shape invalid");
  }
  std::vector<Vertex> s, t;
  for (int x : classes.x_classes[static_cast<std::size_t>(j - 1)]) s.push_back(x_point_label(scheme, x));
  for (int y : classes.y_classes[static_cast<std::size_t>(j - 1)]) t.push_back(y_point_label(scheme, y));
  return generate_gamma_on(std::move(s), std::move(t), scheme.kappa, p, seed);
}

namespace {

struct DecodedEdge {
  std::vector<int> x_points;  // exactly 2
  std::vector<int> y_points;  // exactly kappa
};

DecodedEdge decode_point_edge(const Edge& e, const PartitionScheme& scheme, const char* who) {
  DecodedEdge de;
  for (Vertex v : e) {
    if (int x = x_point_from_label(scheme, v); x >= 0) {
      de.x_points.push_back(x);
    } else if (int y = y_point_from_label(scheme, v); y >= 0) {
      de.y_points.push_back(y);
    } else {
      throw std::invalid_argument(std::string(who) + ": vertex is not a point label");
    }
  }
  if (de.x_points.size() != 2 || de.y_points.size() != static_cast<std::size_t>(scheme.kappa)) {
    throw std::invalid_argument(std::string(who) + ": edge is not 2 X-points + kappa Y-points");
  }
  return de;
}

bool edge_is_spoiled(const DecodedEdge& de, const PartitionScheme& scheme) {
  if (scheme.x_cell_of(de.x_points[0]) == scheme.x_cell_of(de.x_points[1])) return true;
  std::vector<int> cells;
  for (int y : de.y_points) cells.push_back(scheme.y_cell_of(y));
  std::sort(cells.begin(), cells.end());
  return std::adjacent_find(cells.begin(), cells.end()) != cells.end();
}

}  // namespace

bool is_spoiled_edge(const Edge& point_edge, const PartitionScheme& scheme) {
  const DecodedEdge de = decode_point_edge(point_edge, scheme, "is_spoiled_edge");
  return edge_is_spoiled(de, scheme);
}

BipartitePatternGraph build_gamma_hat(const BipartitePatternGraph& point_gamma,
                                      const PartitionScheme& scheme) {
  std::vector<Edge> kept;
  for (const Edge& e : point_gamma.edges) {
    const DecodedEdge de = decode_point_edge(e, scheme, "build_gamma_hat");
    if (!edge_is_spoiled(de, scheme)) kept.push_back(e);
  }
  return BipartitePatternGraph::from_edges(point_gamma.s, point_gamma.t, point_gamma.kappa,
                                           std::move(kept));
}

Edge project_point_edge(const Edge& point_edge, const PartitionScheme& scheme) {
  const DecodedEdge de = decode_point_edge(point_edge, scheme, "project_point_edge");
  if (edge_is_spoiled(de, scheme)) {
    throw std::invalid_argument("project_point_edge: spoiled edge repeats a vertex");
  }
  Edge cell_edge;
  cell_edge.reserve(point_edge.size());
  for (int x : de.x_points) cell_edge.push_back(scheme.x_cell_vertex(scheme.x_cell_of(x)));
  for (int y : de.y_points) cell_edge.push_back(scheme.y_cell_vertex(scheme.y_cell_of(y)));
  std::sort(cell_edge.begin(), cell_edge.end());
  return cell_edge;
}

CopyHierarchy::CopyHierarchy(const PartitionScheme& scheme, std::uint64_t alpha)
    : scheme_(scheme), alpha_(alpha) {
  if (alpha == 0) throw std::invalid_argument("CopyHierarchy: alpha must be positive");
  beta_ = static_cast<std::uint64_t>(scheme.d) * static_cast<std::uint64_t>(scheme.d);
  for (int i = 0; i < scheme.kappa; ++i) beta_ *= static_cast<std::uint64_t>(scheme.d / 2);
}

std::uint64_t CopyHierarchy::copy_tuple_index(const Edge& point_edge) const {
  DecodedEdge de = decode_point_edge(point_edge, scheme_, "copy_tuple_index");
  if (edge_is_spoiled(de, scheme_)) {
    throw std::invalid_argument("copy_tuple_index: spoiled edge has no copy tuple");
  }
  // Order X-points by cell, Y-points by cell; read off copy indices.
  std::sort(de.x_points.begin(), de.x_points.end());  // point order == cell order here
  std::sort(de.y_points.begin(), de.y_points.end());
  std::uint64_t idx = static_cast<std::uint64_t>(scheme_.x_copy_of(de.x_points[0]));
  idx = idx * static_cast<std::uint64_t>(scheme_.d) +
        static_cast<std::uint64_t>(scheme_.x_copy_of(de.x_points[1]));
  for (int y : de.y_points) {
    idx = idx * static_cast<std::uint64_t>(scheme_.d / 2) +
          static_cast<std::uint64_t>(scheme_.y_copy_of(y));
  }
  return idx;
}

void CopyHierarchy::insert(std::uint64_t i, int j, const Edge& point_edge) {
  if (i < 1 || i > alpha_) throw std::invalid_argument("CopyHierarchy::insert: round index out of range");
  if (j < 1 || j > scheme_.d) throw std::invalid_argument("CopyHierarchy::insert: class index out of range");
  const std::uint64_t tuple = copy_tuple_index(point_edge);  // throws on spoiled edges
  copies_[{i, j, tuple}].push_back(project_point_edge(point_edge, scheme_));
}

std::vector<Edge> CopyHierarchy::lambda_copy_edges(std::uint64_t i, int j, std::uint64_t tuple) const {
  auto it = copies_.find({i, j, tuple});
  if (it == copies_.end()) return {};
  return it->second;
}

namespace {

KUniformHypergraph union_of(const PartitionScheme& scheme, std::vector<Edge> edges) {
  return KUniformHypergraph::from_edges(scheme.vertex_count(), scheme.k(), std::move(edges));
}

}  // namespace

KUniformHypergraph CopyHierarchy::class_union(std::uint64_t i, int j) const {
  std::vector<Edge> edges;
  const auto lo = copies_.lower_bound({i, j, 0});
  const auto hi = copies_.upper_bound({i, j, std::numeric_limits<std::uint64_t>::max()});
  for (auto it = lo; it != hi; ++it) {
    edges.insert(edges.end(), it->second.begin(), it->second.end());
  }
  return union_of(scheme_, std::move(edges));
}

KUniformHypergraph CopyHierarchy::round_union(std::uint64_t i) const {
  std::vector<Edge> edges;
  const auto lo = copies_.lower_bound({i, 0, 0});
  const auto hi = copies_.upper_bound({i, std::numeric_limits<int>::max(), 0});
  for (auto it = lo; it != hi; ++it) {
    edges.insert(edges.end(), it->second.begin(), it->second.end());
  }
  return union_of(scheme_, std::move(edges));
}

KUniformHypergraph CopyHierarchy::full_union() const {
  std::vector<Edge> edges;
  for (const auto& [key, copy_edges] : copies_) {
    edges.insert(edges.end(), copy_edges.begin(), copy_edges.end());
  }
  return union_of(scheme_, std::move(edges));
}

std::size_t embed_edges_into_copies(const BipartitePatternGraph& gamma_hat,
                                    const PartitionScheme& scheme, CopyHierarchy& hierarchy,
                                    std::uint64_t i, int j) {
  const PartitionScheme& hs = hierarchy.scheme();
  if (scheme.m != hs.m || scheme.d != hs.d || scheme.kappa != hs.kappa) {
    throw std::invalid_argument("embed_edges_into_copies: scheme mismatch with hierarchy");
  }
  std::size_t filed = 0;
  for (const Edge& e : gamma_hat.edges) {
    hierarchy.insert(i, j, e);  // throws on spoiled edges; Gamma-hat input required
    ++filed;
  }
  return filed;
}

SuccessBound success_probability_bound(int d, int kappa, std::uint64_t alpha) {
  if (d < 2 || kappa < 1) throw std::invalid_argument("success_probability_bound: need d >= 2, kappa >= 1");
  if (alpha == 0) throw std::invalid_argument("success_probability_bound: alpha must be positive");
  SuccessBound b;
  const double kd = static_cast<double>(kappa) * static_cast<double>(d);
  b.per_round_success = std::exp(-kd);
  b.log_failure = static_cast<double>(alpha) * std::log1p(-b.per_round_success);
  b.log_failure_simplified = -std::exp(kd);
  b.success_lower = -std::expm1(b.log_failure);
  return b;
}

}  // namespace loosehc
