#include "loosehc/hypergraph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "loosehc/rng.hpp"

namespace loosehc {

bool next_k_subset(std::vector<int>& idx, int n) {
  const int r = static_cast<int>(idx.size());
  int i = r - 1;
  while (i >= 0 && idx[i] == n - r + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

namespace {

Edge canonical_edge(Edge e, int k, int n, const char* who) {
  if (static_cast<int>(e.size()) != k) {
    throw std::invalid_argument(std::string(who) + ": edge arity != k");
  }
  std::sort(e.begin(), e.end());
  if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
    throw std::invalid_argument(std::string(who) + ": repeated vertex in edge");
  }
  if (e.front() < 1 || e.back() > n) {
    throw std::invalid_argument(std::string(who) + ": vertex out of range");
  }
  return e;
}

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": p must lie in [0, 1]");
  }
}

}  // namespace

KUniformHypergraph KUniformHypergraph::from_edges(int n, int k, std::vector<Edge> edges) {
  if (n < 0) throw std::invalid_argument("from_edges: n must be nonnegative");
  if (k < 2) throw std::invalid_argument("from_edges: k must be at least 2");
  KUniformHypergraph h;
  h.n = n;
  h.k = k;
  h.edges.reserve(edges.size());
  for (auto& e : edges) h.edges.push_back(canonical_edge(std::move(e), k, n, "from_edges"));
  std::sort(h.edges.begin(), h.edges.end());
  h.edges.erase(std::unique(h.edges.begin(), h.edges.end()), h.edges.end());
  return h;
}

bool KUniformHypergraph::contains(const Edge& e) const {
  Edge key = e;
  std::sort(key.begin(), key.end());
  return std::binary_search(edges.begin(), edges.end(), key);
}

std::vector<int> KUniformHypergraph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges) {
    for (Vertex v : e) ++deg[static_cast<std::size_t>(v - 1)];
  }
  return deg;
}

KUniformHypergraph generate_hnpk(int n, int k, double p, std::uint64_t seed) {
  if (k < 3) throw std::invalid_argument("generate_hnpk: k must be at least 3");
  if (n < k) throw std::invalid_argument("generate_hnpk: n must be at least k");
  check_probability(p, "generate_hnpk");
  KUniformHypergraph h;
  h.n = n;
  h.k = k;
  Rng rng(seed);
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  do {
    const double u = rng.next_unit();  // one draw per candidate, kept or not
    if (u < p) {
      Edge e(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) e[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)] + 1;
      h.edges.push_back(std::move(e));
    }
  } while (next_k_subset(idx, n));
  return h;  // lexicographic scan emits edges already sorted
}

bool has_isolated_vertex(const KUniformHypergraph& h) {
  const auto deg = h.degrees();
  return std::any_of(deg.begin(), deg.end(), [](int d) { return d == 0; });
}

bool BipartitePatternGraph::in_s(Vertex v) const {
  return std::binary_search(s.begin(), s.end(), v);
}

bool BipartitePatternGraph::in_t(Vertex v) const {
  return std::binary_search(t.begin(), t.end(), v);
}

bool BipartitePatternGraph::contains(const Edge& e) const {
  Edge key = e;
  std::sort(key.begin(), key.end());
  return std::binary_search(edges.begin(), edges.end(), key);
}

BipartitePatternGraph BipartitePatternGraph::from_edges(std::vector<Vertex> s, std::vector<Vertex> t,
                                                        int kappa, std::vector<Edge> edges) {
  if (kappa < 1) throw std::invalid_argument("BipartitePatternGraph: kappa must be at least 1");
  if (s.size() < 2 || s.size() % 2 != 0 ||
      t.size() * 2 != s.size() * static_cast<std::size_t>(kappa)) {
    throw std::invalid_argument("BipartitePatternGraph: need |S| = 2m and |T| = kappa*m");
  }
  BipartitePatternGraph g;
  g.kappa = kappa;
  g.s = std::move(s);
  g.t = std::move(t);
  std::sort(g.s.begin(), g.s.end());
  std::sort(g.t.begin(), g.t.end());
  if (std::adjacent_find(g.s.begin(), g.s.end()) != g.s.end() ||
      std::adjacent_find(g.t.begin(), g.t.end()) != g.t.end()) {
    throw std::invalid_argument("BipartitePatternGraph: repeated vertex in a class");
  }
  std::vector<Vertex> both;
  std::set_intersection(g.s.begin(), g.s.end(), g.t.begin(), g.t.end(), std::back_inserter(both));
  if (!both.empty()) throw std::invalid_argument("BipartitePatternGraph: classes must be disjoint");
  for (auto& e : edges) {
    if (static_cast<int>(e.size()) != kappa + 2) {
      throw std::invalid_argument("BipartitePatternGraph: edge arity != kappa + 2");
    }
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
      throw std::invalid_argument("BipartitePatternGraph: repeated vertex in edge");
    }
    int in_s_count = 0;
    for (Vertex v : e) {
      if (g.in_s(v)) {
        ++in_s_count;
      } else if (!g.in_t(v)) {
        throw std::invalid_argument("BipartitePatternGraph: edge vertex outside S and T");
      }
    }
    if (in_s_count != 2) {
      throw std::invalid_argument("BipartitePatternGraph: edge must have exactly 2 vertices in S");
    }
    g.edges.push_back(std::move(e));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

BipartitePatternGraph generate_gamma_on(std::vector<Vertex> s, std::vector<Vertex> t,
                                        int kappa, double p, std::uint64_t seed) {
  if (kappa < 1) throw std::invalid_argument("generate_gamma_on: kappa must be at least 1");
  check_probability(p, "generate_gamma_on");
  BipartitePatternGraph g = BipartitePatternGraph::from_edges(std::move(s), std::move(t), kappa, {});
  const int ns = static_cast<int>(g.s.size());
  const int nt = static_cast<int>(g.t.size());
  if (ns < 2 || nt < kappa) return g;
  Rng rng(seed);
  std::vector<int> tidx(static_cast<std::size_t>(kappa));
  for (int i = 0; i < ns; ++i) {
    for (int j = i + 1; j < ns; ++j) {
      for (int c = 0; c < kappa; ++c) tidx[static_cast<std::size_t>(c)] = c;
      do {
        const double u = rng.next_unit();
        if (u < p) {
          Edge e;
          e.reserve(static_cast<std::size_t>(kappa) + 2);
          e.push_back(g.s[static_cast<std::size_t>(i)]);
          e.push_back(g.s[static_cast<std::size_t>(j)]);
          for (int c : tidx) e.push_back(g.t[static_cast<std::size_t>(c)]);
          std::sort(e.begin(), e.end());
          g.edges.push_back(std::move(e));
        }
      } while (next_k_subset(tidx, nt));
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

BipartitePatternGraph generate_gamma(int m, int k, double p, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("generate_gamma: m must be positive");
  if (k < 3) throw std::invalid_argument("generate_gamma: k must be at least 3");
  const int kappa = k - 2;
  std::vector<Vertex> s, t;
  for (int v = 1; v <= 2 * m; ++v) s.push_back(v);
  for (int v = 2 * m + 1; v <= 2 * m + kappa * m; ++v) t.push_back(v);
  return generate_gamma_on(std::move(s), std::move(t), kappa, p, seed);
}

}  // namespace loosehc
