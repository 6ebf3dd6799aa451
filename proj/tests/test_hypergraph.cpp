#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "loosehc/hypergraph.hpp"
#include "loosehc/rng.hpp"

using loosehc::BipartitePatternGraph;
using loosehc::Edge;
using loosehc::generate_gamma;
using loosehc::generate_gamma_on;
using loosehc::generate_hnpk;
using loosehc::has_isolated_vertex;
using loosehc::KUniformHypergraph;

TEST_SUITE("hypergraph") {
  TEST_CASE("from_edges canonicalizes and deduplicates") {
    const KUniformHypergraph h =
        KUniformHypergraph::from_edges(6, 3, {{3, 1, 2}, {1, 2, 3}, {4, 5, 6}});
    CHECK_EQ(h.edge_count(), 2);
    CHECK_EQ(h.edges[0], Edge{1, 2, 3});
    CHECK_EQ(h.edges[1], Edge{4, 5, 6});
    CHECK(h.contains({2, 3, 1}));
    CHECK_FALSE(h.contains({1, 2, 4}));
  }

  TEST_CASE("from_edges rejects malformed edges") {
    CHECK_THROWS_AS(KUniformHypergraph::from_edges(6, 3, {{1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(KUniformHypergraph::from_edges(6, 3, {{1, 2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(KUniformHypergraph::from_edges(6, 3, {{1, 2, 7}}), std::invalid_argument);
    CHECK_THROWS_AS(KUniformHypergraph::from_edges(6, 3, {{0, 1, 2}}), std::invalid_argument);
  }

  TEST_CASE("degrees counts incidences") {
    const KUniformHypergraph h = KUniformHypergraph::from_edges(4, 3, {{1, 2, 3}, {1, 2, 4}});
    CHECK_EQ(h.degrees(), std::vector<int>{2, 2, 1, 1});
  }

  TEST_CASE("generate_hnpk extremes") {
    CHECK_EQ(generate_hnpk(6, 3, 0.0, 5).edge_count(), 0);
    CHECK_EQ(generate_hnpk(6, 3, 1.0, 5).edge_count(), 20);  // C(6,3)
  }

  TEST_CASE("generate_hnpk validates arguments") {
    CHECK_THROWS_AS(generate_hnpk(2, 3, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_hnpk(6, 3, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_hnpk(6, 3, 1.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_hnpk(6, 2, 0.5, 1), std::invalid_argument);
  }

  TEST_CASE("generate_hnpk is deterministic in the seed") {
    const KUniformHypergraph a = generate_hnpk(10, 3, 0.3, 77);
    const KUniformHypergraph b = generate_hnpk(10, 3, 0.3, 77);
    CHECK_EQ(a.edges, b.edges);
    const KUniformHypergraph c = generate_hnpk(10, 3, 0.3, 78);
    CHECK_NE(a.edges, c.edges);
  }

  TEST_CASE("generate_hnpk mean edge count matches the binomial expectation") {
    // n=12, k=3, p=0.3: mean C(12,3) * 0.3 = 66, per-draw sd sqrt(220*0.21).
    const int trials = 10000;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
      total += static_cast<double>(
          generate_hnpk(12, 3, 0.3, loosehc::derive_seed(606, static_cast<std::uint64_t>(t)))
              .edge_count());
    }
    const double mean = total / trials;
    const double sigma_mean = std::sqrt(220.0 * 0.3 * 0.7 / trials);
    CHECK(std::fabs(mean - 66.0) < 4.0 * sigma_mean);
  }

  TEST_CASE("fixed edge indicator is Bernoulli(p)") {
    const int trials = 10000;
    const double p = 0.2;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
      if (generate_hnpk(8, 3, p, loosehc::derive_seed(17, static_cast<std::uint64_t>(t)))
              .contains({1, 2, 3})) {
        ++hits;
      }
    }
    const double freq = static_cast<double>(hits) / trials;
    CHECK(std::fabs(freq - p) < 4.0 * std::sqrt(p * (1.0 - p) / trials));
  }

  TEST_CASE("has_isolated_vertex") {
    CHECK(has_isolated_vertex(KUniformHypergraph::from_edges(5, 3, {})));
    CHECK_FALSE(has_isolated_vertex(generate_hnpk(6, 3, 1.0, 1)));
    CHECK(has_isolated_vertex(KUniformHypergraph::from_edges(4, 3, {{1, 2, 3}})));
  }

  TEST_CASE("generate_gamma complete patterns") {
    // m=2, k=3: C(4,2)*C(2,1) = 12 candidate edges.
    const BipartitePatternGraph g = generate_gamma(2, 3, 1.0, 1);
    CHECK_EQ(g.edges.size(), 12);
    CHECK_EQ(g.s, std::vector<loosehc::Vertex>{1, 2, 3, 4});
    CHECK_EQ(g.t, std::vector<loosehc::Vertex>{5, 6});
    CHECK_EQ(g.m(), 2);
    CHECK_EQ(g.k(), 3);
    // m=1, k=4: C(2,2)*C(2,2) = 1 candidate edge.
    CHECK_EQ(generate_gamma(1, 4, 1.0, 1).edges.size(), 1);
  }

  TEST_CASE("generate_gamma edges always split 2-from-S / kappa-from-T") {
    const BipartitePatternGraph g = generate_gamma(3, 4, 0.6, 909);
    for (const Edge& e : g.edges) {
      int in_s = 0, in_t = 0;
      for (loosehc::Vertex v : e) {
        if (g.in_s(v)) ++in_s;
        if (g.in_t(v)) ++in_t;
      }
      CHECK_EQ(in_s, 2);
      CHECK_EQ(in_t, g.kappa);
    }
  }

  TEST_CASE("generate_gamma mean edge count matches the binomial expectation") {
    // m=3, k=3, p=0.5: mean C(6,2)*C(3,1)*0.5 = 22.5.
    const int trials = 5000;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
      total += static_cast<double>(
          generate_gamma(3, 3, 0.5, loosehc::derive_seed(33, static_cast<std::uint64_t>(t)))
              .edges.size());
    }
    const double mean = total / trials;
    const double sigma_mean = std::sqrt(45.0 * 0.25 / trials);
    CHECK(std::fabs(mean - 22.5) < 4.0 * sigma_mean);
  }

  TEST_CASE("generate_gamma_on keeps custom labels") {
    const BipartitePatternGraph g = generate_gamma_on({10, 20, 30, 40}, {50, 60}, 1, 1.0, 2);
    CHECK_EQ(g.edges.size(), 12);
    for (const Edge& e : g.edges) {
      for (loosehc::Vertex v : e) CHECK((g.in_s(v) || g.in_t(v)));
    }
  }

  TEST_CASE("generate_gamma validates arguments") {
    CHECK_THROWS_AS(generate_gamma(0, 3, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_gamma(2, 2, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_gamma(2, 3, 1.5, 1), std::invalid_argument);
  }

  TEST_CASE("pattern graph from_edges validates class structure") {
    CHECK_THROWS_AS(BipartitePatternGraph::from_edges({1, 2, 3}, {4}, 1, {}),
                    std::invalid_argument);  // |S| odd
    CHECK_THROWS_AS(BipartitePatternGraph::from_edges({1, 2, 3, 4}, {5, 6}, 1, {{1, 2, 3}}),
                    std::invalid_argument);  // edge has 3 S-vertices
  }
}
