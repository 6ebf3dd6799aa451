#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "loosehc/hypergraph.hpp"
#include "loosehc/matching.hpp"
#include "loosehc/rng.hpp"
#include "loosehc/stats.hpp"

using loosehc::BipartitePatternGraph;
using loosehc::count_perfect_matchings;
using loosehc::Edge;
using loosehc::enumerate_perfect_matchings;
using loosehc::find_perfect_matching;
using loosehc::generate_gamma;
using loosehc::is_perfect_matching;
using loosehc::MatchingResult;
using loosehc::MatchingStatus;
using loosehc::PatternMatching;
using loosehc::sample_uniform_matching;

TEST_SUITE("matching") {
  TEST_CASE("complete patterns always contain a matching") {
    const BipartitePatternGraph g = generate_gamma(3, 3, 1.0, 1);
    const MatchingResult r = find_perfect_matching(g);
    REQUIRE_EQ(r.status, MatchingStatus::kFound);
    CHECK(is_perfect_matching(g, r.matching));
    CHECK_EQ(r.matching.blocks.size(), 3);
  }

  TEST_CASE("matching counts on complete patterns") {
    // m=2, k=3: 3 pairings of S times 2 T-assignments.
    CHECK_EQ(count_perfect_matchings(generate_gamma(2, 3, 1.0, 1)), 6);
    // m=2, k=4: 3 pairings of S times C(4,2) splits of T.
    CHECK_EQ(count_perfect_matchings(generate_gamma(2, 4, 1.0, 1)), 18);
    // m=3, k=3: 15 pairings of S times 3! T-assignments.
    CHECK_EQ(count_perfect_matchings(generate_gamma(3, 3, 1.0, 1)), 90);
  }

  TEST_CASE("edgeless patterns are exhausted, not budget-limited") {
    const BipartitePatternGraph g = BipartitePatternGraph::from_edges({1, 2, 3, 4}, {5, 6}, 1, {});
    const MatchingResult r = find_perfect_matching(g);
    CHECK_EQ(r.status, MatchingStatus::kExhausted);
    CHECK_EQ(count_perfect_matchings(g), 0);
  }

  TEST_CASE("a shared T-vertex blocks every matching and exhausts") {
    // All edges consume T-vertex 5, but two blocks both need a T-vertex.
    const BipartitePatternGraph g = BipartitePatternGraph::from_edges(
        {1, 2, 3, 4}, {5, 6}, 1, {{1, 2, 5}, {3, 4, 5}, {1, 3, 5}, {2, 4, 5}});
    const MatchingResult r = find_perfect_matching(g);
    CHECK_EQ(r.status, MatchingStatus::kExhausted);
    CHECK_EQ(count_perfect_matchings(g), 0);
  }

  TEST_CASE("tiny budgets report kBudgetExceeded") {
    const BipartitePatternGraph g = generate_gamma(5, 3, 1.0, 2);
    const MatchingResult r = find_perfect_matching(g, 1);
    CHECK_EQ(r.status, MatchingStatus::kBudgetExceeded);
    const MatchingResult ok = find_perfect_matching(g, 1000000);
    CHECK_EQ(ok.status, MatchingStatus::kFound);
  }

  TEST_CASE("find and count agree on random instances") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const BipartitePatternGraph g = generate_gamma(3, 3, 0.35, loosehc::derive_seed(614, seed));
      const MatchingResult r = find_perfect_matching(g);
      const std::uint64_t count = count_perfect_matchings(g);
      CHECK_EQ(r.status == MatchingStatus::kFound, count >= 1);
      if (r.status == MatchingStatus::kFound) CHECK(is_perfect_matching(g, r.matching));
    }
  }

  TEST_CASE("dense random instances almost always match") {
    // |S|+|T| = 60 vertices at a comfortably supercritical density.
    const int n_prime = 60;
    const double p = 20.0 * std::log(n_prime) / (n_prime * n_prime);
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const BipartitePatternGraph g = generate_gamma(20, 3, p, loosehc::derive_seed(777, seed));
      if (find_perfect_matching(g).status == MatchingStatus::kFound) ++successes;
    }
    CHECK(successes >= 95);
  }

  TEST_CASE("enumeration is canonical, distinct and stoppable") {
    const BipartitePatternGraph g = generate_gamma(2, 3, 1.0, 1);
    std::vector<PatternMatching> all;
    const std::uint64_t n = enumerate_perfect_matchings(g, [&](const PatternMatching& pm) {
      all.push_back(pm);
      return true;
    });
    CHECK_EQ(n, 6);
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(is_perfect_matching(g, all[i]));
      for (std::size_t j = i + 1; j < all.size(); ++j) CHECK_NE(all[i].blocks, all[j].blocks);
    }
    std::uint64_t seen = 0;
    const std::uint64_t stopped = enumerate_perfect_matchings(g, [&](const PatternMatching&) {
      return ++seen < 2;
    });
    CHECK_EQ(stopped, 2);
  }

  TEST_CASE("count cap throws once exceeded") {
    const BipartitePatternGraph g = generate_gamma(3, 3, 1.0, 1);
    CHECK_THROWS_AS(count_perfect_matchings(g, 10), std::runtime_error);
    CHECK_EQ(count_perfect_matchings(g, 90), 90);
  }

  TEST_CASE("uniform sampling finds the unique matching") {
    const BipartitePatternGraph g = BipartitePatternGraph::from_edges(
        {1, 2, 3, 4}, {5, 6}, 1, {{1, 2, 5}, {3, 4, 6}, {1, 3, 5}});
    // Only {1,2,5} + {3,4,6} covers everything.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const PatternMatching pm = sample_uniform_matching(g, seed);
      CHECK_EQ(pm.blocks, std::vector<Edge>{{1, 2, 5}, {3, 4, 6}});
    }
  }

  TEST_CASE("uniform sampling is uniform on the complete m=2 pattern") {
    const BipartitePatternGraph g = generate_gamma(2, 3, 1.0, 1);
    std::map<std::vector<Edge>, long> counts;
    const long trials = 50000;
    for (long t = 0; t < trials; ++t) {
      counts[sample_uniform_matching(g, loosehc::derive_seed(4242, static_cast<std::uint64_t>(t)))
                 .blocks]++;
    }
    REQUIRE_EQ(counts.size(), 6);
    const double expected = trials / 6.0;
    double stat = 0.0;
    for (const auto& [blocks, c] : counts) {
      stat += (c - expected) * (c - expected) / expected;
    }
    CHECK(loosehc::chi_square_sf(stat, 5) > 0.01);
  }

  TEST_CASE("uniform sampling error cases") {
    const BipartitePatternGraph empty =
        BipartitePatternGraph::from_edges({1, 2, 3, 4}, {5, 6}, 1, {});
    CHECK_THROWS_AS(sample_uniform_matching(empty, 1), std::runtime_error);
    const BipartitePatternGraph big = generate_gamma(3, 3, 1.0, 1);
    CHECK_THROWS_AS(sample_uniform_matching(big, 1, 10), std::runtime_error);
  }

  TEST_CASE("is_perfect_matching rejects near misses") {
    const BipartitePatternGraph g = generate_gamma(2, 3, 1.0, 1);
    PatternMatching pm;
    pm.blocks = {{1, 2, 5}, {3, 4, 6}};
    CHECK(is_perfect_matching(g, pm));
    PatternMatching overlap;
    overlap.blocks = {{1, 2, 5}, {2, 3, 6}};  // vertex 2 reused, 4 uncovered
    CHECK_FALSE(is_perfect_matching(g, overlap));
    PatternMatching wrong_size;
    wrong_size.blocks = {{1, 2, 5}};
    CHECK_FALSE(is_perfect_matching(g, wrong_size));
    PatternMatching not_an_edge;
    not_an_edge.blocks = {{1, 2, 6}, {3, 4, 5}};
    CHECK(g.contains({1, 2, 6}));  // complete graph: it is an edge; swap T use
    CHECK(is_perfect_matching(g, not_an_edge));
  }

  TEST_CASE("search validates class sizes") {
    BipartitePatternGraph bad;
    bad.s = {1, 2, 3};  // odd |S|
    bad.t = {4};
    bad.kappa = 1;
    CHECK_THROWS_AS(find_perfect_matching(bad), std::invalid_argument);
  }
}
