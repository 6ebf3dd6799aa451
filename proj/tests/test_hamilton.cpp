#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "loosehc/analysis.hpp"
#include "loosehc/configuration.hpp"
#include "loosehc/hamilton.hpp"
#include "loosehc/hypergraph.hpp"
#include "loosehc/rng.hpp"

using loosehc::brute_force_N_b;
using loosehc::brute_force_overlap_table;
using loosehc::count_loose_hamilton;
using loosehc::count_restricted_H;
using loosehc::Edge;
using loosehc::find_loose_hamilton;
using loosehc::generate_hnpk;
using loosehc::has_restricted_cycle;
using loosehc::KUniformHypergraph;
using loosehc::LambdaSample;
using loosehc::LooseCycle;
using loosehc::OverlapTable;
using loosehc::sample_lambda_d;

namespace {

// Validates that `cycle` is a loose Hamilton cycle of h.
void check_cycle(const KUniformHypergraph& h, const LooseCycle& cycle) {
  REQUIRE_EQ(cycle.order.size(), static_cast<std::size_t>(h.n));
  std::vector<int> sorted = cycle.order;
  std::sort(sorted.begin(), sorted.end());
  for (int v = 1; v <= h.n; ++v) CHECK_EQ(sorted[static_cast<std::size_t>(v - 1)], v);
  REQUIRE_EQ(cycle.edge_list.size(), static_cast<std::size_t>(h.n / (h.k - 1)));
  for (const Edge& e : cycle.edge_list) CHECK(h.contains(e));
  // Consecutive edges share exactly one vertex.
  const std::size_t ne = cycle.edge_list.size();
  for (std::size_t i = 0; i < ne; ++i) {
    Edge a = cycle.edge_list[i];
    Edge b = cycle.edge_list[(i + 1) % ne];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<int> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    if (ne > 2) CHECK_EQ(inter.size(), 1);
  }
}

}  // namespace

TEST_SUITE("hamilton") {
  TEST_CASE("complete hypergraphs contain a cycle") {
    const KUniformHypergraph h = generate_hnpk(8, 3, 1.0, 1);
    const std::optional<LooseCycle> c = find_loose_hamilton(h);
    REQUIRE(c.has_value());
    check_cycle(h, *c);
    CHECK(count_loose_hamilton(h) > 0);
  }

  TEST_CASE("empty hypergraphs contain none") {
    const KUniformHypergraph h = KUniformHypergraph::from_edges(8, 3, {});
    CHECK_FALSE(find_loose_hamilton(h).has_value());
    CHECK_EQ(count_loose_hamilton(h), 0);
  }

  TEST_CASE("a lone cycle is found and counted once") {
    const KUniformHypergraph h =
        KUniformHypergraph::from_edges(8, 3, {{1, 2, 3}, {3, 4, 5}, {5, 6, 7}, {7, 8, 1}});
    const std::optional<LooseCycle> c = find_loose_hamilton(h);
    REQUIRE(c.has_value());
    check_cycle(h, *c);
    CHECK_EQ(count_loose_hamilton(h), 1);
  }

  TEST_CASE("two-edge cycles on n = 2(k-1) follow the seam convention") {
    // Each cyclic order of K_4^(3) admits two edge layouts; 3 orders, 6
    // cycles total.
    CHECK_EQ(count_loose_hamilton(generate_hnpk(4, 3, 1.0, 1)), 6);
    // k=4, n=6: the degenerate case still finds a cycle in the complete
    // hypergraph.
    CHECK(find_loose_hamilton(generate_hnpk(6, 4, 1.0, 1)).has_value());
  }

  TEST_CASE("divisibility and size preconditions") {
    CHECK_THROWS_AS(find_loose_hamilton(KUniformHypergraph::from_edges(9, 3, {})),
                    std::invalid_argument);
    CHECK_THROWS_AS(count_loose_hamilton(KUniformHypergraph::from_edges(7, 3, {})),
                    std::invalid_argument);
  }

  TEST_CASE("find and count agree on 200 random instances") {
    // Densities chosen per n so exact counting stays cheap at n=12.
    const std::vector<std::pair<int, std::vector<double>>> grid{
        {8, {0.05, 0.1, 0.2, 0.3, 0.5}},
        {10, {0.05, 0.1, 0.2, 0.3, 0.5}},
        {12, {0.02, 0.05, 0.1, 0.15, 0.2}},
    };
    int found_total = 0;
    int checked = 0;
    for (const auto& [n, ps] : grid) {
      for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        for (std::uint64_t rep = 0; rep < 14; ++rep) {
          const KUniformHypergraph h =
              generate_hnpk(n, 3, ps[pi],
                            loosehc::derive_seed(1000 + static_cast<std::uint64_t>(n),
                                                 100 * rep + static_cast<std::uint64_t>(pi)));
          const bool found = find_loose_hamilton(h).has_value();
          const std::uint64_t count = count_loose_hamilton(h);
          CHECK_EQ(found, count >= 1);
          found_total += found ? 1 : 0;
          ++checked;
        }
      }
    }
    CHECK_EQ(checked, 210);
    CHECK(found_total > 0);        // some dense instances succeed
    CHECK(found_total < checked);  // some sparse instances fail
  }

  TEST_CASE("adding edges never decreases the count") {
    const KUniformHypergraph h = generate_hnpk(8, 3, 0.3, 99);
    const std::uint64_t before = count_loose_hamilton(h);
    std::vector<Edge> extended = h.edges;
    extended.push_back({1, 2, 3});
    extended.push_back({4, 5, 6});
    extended.push_back({2, 5, 8});
    const KUniformHypergraph bigger = KUniformHypergraph::from_edges(8, 3, extended);
    CHECK(count_loose_hamilton(bigger) >= before);
  }

  TEST_CASE("restricted cycles on labelled edges") {
    // m=2, kappa=1: X = {1..4}, Y = {5..8}.
    const std::vector<Edge> cycle_edges{{1, 2, 5}, {2, 3, 6}, {3, 4, 7}, {1, 4, 8}};
    CHECK_EQ(count_restricted_H(cycle_edges, 2, 1), 1);
    CHECK(has_restricted_cycle(cycle_edges, 2, 1));

    // Dropping one edge leaves an X-vertex with degree 1.
    const std::vector<Edge> broken{{1, 2, 5}, {2, 3, 6}, {3, 4, 7}};
    CHECK_EQ(count_restricted_H(broken, 2, 1), 0);
    CHECK_FALSE(has_restricted_cycle(broken, 2, 1));

    CHECK_EQ(count_restricted_H({}, 2, 1), 0);
  }

  TEST_CASE("restricted counting rejects mislabeled edges") {
    CHECK_THROWS_AS(count_restricted_H({{1, 2, 3}}, 2, 1), std::invalid_argument);  // 3 X labels
    CHECK_THROWS_AS(count_restricted_H({{1, 5, 6}}, 2, 1), std::invalid_argument);  // 1 X label
    CHECK_THROWS_AS(count_restricted_H({{0, 1, 5}}, 2, 1), std::invalid_argument);  // out of range
  }

  TEST_CASE("complete restricted pattern count at m=2 kappa=1") {
    // All edges {x, x', y}: 3 Hamilton cycles on 4 X-labels times 4! ways to
    // assign the Y-singletons to the 4 edge slots.
    std::vector<Edge> all;
    for (int x1 = 1; x1 <= 4; ++x1) {
      for (int x2 = x1 + 1; x2 <= 4; ++x2) {
        for (int y = 5; y <= 8; ++y) all.push_back({x1, x2, y});
      }
    }
    CHECK_EQ(count_restricted_H(all, 2, 1), 72);
  }

  TEST_CASE("lambda samples: restricted and unrestricted detection coincide") {
    // On lambda outputs every loose Hamilton cycle automatically respects
    // the X/Y label pattern, so the two detectors must agree.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const LambdaSample s = sample_lambda_d(2, 4, 1, loosehc::derive_seed(88, seed));
      const bool restricted = has_restricted_cycle(s.hypergraph.edges, 2, 1);
      const bool loose = find_loose_hamilton(s.hypergraph).has_value();
      CHECK_EQ(restricted, loose);
    }
  }

  TEST_CASE("overlap census: frozen tables and partition identities") {
    const OverlapTable t34 = brute_force_overlap_table(2, 3);
    REQUIRE_EQ(t34.compatible.size(), 5);
    CHECK_EQ(t34.compatible[0], 0);
    CHECK_EQ(t34.compatible[1], 0);
    CHECK_EQ(t34.compatible[2], 4);
    CHECK_EQ(t34.compatible[3], 4);

    const OverlapTable t44 = brute_force_overlap_table(2, 4);
    CHECK_EQ(t44.compatible[0], 48);
    CHECK_EQ(t44.compatible[1], 128);
    CHECK_EQ(t44.compatible[2], 96);
    CHECK_EQ(t44.compatible[3], 16);

    // Raw overlaps partition all cycles; the b=2m class is the base cycle.
    for (int d : {3, 4}) {
      const OverlapTable t = brute_force_overlap_table(2, d);
      std::uint64_t raw_sum = 0;
      for (std::uint64_t c : t.raw_overlap) raw_sum += c;
      CHECK_EQ(loosehc::analysis::BigInt(raw_sum), loosehc::analysis::a_2m(2, d));
      CHECK_EQ(t.raw_overlap[4], 1);
      // Compatibility only prunes, never adds.
      for (std::size_t b = 0; b < t.compatible.size(); ++b) {
        CHECK(t.compatible[b] <= t.raw_overlap[b]);
      }
    }

    const OverlapTable t13 = brute_force_overlap_table(1, 3);
    std::uint64_t raw13 = 0;
    for (std::uint64_t c : t13.raw_overlap) raw13 += c;
    CHECK_EQ(raw13, 18);  // a_2m(1,3)

    CHECK_EQ(brute_force_N_b(2, 4, 1), 128);
    CHECK_THROWS_AS(brute_force_overlap_table(3, 4), std::invalid_argument);  // 24 points
  }
}
