#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "loosehc/rng.hpp"

using loosehc::derive_seed;
using loosehc::mix64;
using loosehc::Rng;

TEST_SUITE("rng") {
  TEST_CASE("same seed reproduces the same stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 64; ++i) CHECK_EQ(a.next_u64(), b.next_u64());
    CHECK_EQ(a.draws(), 64);
    CHECK_EQ(a.seed(), 42);
  }

  TEST_CASE("different seeds give different streams") {
    Rng a(1), b(2);
    int differing = 0;
    for (int i = 0; i < 16; ++i) {
      if (a.next_u64() != b.next_u64()) ++differing;
    }
    CHECK_EQ(differing, 16);
  }

  TEST_CASE("mix64 is injective on a sample range") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t z = 0; z < 4096; ++z) seen.insert(mix64(z));
    CHECK_EQ(seen.size(), 4096);
  }

  TEST_CASE("next_unit lies in [0,1) with a sane mean") {
    Rng rng(7);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double u = rng.next_unit();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    // sd of the mean is ~0.0020; 0.02 is a 10-sigma guard band.
    CHECK(std::fabs(sum / n - 0.5) < 0.02);
  }

  TEST_CASE("next_below stays in range and hits every residue") {
    Rng rng(11);
    std::vector<int> counts(10, 0);
    for (int i = 0; i < 5000; ++i) {
      const std::uint64_t v = rng.next_below(10);
      REQUIRE(v < 10);
      ++counts[static_cast<std::size_t>(v)];
    }
    for (int c : counts) CHECK(c > 300);
  }

  TEST_CASE("next_below rejects zero bound") {
    Rng rng(3);
    CHECK_THROWS_AS(rng.next_below(0), std::invalid_argument);
  }

  TEST_CASE("shuffle permutes and is seed-deterministic") {
    std::vector<int> v(20);
    for (int i = 0; i < 20; ++i) v[static_cast<std::size_t>(i)] = i;
    std::vector<int> w = v;
    Rng a(99), b(99);
    a.shuffle(v);
    b.shuffle(w);
    CHECK_EQ(v, w);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) CHECK_EQ(sorted[static_cast<std::size_t>(i)], i);
  }

  TEST_CASE("derive_seed decorrelates streams deterministically") {
    CHECK_EQ(derive_seed(123, 0), derive_seed(123, 0));
    CHECK_NE(derive_seed(123, 0), derive_seed(123, 1));
    CHECK_NE(derive_seed(123, 5), derive_seed(124, 5));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(2024, i));
    CHECK_EQ(seen.size(), 1000);
  }
}
