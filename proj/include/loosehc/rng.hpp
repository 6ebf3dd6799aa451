// Counter-based pseudo-random generator with explicit seed derivation.
//
// Every randomized routine in this library takes a 64-bit seed and owns a
// private Rng; nothing reads global state.  Substreams are derived with
// derive_seed(seed, stream), so experiments can hand out independent,
// reproducible per-trial generators regardless of thread scheduling.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace loosehc {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stafford's "mix13" finalizer: a bijective scramble of 64-bit integers with
// good avalanche behaviour.  This is the whole cryptography-free core of the
// generator: output i of seed s is mix64(s + (i+1)*kGolden).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministically derives the seed of substream `stream` from `seed`.
// Defined as mix64(seed ^ (mix64(stream + kGolden) + kGolden)); the inner mix
// decorrelates small consecutive stream indices before they touch the seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ (mix64(stream + kGolden) + kGolden));
}

// Splittable counter generator (SplitMix64 family).  State is a fixed key
// plus an incrementing counter, so jumping ahead and splitting are trivial
// and two generators with different keys never share a sequence by accident.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

  // Uniform double in [0, 1): top 53 bits scaled by 2^-53.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::next_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Fisher-Yates shuffle driven by next_below.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_below(i)]);
    }
  }

  std::uint64_t seed() const { return key_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace loosehc
