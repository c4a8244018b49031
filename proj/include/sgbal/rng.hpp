#pragma once

#include <cstdint>
#include <vector>

namespace sgbal {

// Counter-based deterministic generator. A stream is fully determined by
// (seed, stream): the initial state is a double splitmix64 finalizer over
// both values, and next() advances the state by the 64-bit golden gamma and
// finalizes it. Identical (seed, stream) pairs always replay the same
// sequence on every platform, which is what the golden tests pin down.
// Distinct stream ids (e.g. one per sampling iteration) give statistically
// independent sequences.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ mix(stream + kGamma))) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Unbiased integer in [0, bound) via Lemire's multiply-shift rejection.
  std::uint32_t next_below(std::uint32_t bound) {
    std::uint64_t x = next_u64() >> 32;
    std::uint64_t m = x * bound;
    std::uint32_t l = static_cast<std::uint32_t>(m);
    if (l < bound) {
      std::uint32_t t = (0u - bound) % bound;
      while (l < t) {
        x = next_u64() >> 32;
        m = x * bound;
        l = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [-1, 1).
  double next_signed_unit() { return 2.0 * next_double() - 1.0; }

  bool next_bit() { return (next_u64() & 1u) != 0; }

  // Fisher-Yates shuffle, draw order fixed by the stream.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_below(static_cast<std::uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace sgbal
