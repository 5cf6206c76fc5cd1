#pragma once

#include <cstdint>
#include <string_view>

namespace hboot {

// All randomness in the library flows through one fixed, seedable,
// platform-independent generator: xoshiro256** (Blackman & Vigna), seeded
// through the splitmix64 mixer. Independent substreams are derived by
// hashing (master seed, stream index) with mix_seed, so parallel code can
// hand each task its own generator and stay deterministic regardless of
// scheduling.

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a stream seed from (master, stream). Bijective in `stream` for a
// fixed master, so distinct substream indices never collide.
inline constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t state = master;
  splitmix64_next(state);
  state ^= stream;
  return splitmix64_next(state);
}

// FNV-1a, used to fold opaque string ids (field names) into stream seeds.
inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  constexpr Xoshiro256ss(std::uint64_t master, std::uint64_t stream)
      : Xoshiro256ss(mix_seed(master, stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  constexpr result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

// Uniform draw from {0, ..., bound-1} by rejection sampling; every value is
// exactly equally likely (no modulo bias).
inline constexpr std::uint64_t uniform_below(Xoshiro256ss& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace hboot
