#pragma once

// Counter-based random streams.
//
// Each draw is mix64(key + counter * golden) where mix64 is the SplitMix64
// finalizer and key is derived from (seed, stream id). A stream therefore
// depends only on the seed and its own id: adding or removing draws on one
// stream never perturbs another. Integer and real conversions are written out
// here rather than taken from <random> so outputs are identical on every
// standard library.

#include <cstdint>
#include <string_view>

namespace dran {

namespace rng_detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// FNV-1a, used to turn stream names into ids at compile time.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace rng_detail

// Named sub-streams used by the simulator.
namespace streams {
inline constexpr std::uint64_t kTopology = rng_detail::fnv1a("topology");
inline constexpr std::uint64_t kTraffic = rng_detail::fnv1a("traffic");
inline constexpr std::uint64_t kMobility = rng_detail::fnv1a("mobility");
inline constexpr std::uint64_t kExploration = rng_detail::fnv1a("exploration");
inline constexpr std::uint64_t kReplay = rng_detail::fnv1a("replay");
inline constexpr std::uint64_t kNetworkInit = rng_detail::fnv1a("network-init");
}  // namespace streams

class RngStream {
 public:
  constexpr RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(rng_detail::mix64(seed ^ rng_detail::mix64(stream_id + rng_detail::kGolden))) {}

  constexpr std::uint64_t next_u64() {
    return rng_detail::mix64(key_ + (++counter_) * rng_detail::kGolden);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  constexpr double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n) (Lemire's multiply-and-reject). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  constexpr bool bernoulli(double p) { return uniform() < p; }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dran
