#pragma once

#include <cstdint>

namespace opspread {

// SplitMix64 (Steele/Lea/Flood 2014). Chosen as the project-wide generator
// because it is a pure function of a 64-bit counter: streams can be split by
// key without coordination and every draw is reproducible across platforms.
// The name/version recorded in run manifests is "splitmix64/1".
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [-half_width, half_width)
  double uniform_symmetric(double half_width) {
    return half_width * (2.0 * uniform() - 1.0);
  }

  // unbiased integer in [0, n) by rejection
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  static constexpr const char* kName = "splitmix64/1";

  // derived stream for worker `key` (shot batches, sub-samplers)
  static std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t key) {
    Rng mixer(seed ^ (0xA0761D6478BD642FULL * (key + 1)));
    return mixer.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace opspread
