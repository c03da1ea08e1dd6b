#pragma once

#include <cstdint>

namespace tsvft {

// splitmix64 (Vigna's public-domain generator). Chosen because the whole
// algorithm fits in four lines, so seeded runs reproduce bit-exactly on any
// platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Range reduction via 128-bit multiply-shift. Bias is below 2^-64 per
  // draw, which is irrelevant here; what matters is determinism.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed, e.g. one per Monte-Carlo shard.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(seed ^ ((stream + 1) * 0x9e3779b97f4a7c15ULL)).next();
}

}  // namespace tsvft
