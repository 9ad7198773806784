#pragma once

#include <cstdint>
#include <vector>

namespace cfrsense::rng {

// Counter-based generator built on the splitmix64 finalizer. Every value is
// a pure function of (seed, stream, counter), so any word of any stream can
// be produced independently and in parallel. The mapping is part of the
// on-disk reproducibility contract and must not change between versions.

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Key for one named stream of a seed.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed + kGamma) ^ mix64(stream + 2 * kGamma));
}

// i-th 64-bit word of a stream (classic splitmix64 walk, random access).
constexpr std::uint64_t word(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + counter * kGamma);
}

// Chained sub-seed derivation for hierarchical contexts
// (campaign -> subject -> session -> purpose tag).
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t v) {
  return mix64(mix64(seed + kGamma) ^ mix64(v + 3 * kGamma));
}
template <typename... Rest>
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t v, Rest... rest) {
  return derive(derive(seed, v), rest...);
}

// Purpose tags keeping independent randomness sources disjoint.
enum : std::uint64_t {
  kTagSession = 0x5e5510,
  kTagBits = 0xb175,
  kTagNoise = 0x40153,
  kTagTaps = 0x7a75,
  kTagModel = 0x30de1,
  kTagFold = 0xf01d,
};

// Uniform double in [0, 1) from the top 53 bits of a word.
constexpr double to_unit(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

// Sequential view over one stream; still just a counter underneath.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream)
      : key_(stream_key(seed, stream)) {}
  explicit Stream(std::uint64_t key) : key_(key), ctr_(0) {}

  std::uint64_t next_u64() { return word(key_, ctr_++); }
  double next_unit() { return to_unit(next_u64()); }

  // Uniform integer in [0, n) by scaling; n is tiny relative to 2^53 in all
  // uses here, so modulo bias is irrelevant at double precision.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n));
  }

  // Box-Muller pair of independent standard normals.
  void next_gaussian_pair(double& g0, double& g1);

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

// Deterministic pseudo-random bits; bit j comes from bit (j mod 64) of
// word(j / 64). Transmitter and receiver regenerate identical sequences
// from the same (seed, stream).
std::vector<std::uint8_t> prng_bits(std::uint64_t seed, std::uint64_t stream_id,
                                    std::size_t n);

}  // namespace cfrsense::rng
