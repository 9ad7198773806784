#include "cfrsense/prng.hpp"

#include <cmath>

#include "cfrsense/error.hpp"

namespace cfrsense::rng {

void Stream::next_gaussian_pair(double& g0, double& g1) {
  // u0 in (0, 1] so the log is finite.
  const double u0 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u1 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u0));
  const double a = 6.283185307179586476925286766559 * u1;
  g0 = r * std::cos(a);
  g1 = r * std::sin(a);
}

std::vector<std::uint8_t> prng_bits(std::uint64_t seed, std::uint64_t stream_id,
                                    std::size_t n) {
  if (n == 0) throw config_error("prng_bits: n must be positive");
  const std::uint64_t key = stream_key(seed, stream_id);
  std::vector<std::uint8_t> bits(n);
  std::uint64_t w = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if ((j & 63) == 0) w = word(key, j >> 6);
    bits[j] = static_cast<std::uint8_t>((w >> (j & 63)) & 1);
  }
  return bits;
}

}  // namespace cfrsense::rng
