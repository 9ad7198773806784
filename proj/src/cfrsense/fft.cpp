#include "cfrsense/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "cfrsense/error.hpp"

namespace cfrsense::fft {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Twiddles e^{-j 2 pi i / N} for i in [0, N/2); shared and immutable once built.
const std::vector<cplx>& twiddles(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<cplx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> tw(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double a = -kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    tw[i] = {std::cos(a), std::sin(a)};
  }
  return cache.emplace(n, std::move(tw)).first->second;
}

void bit_reverse_copy(std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t n = in.size();
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < n) ++levels;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < levels; ++b) r |= ((i >> b) & 1) << (levels - 1 - b);
    out[r] = in[i];
  }
}

// In-place radix-2 DIT on bit-reversed data; conj=true flips the twiddle sign
// (inverse direction).
void butterflies(std::span<cplx> a, bool conj) {
  const std::size_t n = a.size();
  const auto& tw = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t i = 0; i < len / 2; ++i) {
        cplx w = tw[i * step];
        if (conj) w = std::conj(w);
        const cplx u = a[base + i];
        const cplx v = a[base + i + len / 2] * w;
        a[base + i] = u + v;
        a[base + i + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void forward(std::span<const cplx> in, std::span<cplx> out) {
  if (!is_pow2(in.size()) || in.size() != out.size())
    throw config_error("fft: size must be a power of two");
  bit_reverse_copy(in, out);
  butterflies(out, false);
}

void inverse(std::span<const cplx> in, std::span<cplx> out) {
  if (!is_pow2(in.size()) || in.size() != out.size())
    throw config_error("fft: size must be a power of two");
  bit_reverse_copy(in, out);
  butterflies(out, true);
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& v : out) v *= scale;
}

std::vector<cplx> forward(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  forward(in, out);
  return out;
}

std::vector<cplx> inverse(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  inverse(in, out);
  return out;
}

std::vector<cplx> dft_real(std::span<const double> in) {
  const std::size_t n = in.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double a = -kTwoPi * static_cast<double>(k) * static_cast<double>(t) /
                       static_cast<double>(n);
      re += in[t] * std::cos(a);
      im += in[t] * std::sin(a);
    }
    out[k] = {re, im};
  }
  return out;
}

}  // namespace cfrsense::fft
