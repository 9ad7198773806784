#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cfrsense {

using cplx = std::complex<double>;

namespace fft {

// Iterative radix-2 transforms for power-of-two sizes. Convention:
// forward is unscaled, X[k] = sum_t x[t] e^{-j 2 pi k t / N};
// inverse carries the 1/N factor. Butterfly order is fixed, so outputs are
// reproducible bit-for-bit.
void forward(std::span<const cplx> in, std::span<cplx> out);
void inverse(std::span<const cplx> in, std::span<cplx> out);

std::vector<cplx> forward(std::span<const cplx> in);
std::vector<cplx> inverse(std::span<const cplx> in);

// DFT of the real series (forward convention above); handy for spectral
// peak checks on magnitude traces of any length (not restricted to 2^k).
std::vector<cplx> dft_real(std::span<const double> in);

bool is_pow2(std::size_t n);

}  // namespace fft
}  // namespace cfrsense
