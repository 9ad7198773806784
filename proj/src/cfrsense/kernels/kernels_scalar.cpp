#include <cmath>
#include <cstddef>

#include "cfrsense/kernels/kernels.hpp"

// Reference kernels. The 8 independent accumulator lanes mirror the two
// 4-wide AVX2 registers; std::fma performs the same single-rounding fused
// operation as vfmadd, which is what makes the two backends bit-identical.

namespace cfrsense::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int l = 0; l < 8; ++l) lane[l] = std::fma(a[i + l], b[i + l], lane[l]);
  double v0 = lane[0] + lane[4];
  double v1 = lane[1] + lane[5];
  double v2 = lane[2] + lane[6];
  double v3 = lane[3] + lane[7];
  double sum = (v0 + v2) + (v1 + v3);
  for (; i < n; ++i) sum = std::fma(a[i], b[i], sum);
  return sum;
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
  double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int l = 0; l < 8; ++l) {
      const double d = a[i + l] - b[i + l];
      lane[l] = std::fma(d, d, lane[l]);
    }
  double v0 = lane[0] + lane[4];
  double v1 = lane[1] + lane[5];
  double v2 = lane[2] + lane[6];
  double v3 = lane[3] + lane[7];
  double sum = (v0 + v2) + (v1 + v3);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum = std::fma(d, d, sum);
  }
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void matmul_nt_scalar(const double* A, const double* B, double* C, std::size_t m,
                      std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) C[i * n + j] = dot_scalar(A + i * k, B + j * k, k);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", dot_scalar, sqdist_scalar, axpy_scalar,
                       matmul_nt_scalar};
  return ops;
}

}  // namespace cfrsense::kernels
