#pragma once

#include <cstddef>
#include <string>

namespace cfrsense::kernels {

// Dense double-precision inner-loop kernels. Two implementations exist: a
// scalar reference and an AVX2 variant. Both follow the same 8-lane
// accumulation layout with fused multiply-adds and a fixed combine order
// ((l0+l4, l1+l5, l2+l6, l3+l7) then (v0+v2)+(v1+v3), tail appended last),
// so their results are bit-identical and runtime dispatch never changes
// output bytes.
struct Ops {
  const char* name;
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i]-b[i])^2
  double (*sqdist)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // C[i*n+j] = dot(A+i*k, B+j*k); A is m-by-k, B is n-by-k, both row-major.
  void (*matmul_nt)(const double* A, const double* B, double* C, std::size_t m,
                    std::size_t n, std::size_t k);
};

const Ops& scalar_ops();

// AVX2+FMA kernels; null when this build or this machine lacks them.
const Ops* avx2_ops();

bool avx2_available();

// Runtime-selected implementation. Honors CFRSENSE_KERNELS=scalar|avx2 for
// forcing a backend (avx2 falls back to scalar when unsupported).
const Ops& ops();

std::string active_kernel_name();

}  // namespace cfrsense::kernels
