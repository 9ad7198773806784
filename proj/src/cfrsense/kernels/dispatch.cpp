#include <cstdlib>
#include <string>

#include "cfrsense/kernels/kernels.hpp"

namespace cfrsense::kernels {

const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return avx2_ops_impl() != nullptr && __builtin_cpu_supports("avx2") &&
         __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* avx2_ops() { return avx2_available() ? avx2_ops_impl() : nullptr; }

namespace {

const Ops& select() {
  const char* force = std::getenv("CFRSENSE_KERNELS");
  if (force && std::string(force) == "scalar") return scalar_ops();
  if (const Ops* a = avx2_ops()) return *a;
  return scalar_ops();
}

}  // namespace

const Ops& ops() {
  static const Ops& chosen = select();
  return chosen;
}

std::string active_kernel_name() { return ops().name; }

}  // namespace cfrsense::kernels
