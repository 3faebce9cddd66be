#include <cstdlib>
#include <vector>

#include "dwa/simd/clearance_kernels.hpp"

namespace dwa::simd {
namespace {

std::vector<ClearanceKernel> detect_kernels() {
  std::vector<ClearanceKernel> kernels{{"scalar", &min_squared_distance_scalar}};
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) {
    kernels.push_back({"avx2", &min_squared_distance_avx2});
  }
#endif
#if defined(__aarch64__)
  // Advanced SIMD is mandatory on AArch64.
  kernels.push_back({"neon", &min_squared_distance_neon});
#endif
  return kernels;
}

const std::vector<ClearanceKernel>& kernel_table() {
  static const std::vector<ClearanceKernel> table = detect_kernels();
  return table;
}

const ClearanceKernel& select_kernel() {
  const auto& table = kernel_table();
  if (const char* requested = std::getenv("DWA_KERNEL")) {
    for (const auto& k : table) {
      if (k.name == requested) {
        return k;
      }
    }
  }
  return table.back();
}

}  // namespace

std::span<const ClearanceKernel> available_kernels() { return kernel_table(); }

const ClearanceKernel& active_kernel() {
  static const ClearanceKernel& chosen = select_kernel();
  return chosen;
}

}  // namespace dwa::simd
