#pragma once

// Nearest-obstacle distance kernels. The scalar routine is the reference;
// vector variants must return bit-identical results (the reduction is a pure
// min over squared distances computed with the same mul/add sequence, and
// all kernel translation units are built with -ffp-contract=off).

#include <cstddef>
#include <span>
#include <string_view>

namespace dwa::simd {

/// min_i (xs[i]-px)^2 + (ys[i]-py)^2, or +inf when n == 0.
using MinSquaredDistanceFn = double (*)(const double* xs, const double* ys, std::size_t n,
                                        double px, double py) noexcept;

struct ClearanceKernel {
  std::string_view name;
  MinSquaredDistanceFn min_squared_distance;
};

double min_squared_distance_scalar(const double* xs, const double* ys, std::size_t n, double px,
                                   double py) noexcept;

#if defined(__x86_64__) || defined(_M_X64)
double min_squared_distance_avx2(const double* xs, const double* ys, std::size_t n, double px,
                                 double py) noexcept;
#endif

#if defined(__aarch64__)
double min_squared_distance_neon(const double* xs, const double* ys, std::size_t n, double px,
                                 double py) noexcept;
#endif

/// Kernels usable on this CPU, scalar first.
std::span<const ClearanceKernel> available_kernels();

/// Best available kernel. Setting DWA_KERNEL=<name> in the environment pins
/// a specific one (unknown names fall back to the default choice).
const ClearanceKernel& active_kernel();

inline double min_squared_distance(std::span<const double> xs, std::span<const double> ys,
                                   double px, double py) {
  return active_kernel().min_squared_distance(xs.data(), ys.data(), xs.size(), px, py);
}

}  // namespace dwa::simd
