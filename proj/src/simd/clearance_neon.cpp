#include <arm_neon.h>

#include <limits>

#include "dwa/simd/clearance_kernels.hpp"

namespace dwa::simd {

double min_squared_distance_neon(const double* xs, const double* ys, std::size_t n, double px,
                                 double py) noexcept {
  constexpr std::size_t kLanes = 2;
  const std::size_t simd_end = n - n % kLanes;

  const float64x2_t vpx = vdupq_n_f64(px);
  const float64x2_t vpy = vdupq_n_f64(py);
  float64x2_t vbest = vdupq_n_f64(std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < simd_end; i += kLanes) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vpx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vpy);
    // separate mul/add, no vfmaq: results must match the scalar reference
    const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    vbest = vminq_f64(d2, vbest);
  }
  double best = vminvq_f64(vbest);

  for (std::size_t i = simd_end; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d2 = dx * dx + dy * dy;
    best = d2 < best ? d2 : best;
  }
  return best;
}

}  // namespace dwa::simd
