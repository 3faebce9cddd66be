// Compiled with -mavx2 only; callers reach it through the dispatcher after a
// cpuid check.

#include <immintrin.h>

#include <limits>

#include "dwa/simd/clearance_kernels.hpp"

namespace dwa::simd {

double min_squared_distance_avx2(const double* xs, const double* ys, std::size_t n, double px,
                                 double py) noexcept {
  constexpr std::size_t kLanes = 4;
  const std::size_t simd_end = n - n % kLanes;

  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  __m256d vbest = _mm256_set1_pd(std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < simd_end; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vpx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vpy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    vbest = _mm256_min_pd(d2, vbest);
  }

  // horizontal min
  const __m128d lo = _mm256_castpd256_pd128(vbest);
  const __m128d hi = _mm256_extractf128_pd(vbest, 1);
  __m128d m = _mm_min_pd(lo, hi);
  m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
  double best = _mm_cvtsd_f64(m);

  for (std::size_t i = simd_end; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d2 = dx * dx + dy * dy;
    best = d2 < best ? d2 : best;
  }
  return best;
}

}  // namespace dwa::simd
