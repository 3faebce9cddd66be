#include <limits>

#include "dwa/simd/clearance_kernels.hpp"

namespace dwa::simd {

double min_squared_distance_scalar(const double* xs, const double* ys, std::size_t n, double px,
                                   double py) noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d2 = dx * dx + dy * dy;
    best = d2 < best ? d2 : best;
  }
  return best;
}

}  // namespace dwa::simd
