#include <cstdlib>
#include <cstring>

#include "modalshift/kernels.hpp"

namespace modalshift::kernels {
namespace {

void scalar_min_dist2_to_segment(const double* xs, const double* ys, std::size_t n, Point a,
                                 Point b, double* d2) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  if (len2 > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double px = xs[i] - a.x;
      const double py = ys[i] - a.y;
      double t = (px * abx + py * aby) / len2;
      t = t > 0.0 ? t : 0.0;
      t = t < 1.0 ? t : 1.0;
      const double dx = px - t * abx;
      const double dy = py - t * aby;
      const double d = dx * dx + dy * dy;
      d2[i] = d < d2[i] ? d : d2[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = xs[i] - a.x;
      const double dy = ys[i] - a.y;
      const double d = dx * dx + dy * dy;
      d2[i] = d < d2[i] ? d : d2[i];
    }
  }
}

std::size_t scalar_count_in_range(const double* d2, std::size_t n, double lo2, double hi2) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (d2[i] >= lo2 && d2[i] < hi2) ? 1 : 0;
  return count;
}

void scalar_inverse_square_terms(const double* xs, const double* ys, const double* weight,
                                 std::size_t n, Point origin, double floor2, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - origin.x;
    const double dy = ys[i] - origin.y;
    double d = dx * dx + dy * dy;
    d = d > floor2 ? d : floor2;
    out[i] = weight[i] / d;
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{"scalar", scalar_min_dist2_to_segment, scalar_count_in_range,
                               scalar_inverse_square_terms};
  return backend;
}

#ifndef MODALSHIFT_HAVE_AVX2
const Backend* avx2_backend() { return nullptr; }
#endif

const Backend& active_backend() {
  static const Backend* chosen = [] {
    const char* env = std::getenv("MODALSHIFT_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_backend();
    if (const Backend* simd = avx2_backend()) return simd;
    return &scalar_backend();
  }();
  return *chosen;
}

}  // namespace modalshift::kernels
