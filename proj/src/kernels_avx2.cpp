// Compiled with -mavx2 (no FMA) so results match the scalar kernels bit for bit.

#include <immintrin.h>

#include "modalshift/kernels.hpp"

namespace modalshift::kernels {
namespace {

void avx2_min_dist2_to_segment(const double* xs, const double* ys, std::size_t n, Point a,
                               Point b, double* d2) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  const __m256d ax = _mm256_set1_pd(a.x);
  const __m256d ay = _mm256_set1_pd(a.y);
  std::size_t i = 0;
  if (len2 > 0.0) {
    const __m256d vabx = _mm256_set1_pd(abx);
    const __m256d vaby = _mm256_set1_pd(aby);
    const __m256d vlen2 = _mm256_set1_pd(len2);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    for (; i + 4 <= n; i += 4) {
      const __m256d px = _mm256_sub_pd(_mm256_loadu_pd(xs + i), ax);
      const __m256d py = _mm256_sub_pd(_mm256_loadu_pd(ys + i), ay);
      __m256d t = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(px, vabx), _mm256_mul_pd(py, vaby)),
                                vlen2);
      // max_pd/min_pd return the second operand on equality, as the scalar ternaries do.
      t = _mm256_max_pd(t, zero);
      t = _mm256_min_pd(t, one);
      const __m256d dx = _mm256_sub_pd(px, _mm256_mul_pd(t, vabx));
      const __m256d dy = _mm256_sub_pd(py, _mm256_mul_pd(t, vaby));
      const __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      _mm256_storeu_pd(d2 + i, _mm256_min_pd(d, _mm256_loadu_pd(d2 + i)));
    }
    for (; i < n; ++i) {
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
    for (; i + 4 <= n; i += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), ax);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), ay);
      const __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      _mm256_storeu_pd(d2 + i, _mm256_min_pd(d, _mm256_loadu_pd(d2 + i)));
    }
    for (; i < n; ++i) {
      const double dx = xs[i] - a.x;
      const double dy = ys[i] - a.y;
      const double d = dx * dx + dy * dy;
      d2[i] = d < d2[i] ? d : d2[i];
    }
  }
}

std::size_t avx2_count_in_range(const double* d2, std::size_t n, double lo2, double hi2) {
  const __m256d lo = _mm256_set1_pd(lo2);
  const __m256d hi = _mm256_set1_pd(hi2);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(d2 + i);
    const __m256d in = _mm256_and_pd(_mm256_cmp_pd(v, lo, _CMP_GE_OQ), _mm256_cmp_pd(v, hi, _CMP_LT_OQ));
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(in)));
  }
  for (; i < n; ++i) count += (d2[i] >= lo2 && d2[i] < hi2) ? 1 : 0;
  return count;
}

void avx2_inverse_square_terms(const double* xs, const double* ys, const double* weight,
                               std::size_t n, Point origin, double floor2, double* out) {
  const __m256d ox = _mm256_set1_pd(origin.x);
  const __m256d oy = _mm256_set1_pd(origin.y);
  const __m256d fl = _mm256_set1_pd(floor2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), ox);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), oy);
    __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    d = _mm256_max_pd(d, fl);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(weight + i), d));
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - origin.x;
    const double dy = ys[i] - origin.y;
    double d = dx * dx + dy * dy;
    d = d > floor2 ? d : floor2;
    out[i] = weight[i] / d;
  }
}

}  // namespace

const Backend* avx2_backend() {
  static const Backend backend{"avx2", avx2_min_dist2_to_segment, avx2_count_in_range,
                               avx2_inverse_square_terms};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &backend : nullptr;
}

}  // namespace modalshift::kernels
