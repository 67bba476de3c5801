#pragma once

// Data-parallel geometry kernels behind the coverage raster and the
// facility accessibility sums. Every backend must return bit-identical
// results to the scalar reference: the operation order is fixed and no
// fused multiply-add is allowed.

#include <cstddef>
#include <string_view>

#include "modalshift/geometry.hpp"

namespace modalshift::kernels {

struct Backend {
  std::string_view name;

  /// d2[i] = min(d2[i], squared distance from (xs[i], ys[i]) to segment ab).
  /// A degenerate segment (a == b) is a point.
  void (*min_dist2_to_segment)(const double* xs, const double* ys, std::size_t n, Point a,
                               Point b, double* d2);

  /// Number of i with lo2 <= d2[i] < hi2.
  std::size_t (*count_in_range)(const double* d2, std::size_t n, double lo2, double hi2);

  /// out[i] = weight[i] / max(|(xs[i], ys[i]) - origin|^2, floor2).
  void (*inverse_square_terms)(const double* xs, const double* ys, const double* weight,
                               std::size_t n, Point origin, double floor2, double* out);
};

const Backend& scalar_backend();

/// nullptr when the AVX2 backend was not compiled in or the CPU lacks AVX2.
const Backend* avx2_backend();

/// Backend used by the library: AVX2 when available, unless the environment
/// variable MODALSHIFT_SIMD is set to "scalar".
const Backend& active_backend();

}  // namespace modalshift::kernels
