#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace modalshift {

/// Stream tags for deriving independent seed sub-streams from a master seed.
enum class Stream : std::uint64_t {
  household = 1,
  workplace = 2,
  genetic = 3,
  period = 4,
  contest = 5,
  city = 6,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                    std::uint64_t a = 0, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
  std::uint64_t h = mix64(master ^ mix64(static_cast<std::uint64_t>(tag)));
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (c + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

/// Seeded generator with distribution helpers that do not depend on the
/// standard library's implementation-defined distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

  /// Uniform integer in the closed range [lo, hi].
  int range(int lo, int hi) {
    return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Index drawn proportionally to non-negative weights; the weights need
  /// not be normalized but must have a positive sum.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      acc += weights[i];
      last_positive = i;
      if (target < acc) return i;
    }
    return last_positive;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace modalshift
