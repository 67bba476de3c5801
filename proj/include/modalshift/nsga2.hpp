#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace modalshift {

/// One evaluated individual. All objectives are minimised; violation is the
/// total constraint excess (0 iff feasible).
struct Evaluation {
  std::vector<double> objectives;
  double violation = 0.0;

  bool feasible() const { return violation == 0.0; }
};

/// Plain Pareto dominance on minimised objectives.
bool pareto_dominates(std::span<const double> a, std::span<const double> b);

/// Constraint-domination: feasible beats infeasible, infeasible compare by
/// violation, feasible compare by Pareto dominance. Throws InputError when
/// the objective counts differ.
bool constrained_dominates(const Evaluation& a, const Evaluation& b);

/// Fast nondominated sort. Fronts list member indices in ascending order.
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const Evaluation> population);

/// Crowding distance of each member of `front` (same order). An objective
/// whose spread across the front is zero contributes nothing, boundary
/// members included.
std::vector<double> crowding_distance(std::span<const Evaluation> population,
                                      std::span<const std::size_t> front);

namespace detail {

/// Crowding over `count` members with `objectives` values each, read through
/// value(member, objective). Shared by the generic and zone-valued searches.
template <typename Value>
std::vector<double> crowding(std::size_t count, std::size_t objectives, Value&& value) {
  std::vector<double> dist(count, 0.0);
  std::vector<std::size_t> order(count);
  for (std::size_t m = 0; m < objectives; ++m) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value(a, m) < value(b, m); });
    const double lo = value(order.front(), m);
    const double hi = value(order.back(), m);
    if (!(hi > lo)) continue;
    dist[order.front()] = std::numeric_limits<double>::infinity();
    dist[order.back()] = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < count; ++k) {
      dist[order[k]] += (value(order[k + 1], m) - value(order[k - 1], m)) / (hi - lo);
    }
  }
  return dist;
}

}  // namespace detail

}  // namespace modalshift
