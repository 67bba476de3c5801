#include "modalshift/nsga2.hpp"

#include "modalshift/common.hpp"

namespace modalshift {

bool pareto_dominates(std::span<const double> a, std::span<const double> b) {
  bool strictly_better = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strictly_better = true;
  }
  return strictly_better;
}

bool constrained_dominates(const Evaluation& a, const Evaluation& b) {
  if (a.objectives.size() != b.objectives.size()) {
    throw InputError("constrained_dominates: mismatched objective sets (" +
                     std::to_string(a.objectives.size()) + " vs " +
                     std::to_string(b.objectives.size()) + ")");
  }
  const bool fa = a.feasible();
  const bool fb = b.feasible();
  if (fa && !fb) return true;
  if (!fa && fb) return false;
  if (!fa) return a.violation < b.violation;
  return pareto_dominates(a.objectives, b.objectives);
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const Evaluation> population) {
  const std::size_t n = population.size();
  std::vector<std::vector<std::size_t>> dominates(n);
  std::vector<std::size_t> dominated_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (constrained_dominates(population[p], population[q])) {
        dominates[p].push_back(q);
        ++dominated_count[q];
      } else if (constrained_dominates(population[q], population[p])) {
        dominates[q].push_back(p);
        ++dominated_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (dominated_count[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current) {
      for (std::size_t q : dominates[p]) {
        if (--dominated_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const Evaluation> population,
                                      std::span<const std::size_t> front) {
  if (front.empty()) return {};
  const std::size_t m = population[front[0]].objectives.size();
  return detail::crowding(front.size(), m, [&](std::size_t k, std::size_t obj) {
    return population[front[k]].objectives[obj];
  });
}

}  // namespace modalshift
