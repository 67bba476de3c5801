#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "modalshift/common.hpp"
#include "modalshift/nsga2.hpp"
#include "modalshift/rng.hpp"

using namespace modalshift;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Evaluation ev(std::vector<double> obj, double violation = 0.0) { return {std::move(obj), violation}; }

/// Naive peeling: repeatedly take every member no remaining member dominates.
std::vector<std::vector<std::size_t>> naive_fronts(const std::vector<Evaluation>& pop) {
  std::vector<bool> done(pop.size(), false);
  std::vector<std::vector<std::size_t>> fronts;
  std::size_t left = pop.size();
  while (left > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (done[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pop.size() && !dominated; ++j) {
        if (done[j] || j == i) continue;
        const bool a_feasible = pop[j].violation == 0.0, b_feasible = pop[i].violation == 0.0;
        if (a_feasible && !b_feasible) dominated = true;
        else if (!a_feasible && !b_feasible) dominated = pop[j].violation < pop[i].violation;
        else if (a_feasible && b_feasible) {
          bool le = true, lt = false;
          for (std::size_t m = 0; m < pop[i].objectives.size(); ++m) {
            le = le && pop[j].objectives[m] <= pop[i].objectives[m];
            lt = lt || pop[j].objectives[m] < pop[i].objectives[m];
          }
          dominated = le && lt;
        }
      }
      if (!dominated) front.push_back(i);
    }
    for (std::size_t i : front) done[i] = true;
    left -= front.size();
    fronts.push_back(std::move(front));
  }
  return fronts;
}

std::vector<Evaluation> random_population(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<Evaluation> pop;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> obj;
    // Coarse values so ties and duplicates occur.
    for (std::size_t k = 0; k < m; ++k) obj.push_back(static_cast<double>(rng.index(12)));
    pop.push_back(ev(std::move(obj), rng.bernoulli(0.1) ? static_cast<double>(1 + rng.index(3)) : 0.0));
  }
  return pop;
}

}  // namespace

TEST_CASE("mutually nondominated points form one front") {
  const std::vector<Evaluation> pop = {ev({1, 4}), ev({2, 3}), ev({3, 2}), ev({4, 1})};
  const auto fronts = nondominated_sort(pop);
  REQUIRE(fronts.size() == 1);
  CHECK(fronts[0] == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("a dominance chain gives one front per member") {
  const std::vector<Evaluation> pop = {ev({3, 3}), ev({1, 1}), ev({2, 2})};
  const auto fronts = nondominated_sort(pop);
  REQUIRE(fronts.size() == 3);
  CHECK(fronts[0] == std::vector<std::size_t>{1});
  CHECK(fronts[1] == std::vector<std::size_t>{2});
  CHECK(fronts[2] == std::vector<std::size_t>{0});
}

TEST_CASE("fast sort matches the naive oracle on 200 random vectors") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pop = random_population(rng, 200, 3);
    CHECK(nondominated_sort(pop) == naive_fronts(pop));
  }
}

TEST_CASE("sort is invariant under permutation") {
  Rng rng(2);
  const auto pop = random_population(rng, 60, 2);
  std::vector<std::size_t> perm(pop.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
  std::vector<Evaluation> shuffled;
  for (std::size_t p : perm) shuffled.push_back(pop[p]);
  const auto a = nondominated_sort(pop);
  auto b = nondominated_sort(shuffled);
  REQUIRE(a.size() == b.size());
  for (std::size_t f = 0; f < a.size(); ++f) {
    std::vector<std::size_t> mapped;
    for (std::size_t i : b[f]) mapped.push_back(perm[i]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == a[f]);
  }
}

TEST_CASE("crowding distance") {
  SUBCASE("two members are both boundaries") {
    const std::vector<Evaluation> pop = {ev({0, 1}), ev({1, 0})};
    const auto d = crowding_distance(pop, std::vector<std::size_t>{0, 1});
    CHECK(d[0] == kInf);
    CHECK(d[1] == kInf);
  }
  SUBCASE("three members on a line") {
    const std::vector<Evaluation> pop = {ev({0}), ev({5}), ev({10})};
    const auto d = crowding_distance(pop, std::vector<std::size_t>{0, 1, 2});
    CHECK(d[0] == kInf);
    CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d[2] == kInf);
  }
  SUBCASE("degenerate objective contributes nothing") {
    const std::vector<Evaluation> pop = {ev({3}), ev({3}), ev({3})};
    const auto d = crowding_distance(pop, std::vector<std::size_t>{0, 1, 2});
    CHECK(d == std::vector<double>{0, 0, 0});
  }
  SUBCASE("sum over objectives") {
    const std::vector<Evaluation> pop = {ev({0, 8}), ev({2, 4}), ev({4, 2}), ev({10, 0})};
    const auto d = crowding_distance(pop, std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(d[1] == doctest::Approx((4.0 - 0.0) / 10 + (8.0 - 2.0) / 8));
    CHECK(d[2] == doctest::Approx((10.0 - 2.0) / 10 + (4.0 - 0.0) / 8));
  }
}

TEST_CASE("constraint domination") {
  CHECK(constrained_dominates(ev({5, 5}), ev({0, 0}, 0.1)));
  CHECK_FALSE(constrained_dominates(ev({0, 0}, 0.1), ev({5, 5})));
  CHECK(constrained_dominates(ev({9, 9}, 0.1), ev({0, 0}, 0.5)));
  CHECK_FALSE(constrained_dominates(ev({0, 0}, 0.5), ev({9, 9}, 0.5)));
  CHECK(constrained_dominates(ev({1, 2}), ev({1, 3})));
  CHECK_FALSE(constrained_dominates(ev({1, 3}), ev({2, 2})));
  CHECK_THROWS_AS(constrained_dominates(ev({1}), ev({1, 2})), InputError);
}

TEST_CASE("dominance is irreflexive and asymmetric") {
  Rng rng(3);
  const auto pop = random_population(rng, 80, 3);
  for (const auto& a : pop) {
    CHECK_FALSE(constrained_dominates(a, a));
    for (const auto& b : pop) {
      CHECK_FALSE((constrained_dominates(a, b) && constrained_dominates(b, a)));
    }
  }
}

TEST_CASE("empty population") {
  CHECK(nondominated_sort(std::vector<Evaluation>{}).empty());
}
