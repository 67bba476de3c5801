#include "modalshift/competition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "modalshift/rng.hpp"

namespace modalshift {

void CompetitionParams::validate() const {
  double sum = 0.0;
  for (double w : monthly_weights) {
    if (!(w >= 0.0)) throw InputError("monthly_weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InputError("monthly_weights must sum to 1");
  for (double e : equilibrium) {
    if (!(e > 0.0)) throw InputError("equilibrium parameters must be positive");
  }
}

PeriodPlan make_period_plan(std::span<const HouseholdAgent> households,
                            const CompetitionParams& params, std::uint64_t seed) {
  params.validate();
  PeriodPlan plan;
  plan.monthly_weights = params.monthly_weights;
  plan.equilibrium = params.equilibrium;
  plan.period.reserve(households.size());
  for (const HouseholdAgent& h : households) {
    Rng rng(derive_seed(seed, Stream::period, static_cast<std::uint64_t>(h.id)));
    plan.period.push_back(rng.categorical(params.monthly_weights));
  }
  return plan;
}

CapacityTable::CapacityTable(const CityModel& city, std::size_t n_agents,
                             const std::array<double, kPeriods>& equilibrium)
    : initial_(city.zone_count() * kPeriods, 0) {
  double total = 0.0;
  for (const Zone& z : city.zones()) total += z.residential_area;
  if (!(total > 0.0)) return;
  for (std::size_t i = 0; i < city.zone_count(); ++i) {
    const double share = city.zones()[i].residential_area / total;
    for (std::size_t p = 0; p < kPeriods; ++p) {
      const double raw = share * static_cast<double>(n_agents) * equilibrium[p];
      initial_[i * kPeriods + p] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(raw + 0.5)));
    }
  }
}

std::int64_t CapacityTable::total_initial(std::size_t zone_index) const {
  std::int64_t total = 0;
  for (std::size_t p = 0; p < kPeriods; ++p) total += initial(zone_index, p);
  return total;
}

std::weak_ordering priority_compare(const HouseholdAgent& a, const HouseholdAgent& b) {
  // Singles do not get the small-household advantage.
  const auto effective = [](const HouseholdAgent& h) {
    return h.size == 1 ? std::numeric_limits<int>::max() : h.size;
  };
  if (auto c = effective(a) <=> effective(b); c != 0) return c;
  if (a.monthly_income != b.monthly_income) {
    return a.monthly_income > b.monthly_income ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  if (a.has_child != b.has_child) return a.has_child ? std::weak_ordering::greater : std::weak_ordering::less;
  return std::weak_ordering::equivalent;
}

std::optional<ZoneId> AllocationResult::home_of(AgentId id) const {
  auto it = housed.find(id);
  if (it == housed.end()) return std::nullopt;
  return it->second;
}

AllocationResult allocate(const CityModel& city, std::span<const HouseholdAgent> households,
                          std::span<const AlternativeSet> alternatives, const PeriodPlan& plan,
                          const CapacityTable& capacities, bool carry_over_capacity,
                          std::uint64_t seed) {
  if (alternatives.size() != households.size() || plan.period.size() != households.size()) {
    throw InputError("allocate: alternatives and period plan must cover every household");
  }
  const std::size_t n_zones = city.zone_count();
  AllocationResult result;
  result.housed_per_zone.assign(n_zones, 0);

  // Alternatives by ascending distance from the former residence.
  std::vector<std::vector<std::size_t>> ordered(households.size());
  for (std::size_t a = 0; a < households.size(); ++a) {
    const Point former = city.zone(households[a].former_zone).centroid;
    auto& list = ordered[a];
    for (const Alternative& alt : alternatives[a].alternatives) list.push_back(city.zone_index(alt.zone));
    std::stable_sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) {
      const double dx = distance(city.zones()[x].centroid, former);
      const double dy = distance(city.zones()[y].centroid, former);
      if (dx != dy) return dx < dy;
      return city.zones()[x].id < city.zones()[y].id;
    });
  }

  std::vector<std::size_t> carried;
  std::vector<std::int64_t> remaining(n_zones, 0);
  std::vector<bool> housed(households.size(), false);
  for (std::size_t p = 0; p < kPeriods; ++p) {
    for (std::size_t z = 0; z < n_zones; ++z) {
      remaining[z] = (carry_over_capacity && p > 0 ? remaining[z] : 0) + capacities.initial(z, p);
    }
    std::vector<std::size_t> active = std::move(carried);
    carried.clear();
    for (std::size_t a = 0; a < households.size(); ++a) {
      if (plan.period[a] == p) active.push_back(a);
    }
    std::sort(active.begin(), active.end());
    std::vector<std::size_t> cursor(households.size(), 0);

    for (std::size_t round = 0; !active.empty(); ++round) {
      std::vector<std::vector<std::size_t>> demand(n_zones);
      std::vector<std::size_t> next_active;
      for (std::size_t a : active) {
        if (cursor[a] >= ordered[a].size()) {
          if (!ordered[a].empty()) carried.push_back(a);
          continue;
        }
        demand[ordered[a][cursor[a]]].push_back(a);
      }
      for (std::size_t z = 0; z < n_zones; ++z) {
        auto& contenders = demand[z];
        if (contenders.empty()) continue;
        const auto cap = remaining[z];
        if (static_cast<std::int64_t>(contenders.size()) <= cap) {
          for (std::size_t a : contenders) {
            housed[a] = true;
            result.housed[households[a].id] = city.zones()[z].id;
          }
          remaining[z] -= static_cast<std::int64_t>(contenders.size());
          result.housed_per_zone[z] += static_cast<std::int64_t>(contenders.size());
          continue;
        }
        // Contest: priority first, then a seeded draw keyed to agent identity.
        std::vector<std::uint64_t> tie(households.size());
        for (std::size_t a : contenders) {
          tie[a] = derive_seed(seed, Stream::contest, static_cast<std::uint64_t>(households[a].id),
                               p * 1024 + round, static_cast<std::uint64_t>(city.zones()[z].id));
        }
        std::sort(contenders.begin(), contenders.end(), [&](std::size_t x, std::size_t y) {
          const auto c = priority_compare(households[x], households[y]);
          if (c != 0) return c < 0;
          if (tie[x] != tie[y]) return tie[x] < tie[y];
          return households[x].id < households[y].id;
        });
        Contest contest;
        contest.period = p;
        contest.round = round;
        contest.zone = city.zones()[z].id;
        contest.capacity = cap;
        for (std::size_t k = 0; k < contenders.size(); ++k) {
          const std::size_t a = contenders[k];
          contest.contenders.push_back(households[a].id);
          if (static_cast<std::int64_t>(k) < cap) {
            housed[a] = true;
            result.housed[households[a].id] = contest.zone;
            contest.winners.push_back(households[a].id);
          } else {
            ++cursor[a];
            next_active.push_back(a);
          }
        }
        remaining[z] = 0;
        result.housed_per_zone[z] += std::max<std::int64_t>(cap, 0);
        result.contests.push_back(std::move(contest));
      }
      std::sort(next_active.begin(), next_active.end());
      active = std::move(next_active);
    }
    std::sort(carried.begin(), carried.end());
  }
  for (std::size_t a = 0; a < households.size(); ++a) {
    if (!housed[a]) result.unhoused.push_back(households[a].id);
  }
  std::sort(result.unhoused.begin(), result.unhoused.end());
  return result;
}

}  // namespace modalshift
