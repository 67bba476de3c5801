#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "modalshift/city.hpp"
#include "modalshift/population.hpp"
#include "modalshift/residential.hpp"

namespace modalshift {

inline constexpr std::size_t kPeriods = 12;

struct CompetitionParams {
  std::array<double, kPeriods> monthly_weights;
  std::array<double, kPeriods> equilibrium;
  bool carry_over_capacity = false;

  CompetitionParams() {
    monthly_weights.fill(1.0 / kPeriods);
    equilibrium.fill(1.0);
  }
  void validate() const;
};

struct PeriodPlan {
  std::array<double, kPeriods> monthly_weights{};
  std::array<double, kPeriods> equilibrium{};
  std::vector<std::size_t> period;  // per household index
};

/// Each household is drawn into a month ∝ the monthly weights, from a
/// sub-stream keyed by the household id.
PeriodPlan make_period_plan(std::span<const HouseholdAgent> households,
                            const CompetitionParams& params, std::uint64_t seed);

class CapacityTable {
public:
  /// capacity[z][p] = round_half_up(resarea_z / Σ resarea · n_agents · equilibrium_p).
  CapacityTable(const CityModel& city, std::size_t n_agents,
                const std::array<double, kPeriods>& equilibrium);

  std::int64_t initial(std::size_t zone_index, std::size_t period) const {
    return initial_[zone_index * kPeriods + period];
  }
  std::int64_t total_initial(std::size_t zone_index) const;
  std::size_t zone_count() const { return initial_.size() / kPeriods; }

private:
  std::vector<std::int64_t> initial_;
};

/// Priority in a contest; `less` means a beats b. Lexicographic on
/// effective size ascending (singles rank as the largest), income
/// descending, then childless first.
std::weak_ordering priority_compare(const HouseholdAgent& a, const HouseholdAgent& b);

/// True when a strictly beats b under priority_compare.
inline bool priority_beats(const HouseholdAgent& a, const HouseholdAgent& b) {
  return priority_compare(a, b) == std::weak_ordering::less;
}

struct Contest {
  std::size_t period = 0;
  std::size_t round = 0;
  ZoneId zone = 0;
  std::int64_t capacity = 0;
  std::vector<AgentId> contenders;  // priority order, ties resolved
  std::vector<AgentId> winners;
};

struct AllocationResult {
  std::map<AgentId, ZoneId> housed;
  std::vector<AgentId> unhoused;  // ascending
  std::vector<Contest> contests;
  std::vector<std::int64_t> housed_per_zone;  // by zone index

  std::optional<ZoneId> home_of(AgentId id) const;
};

/// Month-by-month competition for residences. `alternatives` and `plan.period`
/// are indexed like `households`.
AllocationResult allocate(const CityModel& city, std::span<const HouseholdAgent> households,
                          std::span<const AlternativeSet> alternatives, const PeriodPlan& plan,
                          const CapacityTable& capacities, bool carry_over_capacity,
                          std::uint64_t seed);

}  // namespace modalshift
