#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "modalshift/city.hpp"
#include "modalshift/coverage.hpp"
#include "modalshift/nsga2.hpp"
#include "modalshift/population.hpp"

namespace modalshift {

/// Lower clamp for facility distances in the inverse-square accessibility.
inline constexpr double kFacilityDistanceFloorKm = 0.1;

enum class ResidentialObjective : std::uint8_t {
  workplace_distance,
  former_distance,
  pollution,
  facility_access,
  transport_access,
};
inline constexpr std::size_t kResidentialObjectives = 5;

enum class Direction : std::uint8_t { minimize, maximize };

std::string_view to_string(ResidentialObjective o);
Direction direction_of(ResidentialObjective o);

struct ObjectiveEntry {
  ResidentialObjective id;
  double value;
  Direction direction;
};

struct ObjectiveVector {
  std::vector<ObjectiveEntry> values;

  std::size_t size() const { return values.size(); }
  /// Values with maximised objectives negated.
  std::vector<double> minimized() const;
};

struct FeasibilityReport {
  bool rent_ok = true;
  bool pollution_ok = true;
  bool restriction_ok = true;
  double violation_magnitude = 0.0;

  bool feasible() const { return rent_ok && pollution_ok && restriction_ok; }
};

/// Per-zone accessibility ingredients that do not depend on the agent:
/// Σ w/d² per facility kind and Σ coverage/area per service kind.
class AccessibilityTable {
public:
  AccessibilityTable(const CityModel& city, unsigned workers = 1);

  double facility(std::size_t zone_index, FacilityKind k) const {
    return facility_[zone_index][static_cast<std::size_t>(k)];
  }
  double transport(std::size_t zone_index, ServiceKind k) const {
    return transport_[zone_index][static_cast<std::size_t>(k)];
  }

private:
  std::vector<std::array<double, kFacilityKinds>> facility_;
  std::vector<std::array<double, kServiceKinds>> transport_;
};

/// Per-kind Σ_j w_j · d_ij⁻² with w_j = area_j / max area of that kind.
std::array<double, kFacilityKinds> facility_kind_sums(const CityModel& city, Point origin);

double facility_accessibility(const CityModel& city, ZoneId zone, const HouseholdAgent& agent);
double transport_accessibility(const CityModel& city, ZoneId zone, const HouseholdAgent& agent);

FeasibilityReport feasibility(const Zone& zone, const HouseholdAgent& agent);

/// Active objectives for an agent: an objective is active iff its importance
/// is positive (workplace distance also needs an employed member). When
/// nothing is active the former-residence distance is used.
std::vector<ResidentialObjective> active_objectives(const HouseholdAgent& agent);

ObjectiveVector objectives(const CityModel& city, const AccessibilityTable& access, ZoneId zone,
                           const HouseholdAgent& agent);
ObjectiveVector objectives(const CityModel& city, ZoneId zone, const HouseholdAgent& agent);

/// Throws InputError when the objective ids differ.
bool constrained_dominates(const ObjectiveVector& a, const FeasibilityReport& fa,
                           const ObjectiveVector& b, const FeasibilityReport& fb);

struct GAParams {
  std::size_t population_size = 50;
  std::size_t generations = 100;
  double mutation_rate = 0.2;
  double crossover_rate = 0.9;
  std::size_t tournament_size = 2;
  std::size_t max_alternatives = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Alternative {
  ZoneId zone = 0;
  ObjectiveVector objectives;
};

struct AlternativeSet {
  AgentId agent = 0;
  std::vector<Alternative> alternatives;
};

/// City-level data shared by every agent's search.
class ChoiceSpace {
public:
  ChoiceSpace(const CityModel& city, unsigned workers = 1);

  const CityModel& city() const { return *city_; }
  const AccessibilityTable& access() const { return access_; }
  double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  /// Zone whose centroid is nearest the midpoint of zones i and j.
  std::size_t midpoint_zone(std::size_t i, std::size_t j) const { return midpoint_[i * n_ + j]; }
  std::size_t size() const { return n_; }

private:
  const CityModel* city_;
  AccessibilityTable access_;
  std::size_t n_;
  std::vector<double> dist_;
  std::vector<std::size_t> midpoint_;
};

/// Objectives and feasibility of every zone for one agent, plus the zone-level
/// constraint-domination relation used by the search.
class AgentLandscape {
public:
  AgentLandscape(const ChoiceSpace& space, const HouseholdAgent& agent);

  std::size_t size() const { return evals_.size(); }
  const Evaluation& evaluation(std::size_t zone_index) const { return evals_[zone_index]; }
  const ObjectiveVector& objectives(std::size_t zone_index) const { return vectors_[zone_index]; }
  bool dominates(std::size_t a, std::size_t b) const {
    return (dominated_by_[b * words_ + a / 64] >> (a % 64)) & 1U;
  }
  /// Nondominated rank (0 = first front) of each zone in `present`, using only
  /// the zones in `present` as competitors. Other entries are left at SIZE_MAX.
  std::vector<std::size_t> rank_zones(std::span<const std::size_t> present) const;

private:
  std::vector<Evaluation> evals_;
  std::vector<ObjectiveVector> vectors_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> dominated_by_;  // row b: bitset of zones dominating b
};

/// Constrained NSGA-II over zone-valued chromosomes; up to max_alternatives
/// distinct feasible zones from the final first front by crowding distance.
AlternativeSet select_alternatives(const ChoiceSpace& space, const HouseholdAgent& agent,
                                   const GAParams& params);
AlternativeSet select_alternatives(const HouseholdAgent& agent, const CityModel& city,
                                   const GAParams& params);

/// Exact feasible nondominated zone set by exhaustive comparison.
std::vector<ZoneId> pareto_oracle(const ChoiceSpace& space, const HouseholdAgent& agent);
std::vector<ZoneId> pareto_oracle(const HouseholdAgent& agent, const CityModel& city);

}  // namespace modalshift
