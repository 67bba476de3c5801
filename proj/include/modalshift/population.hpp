#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "modalshift/city.hpp"
#include "modalshift/common.hpp"
#include "modalshift/rng.hpp"

namespace modalshift {

/// Residential location criteria as surveyed, in survey column order.
enum class ResidentialCriterion : std::uint8_t {
  housing_rent,
  educational,
  commercial,
  green_recreational,
  cultural,
  remedial,
  highways,
  subway_stations,
  bus_stops,
  pollution,
  workplace_distance,
  former_residence_distance,
  traffic_restrictions,
};
inline constexpr std::size_t kResidentialCriteria = 13;

enum class CommuteCriterion : std::uint8_t {
  cost,
  in_vehicle_time,
  out_of_vehicle_time,
  comfortability,
  security,
  reliability,
};
inline constexpr std::size_t kCommuteCriteria = 6;

std::string_view to_string(ResidentialCriterion c);
std::string_view to_string(CommuteCriterion c);

/// Attribute families used for survey rows and report categories.
enum class Attribute : std::uint8_t { size, income, cars };
inline constexpr std::size_t kAttributes = 3;

/// Per category, the fraction of surveyed households rating each criterion
/// above 4 on the 0..9 scale.
struct SurveyRow {
  std::string category;
  std::array<double, kResidentialCriteria> residential{};
  std::array<double, kCommuteCriteria> commuting{};
};

struct SurveySummary {
  /// Rows per attribute; an attribute with no rows does not contribute.
  std::array<std::vector<SurveyRow>, kAttributes> rows;

  const SurveyRow* find(Attribute a, std::string_view category) const;
};

SurveySummary load_survey(const std::filesystem::path& path);
SurveySummary parse_survey(std::string_view json_text);

struct SizeClass {
  std::string label;
  double fraction = 0.0;
  std::vector<int> sizes;  // uniform within the class
  double required_area_m2 = 80.0;
};

struct IncomeClass {
  std::string label;
  double fraction = 0.0;
  double min = 0.0;  // monthly income, [min, max)
  double max = 0.0;
};

struct CarClass {
  std::string label;
  std::vector<int> counts;  // uniform within the class
};

struct PopulationConfig {
  std::vector<SizeClass> size_classes;
  std::vector<IncomeClass> income_classes;
  std::vector<CarClass> car_classes;
  /// P(car class | income class), rows follow income_classes.
  std::vector<std::vector<double>> cars_given_income;

  int adult_min_age = 20;
  int adult_max_age = 75;
  double child_member_probability = 0.75;  // for members beyond the first two
  int child_age_limit = 18;

  double zero_employed_probability = 0.05;
  double additional_worker_probability = 0.35;
  std::vector<std::pair<std::string, double>> professional_categories;
  double female_worker_probability = 0.307;

  double required_area_spread = 0.15;
  std::array<double, 2> rent_min_frac{0.10, 0.25};
  std::array<double, 2> rent_max_frac{0.30, 0.50};

  int hard_threshold = 8;

  /// Implied marginal P(car class) under the income marginal.
  std::vector<double> car_marginal() const;
  void validate() const;
};

PopulationConfig load_population_config(const std::filesystem::path& path);
PopulationConfig parse_population_config(std::string_view json_text);
PopulationConfig default_population_config();

struct ResidentialPreferences {
  std::array<int, kResidentialCriteria> importance{};
  std::array<double, kFacilityKinds> facility_weights{};
  std::array<double, kServiceKinds> transport_weights{};
  bool pollution_hard = false;
  bool restriction_hard = false;

  int importance_of(ResidentialCriterion c) const {
    return importance[static_cast<std::size_t>(c)];
  }
};

struct IncomeBand {
  double min_frac = 0.0;
  double max_frac = 0.0;
};

struct HouseholdAgent {
  AgentId id = 0;
  int size = 1;
  std::vector<int> member_ages;
  bool has_child = false;
  double monthly_income = 0.0;
  std::size_t size_class = 0;
  std::size_t income_class = 0;
  std::size_t car_class = 0;
  ZoneId former_zone = 0;
  int n_employed = 0;
  std::vector<std::string> professional_categories;
  int n_cars = 0;
  double required_area = 0.0;  // m²
  IncomeBand rent_band;
  ResidentialPreferences prefs;
  std::vector<std::size_t> workers;     // indices into Population::workers
  std::vector<ZoneId> workplace_zones;  // filled by assign_workplaces
};

enum class Gender : std::uint8_t { female, male };

struct WorkerAgent {
  AgentId id = 0;
  AgentId household_id = 0;
  std::size_t household_index = 0;
  Gender gender = Gender::male;
  std::string professional_category;
  ZoneId workplace_zone = 0;
  std::array<double, kCommuteCriteria> mode_prefs{};
};

struct Population {
  std::vector<HouseholdAgent> households;
  std::vector<WorkerAgent> workers;
  std::vector<std::string> size_labels;
  std::vector<std::string> income_labels;
  std::vector<std::string> car_labels;
};

/// Draws residential importances and derives the weight families.
ResidentialPreferences draw_preferences(const HouseholdAgent& agent, const SurveySummary& survey,
                                        const PopulationConfig& config, Rng& rng);

/// Commuting-criterion weights for one employed member.
std::array<double, kCommuteCriteria> draw_commute_preferences(const HouseholdAgent& agent,
                                                              const SurveySummary& survey,
                                                              const PopulationConfig& config,
                                                              Rng& rng);

/// Probability of an importance above 4: mean of the agent's size, income and
/// car rows over the attributes present in the survey.
double above_four_probability(const HouseholdAgent& agent, const PopulationConfig& config,
                              const SurveySummary& survey, bool commuting, std::size_t criterion);

/// Households and workers (without workplaces) in the sequential order:
/// income, size and ages; former zone, employment, cars, required area;
/// then preferences.
Population synthesize_households(const PopulationConfig& config, const SurveySummary& survey,
                                 const CityModel& city, std::size_t n, std::uint64_t seed);

/// Workplace ∝ the zone's employment rate for the worker's category.
void assign_workplaces(std::vector<WorkerAgent>& workers, const CityModel& city,
                       std::uint64_t seed);

/// Synthesis followed by workplace assignment.
Population synthesize_population(const PopulationConfig& config, const SurveySummary& survey,
                                 const CityModel& city, std::size_t n, std::uint64_t seed);

}  // namespace modalshift
