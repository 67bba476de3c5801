#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modalshift/city.hpp"
#include "modalshift/population.hpp"

namespace modalshift {

/// Column order of mode tables.
inline constexpr std::array<Mode, kModes> kReportModes = {Mode::car, Mode::subway, Mode::bus,
                                                          Mode::brt, Mode::taxi,   Mode::walk};
std::string_view report_label(Mode m);

enum class DistanceClass : std::uint8_t { under_5, from_5_to_15, over_15 };
inline constexpr std::size_t kDistanceClasses = 3;
DistanceClass distance_class(double km);
std::string_view to_string(DistanceClass c);

/// Everything the reports need about one worker after a run.
struct WorkerOutcome {
  AgentId worker = 0;
  AgentId household = 0;
  Gender gender = Gender::male;
  std::size_t size_class = 0;
  std::size_t income_class = 0;
  std::size_t car_class = 0;
  std::optional<ZoneId> home;  // empty when the household found no residence
  ZoneId work = 0;
  double distance_km = 0.0;  // home to work; meaningful when housed
  std::optional<Mode> mode;

  friend bool operator==(const WorkerOutcome&, const WorkerOutcome&) = default;
};

struct CategoryLabels {
  std::vector<std::string> size;
  std::vector<std::string> income;
  std::vector<std::string> car;
};
CategoryLabels labels_of(const Population& population);

/// One categorised group of workers; `members` holds outcome indices.
struct Category {
  std::string attribute;
  std::string label;
  std::vector<std::size_t> members;
};

/// Gender, size, income, car and distance classes, then the total. Distance
/// classes only hold housed workers.
std::vector<Category> categorize(std::span<const WorkerOutcome> outcomes, const CategoryLabels& labels);

struct ModeShareRow {
  std::string attribute;
  std::string category;
  std::size_t number = 0;
  double percentage = 0.0;
  std::array<double, kModes> share{};  // % of the row's workers with a mode, indexed by Mode
};

std::vector<ModeShareRow> mode_share_table(std::span<const WorkerOutcome> outcomes,
                                           const CategoryLabels& labels);

struct ShiftRow {
  std::string attribute;
  std::string category;
  std::size_t number = 0;
  double percentage = 0.0;
  double relocation = 0.0;          // % of the row's workers whose home changed
  std::array<double, kModes> delta{};  // scenario share − baseline share, points
};

struct ZoneDelta {
  ZoneId zone = 0;
  Point centroid;
  std::size_t baseline_workers = 0;
  std::size_t scenario_workers = 0;
  std::array<double, kModes> delta{};
};

struct ShiftReport {
  std::vector<ShiftRow> rows;
  std::vector<ZoneDelta> zones;

  const ShiftRow& total() const { return rows.back(); }
};

/// Categories come from the baseline run. Throws InputError when the two
/// runs do not cover the same workers in the same order.
ShiftReport diff_report(std::span<const WorkerOutcome> baseline,
                        std::span<const WorkerOutcome> scenario, const CategoryLabels& labels,
                        const CityModel& city);

/// Fixed-precision number with -0 printed as 0.
std::string format_fixed(double v, int decimals, bool sign = false);

std::string mode_share_csv(std::span<const ModeShareRow> rows);
std::string shift_csv(const ShiftReport& report);
std::string zone_delta_csv(const ShiftReport& report);

/// Per-worker decisions; the class labels travel with the rows so a file
/// can be re-read without the population.
std::string outcomes_csv(std::span<const WorkerOutcome> outcomes, const CategoryLabels& labels);
std::vector<WorkerOutcome> parse_outcomes_csv(std::string_view text, CategoryLabels& labels);

/// zone_id,x,y,housed per zone.
std::string housing_csv(const CityModel& city, std::span<const std::int64_t> housed_per_zone);

}  // namespace modalshift
