#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modalshift/city.hpp"
#include "modalshift/los.hpp"

namespace modalshift {

enum class TdpKind : std::uint8_t { none, highway, subway, brt };
std::string_view to_string(TdpKind k);
TdpKind parse_tdp_kind(std::string_view s);

/// Rent multiplier applying to the part of a zone at distance [inner, outer)
/// from the development.
struct RentRing {
  double inner_km = 0.0;
  double outer_km = 0.0;
  double multiplier = 1.0;

  friend bool operator==(const RentRing&, const RentRing&) = default;
};

struct ScenarioSpec {
  std::string name;
  TdpKind kind = TdpKind::none;
  std::vector<Point> geometry;  // highway route, or a line's alignment
  std::vector<Point> stations;  // subway stations / BRT stops, in line order
  std::vector<RentRing> rings;  // empty: rents unchanged
  double speed_kmh = 0.0;       // 0: kind default
  double link_speed_kmh = 20.0;  // highway ramps and interchange walks use their own speed
  double link_radius_km = 1.0;   // ramps / interchanges to existing nodes within this distance
  std::vector<Mode> networks;    // highway only; default car

  /// True when the scenario changes nothing.
  bool identity() const { return kind == TdpKind::none || (geometry.empty() && stations.empty()); }
  double line_speed() const;
  /// Station points for transit kinds: the stations, else the alignment vertices.
  std::vector<Point> stops() const;
  /// Ring and parameter checks; throws InputError.
  void validate() const;
};

ScenarioSpec parse_scenario(std::string_view json_text);
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Throws InputError when any scenario point lies outside the city's extent.
void check_bounds(const CityModel& city, const ScenarioSpec& spec);

/// New city with the development's services, network elements and access
/// connectors appended. The input city is not modified.
CityModel apply_tdp(const CityModel& city, const ScenarioSpec& spec, const AccessParams& access = {});

/// ((A − Σ a_k) R + Σ a_k G_k R) / A; exactly R when every a_k is 0.
double updated_rent(double rent, double zone_area, std::span<const double> ring_areas,
                    std::span<const double> multipliers);

/// New city whose rents reflect the scenario's rings, with ring areas measured on
/// the analysis raster. Rings are measured around stations for transit kinds
/// and around the route for highways.
CityModel update_rents(const CityModel& city, const ScenarioSpec& spec);

/// check_bounds, apply_tdp and update_rents.
CityModel scenario_city(const CityModel& city, const ScenarioSpec& spec, const AccessParams& access = {});

}  // namespace modalshift
