#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "modalshift/common.hpp"
#include "modalshift/geometry.hpp"

namespace modalshift {

inline constexpr int kCitySchemaVersion = 1;

enum class FacilityKind : std::uint8_t { commercial, educational, green_recreational, remedial, cultural };
inline constexpr std::size_t kFacilityKinds = 5;

enum class ServiceKind : std::uint8_t { highway, subway_station, brt_stop, bus_stop };
inline constexpr std::size_t kServiceKinds = 4;

enum class Mode : std::uint8_t { walk, car, bus, brt, subway, taxi };
inline constexpr std::size_t kModes = 6;
inline constexpr std::array<Mode, kModes> kAllModes = {Mode::walk, Mode::car,    Mode::bus,
                                                       Mode::brt,  Mode::subway, Mode::taxi};

std::string_view to_string(FacilityKind k);
std::string_view to_string(ServiceKind k);
std::string_view to_string(Mode m);
FacilityKind parse_facility_kind(std::string_view s);
ServiceKind parse_service_kind(std::string_view s);
Mode parse_mode(std::string_view s);

/// Default service range per kind, km.
double default_service_range(ServiceKind k);

struct Zone {
  ZoneId id = 0;
  Point centroid;
  std::vector<Point> polygon;
  double area = 0.0;              // km²
  double residential_area = 0.0;  // km²
  double rent_per_m2 = 0.0;
  int pollution = 1;  // 1 clean, 2 medium, 3..5 increasingly polluted
  bool traffic_restricted = false;
  std::map<std::string, double> employment_rate;

  friend bool operator==(const Zone&, const Zone&) = default;
};

struct Facility {
  std::int64_t id = 0;
  FacilityKind kind = FacilityKind::commercial;
  Point location;
  double area = 0.0;  // km²

  friend bool operator==(const Facility&, const Facility&) = default;
};

struct TransportService {
  std::int64_t id = 0;
  ServiceKind kind = ServiceKind::bus_stop;
  std::vector<Point> geometry;  // one point, or a polyline
  double service_range_km = 0.0;

  friend bool operator==(const TransportService&, const TransportService&) = default;
};

struct NetworkEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double length_km = 0.0;
  double speed_kmh = 0.0;
  std::int64_t line = 0;  // boarding a different line costs a transfer

  friend bool operator==(const NetworkEdge&, const NetworkEdge&) = default;
};

/// Zone-to-node access link; used for both access and egress.
struct ZoneConnector {
  ZoneId zone = 0;
  std::size_t node = 0;
  double distance_km = 0.0;
  double time_min = 0.0;
  double cost = 0.0;

  friend bool operator==(const ZoneConnector&, const ZoneConnector&) = default;
};

struct ModeNetwork {
  Mode mode = Mode::walk;
  std::vector<Point> nodes;
  std::vector<NetworkEdge> edges;
  std::vector<ZoneConnector> connectors;

  friend bool operator==(const ModeNetwork&, const ModeNetwork&) = default;
};

struct CityMetadata {
  std::string name;
  std::optional<std::uint64_t> generator_seed;

  friend bool operator==(const CityMetadata&, const CityMetadata&) = default;
};

/// The spatial world. Treated as immutable once validated; transformations
/// (scenarios) produce new models.
class CityModel {
public:
  CityModel() = default;
  CityModel(CityMetadata meta, std::vector<Zone> zones, std::vector<Facility> facilities,
            std::vector<TransportService> services, std::vector<ModeNetwork> networks);

  const CityMetadata& metadata() const { return meta_; }
  const std::vector<Zone>& zones() const { return zones_; }
  const std::vector<Facility>& facilities() const { return facilities_; }
  const std::vector<TransportService>& services() const { return services_; }
  const std::vector<ModeNetwork>& networks() const { return networks_; }

  std::size_t zone_count() const { return zones_.size(); }
  bool has_zone(ZoneId id) const { return index_.contains(id); }
  /// Throws InputError for an unknown id.
  std::size_t zone_index(ZoneId id) const;
  const Zone& zone(ZoneId id) const { return zones_[zone_index(id)]; }

  const ModeNetwork* network(Mode m) const;

  /// Checks every invariant; throws InputError naming the record.
  void validate() const;

  friend bool operator==(const CityModel& a, const CityModel& b) {
    return a.meta_ == b.meta_ && a.zones_ == b.zones_ && a.facilities_ == b.facilities_ &&
           a.services_ == b.services_ && a.networks_ == b.networks_;
  }

private:
  CityMetadata meta_;
  std::vector<Zone> zones_;
  std::vector<Facility> facilities_;
  std::vector<TransportService> services_;
  std::vector<ModeNetwork> networks_;
  std::unordered_map<ZoneId, std::size_t> index_;
};

CityModel load_city(const std::filesystem::path& path);
CityModel parse_city(std::string_view json_text);
std::string serialize_city(const CityModel& city);
void save_city(const CityModel& city, const std::filesystem::path& path);

/// Euclidean centroid distance, km.
double zone_distance(const CityModel& city, ZoneId i, ZoneId j);

}  // namespace modalshift
