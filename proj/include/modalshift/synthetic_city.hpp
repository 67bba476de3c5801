#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "modalshift/city.hpp"
#include "modalshift/los.hpp"

namespace modalshift {

struct SyntheticCityParams {
  int grid_width = 8;   // zones along x
  int grid_height = 8;  // zones along y
  double zone_size_km = 1.2;
  double facilities_per_zone = 1.5;  // per facility kind
  int bus_line_spacing = 2;          // every n-th row and column carries a bus line
  bool subway = true;
  bool brt = true;
  bool highway = true;
  std::string name = "synthetic";

  void validate() const;
};

struct CityManifest {
  std::size_t zones = 0;
  std::size_t facilities = 0;
  std::size_t services = 0;
  std::map<std::string, std::size_t> network_nodes;
  std::map<std::string, std::size_t> network_edges;
};

/// Grid city: square zones, rent rising northwards, a polluted restricted
/// core, random facilities, a road grid shared by car/taxi/walk, bus lines on
/// a coarser grid, one cross of subway lines, a BRT line and a highway.
/// Deterministic for a fixed seed.
CityModel generate_synthetic_city(const SyntheticCityParams& params, std::uint64_t seed,
                                  const AccessParams& access = {});

CityManifest city_manifest(const CityModel& city);
std::string serialize_manifest(const CityManifest& manifest);

/// Transit connectors from each zone centroid to the nearest nodes within the
/// connector radius: walk when close, local taxi otherwise.
std::vector<ZoneConnector> transit_connectors(std::span<const Zone> zones,
                                              std::span<const Point> nodes,
                                              const AccessParams& access);

}  // namespace modalshift
