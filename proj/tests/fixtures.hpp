#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "modalshift/city.hpp"
#include "modalshift/population.hpp"
#include "modalshift/synthetic_city.hpp"

namespace fixtures {

using namespace modalshift;

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(MODALSHIFT_DATA_DIR) / rel;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("modalshift-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
  std::filesystem::path path_;
};

/// Axis-aligned rectangular zone.
inline Zone rect_zone(ZoneId id, double x0, double y0, double x1, double y1) {
  Zone z;
  z.id = id;
  z.polygon = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  z.centroid = {(x0 + x1) / 2, (y0 + y1) / 2};
  z.area = (x1 - x0) * (y1 - y0);
  z.residential_area = z.area / 2;
  z.rent_per_m2 = 0.02;
  z.pollution = 1;
  z.employment_rate = {{"office", 0.5}};
  return z;
}

inline Zone square_zone(ZoneId id, double x0, double y0, double size) {
  return rect_zone(id, x0, y0, x0 + size, y0 + size);
}

/// Row-major grid of unit-size square zones with ids 1..w*h.
inline std::vector<Zone> grid_zones(int w, int h, double size = 1.0) {
  std::vector<Zone> zones;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      zones.push_back(square_zone(1 + y * w + x, x * size, y * size, size));
    }
  }
  return zones;
}

inline CityModel make_city(std::vector<Zone> zones, std::vector<Facility> facilities = {},
                           std::vector<TransportService> services = {},
                           std::vector<ModeNetwork> networks = {}) {
  return CityModel(CityMetadata{"fixture", std::nullopt}, std::move(zones), std::move(facilities),
                   std::move(services), std::move(networks));
}

inline CityModel synthetic(std::uint64_t seed, int w = 10, int h = 6) {
  SyntheticCityParams p;
  p.grid_width = w;
  p.grid_height = h;
  p.zone_size_km = 1.0;
  p.name = "fixture";
  return generate_synthetic_city(p, seed);
}

/// Household with a wide rent band and no active preferences.
inline HouseholdAgent household(AgentId id, ZoneId former, int size = 2, double income = 20.0) {
  HouseholdAgent h;
  h.id = id;
  h.size = size;
  h.member_ages.assign(static_cast<std::size_t>(size), 40);
  h.monthly_income = income;
  h.former_zone = former;
  h.required_area = 80.0;
  h.rent_band = {0.0, 1.0};
  return h;
}

}  // namespace fixtures
