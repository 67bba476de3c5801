#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "modalshift/city.hpp"

namespace modalshift {

struct ModeTariff {
  double flat_fare = 0.0;  // charged once when the network is boarded
  double per_km = 0.0;     // per in-network km
};

/// Parameters for building zone connectors to transit stops: walk when the
/// stop is near, otherwise take a local taxi.
struct AccessParams {
  double walk_speed_kmh = 4.5;
  double walk_max_km = 0.8;
  double local_taxi_speed_kmh = 20.0;
  double local_taxi_wait_min = 3.0;
  double local_taxi_flat = 0.002;
  double local_taxi_per_km = 0.004;
  double connector_radius_km = 2.0;
  std::size_t max_connectors = 3;
};

struct TariffConfig {
  std::array<ModeTariff, kModes> tariffs{};
  double transfer_penalty_min = 5.0;
  double car_restricted_surcharge = 0.0;  // added when either trip end is restricted
  double walk_cutoff_km = 5.0;
  AccessParams access;

  const ModeTariff& tariff(Mode m) const { return tariffs[static_cast<std::size_t>(m)]; }
};

TariffConfig load_tariffs(const std::filesystem::path& path);
TariffConfig parse_tariffs(std::string_view json_text);

struct LOS {
  double cost = 0.0;
  double in_vehicle_time = 0.0;      // min
  double out_of_vehicle_time = 0.0;  // min
  double network_distance = 0.0;     // km
  int transfers = 0;
  bool available = false;
};

/// Shortest-path LOS from one origin zone to every zone on one mode network,
/// indexed by zone index. Paths minimise in-vehicle plus out-of-vehicle time.
std::vector<LOS> los_from_origin(const CityModel& city, Mode mode, ZoneId origin,
                                 const TariffConfig& tariffs);

LOS compute_los(const CityModel& city, ZoneId origin, ZoneId dest, Mode mode,
                const TariffConfig& tariffs);

/// Dense per-mode OD table for a city. Read-only after construction.
class LosTable {
public:
  LosTable(const CityModel& city, const TariffConfig& tariffs, unsigned workers = 1);

  const LOS& at(Mode mode, std::size_t origin_index, std::size_t dest_index) const {
    return table_[(static_cast<std::size_t>(mode) * n_ + origin_index) * n_ + dest_index];
  }

private:
  std::size_t n_ = 0;
  std::vector<LOS> table_;
};

}  // namespace modalshift
