#include "modalshift/synthetic_city.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "modalshift/rng.hpp"

namespace modalshift {

void SyntheticCityParams::validate() const {
  if (grid_width < 2 || grid_height < 2) throw InputError("synthetic city: grid must be at least 2x2");
  if (!(zone_size_km > 0.0)) throw InputError("synthetic city: zone_size_km must be positive");
  if (facilities_per_zone < 0.0) throw InputError("synthetic city: facilities_per_zone must be >= 0");
  if (bus_line_spacing < 1) throw InputError("synthetic city: bus_line_spacing must be >= 1");
}

std::vector<ZoneConnector> transit_connectors(std::span<const Zone> zones,
                                              std::span<const Point> nodes,
                                              const AccessParams& access) {
  std::vector<ZoneConnector> out;
  std::vector<std::pair<double, std::size_t>> near;
  for (const Zone& z : zones) {
    near.clear();
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const double d = distance(z.centroid, nodes[n]);
      if (d <= access.connector_radius_km) near.emplace_back(d, n);
    }
    std::sort(near.begin(), near.end());
    if (near.size() > access.max_connectors) near.resize(access.max_connectors);
    for (const auto& [d, n] : near) {
      ZoneConnector c;
      c.zone = z.id;
      c.node = n;
      c.distance_km = d;
      if (d <= access.walk_max_km) {
        c.time_min = d / access.walk_speed_kmh * 60.0;
      } else {
        c.time_min = access.local_taxi_wait_min + d / access.local_taxi_speed_kmh * 60.0;
        c.cost = access.local_taxi_flat + access.local_taxi_per_km * d;
      }
      out.push_back(c);
    }
  }
  return out;
}

namespace {

struct Builder {
  const SyntheticCityParams& p;
  int w;
  int h;
  double s;

  Point centroid(int x, int y) const { return {(x + 0.5) * s, (y + 0.5) * s}; }
  std::size_t cell(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
  }
};

// A transit line through grid cells; consecutive cells become edges.
void add_line(ModeNetwork& net, std::vector<std::size_t>& node_of_cell, const Builder& b,
              const std::vector<std::pair<int, int>>& cells, double speed, std::int64_t line) {
  std::size_t prev = SIZE_MAX;
  for (const auto& [x, y] : cells) {
    std::size_t& node = node_of_cell[b.cell(x, y)];
    if (node == SIZE_MAX) {
      node = net.nodes.size();
      net.nodes.push_back(b.centroid(x, y));
    }
    if (prev != SIZE_MAX) {
      net.edges.push_back({prev, node, distance(net.nodes[prev], net.nodes[node]), speed, line});
    }
    prev = node;
  }
}

}  // namespace

CityModel generate_synthetic_city(const SyntheticCityParams& params, std::uint64_t seed,
                                  const AccessParams& access) {
  params.validate();
  Rng rng(derive_seed(seed, Stream::city, 0));
  const Builder b{params, params.grid_width, params.grid_height, params.zone_size_km};
  const int w = b.w;
  const int h = b.h;
  const double s = b.s;
  const Point centre{w * s / 2.0, h * s / 2.0};
  const double span = std::max(w, h) * s;

  std::vector<Zone> zones;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Zone z;
      z.id = static_cast<ZoneId>(b.cell(x, y)) + 1;
      z.centroid = b.centroid(x, y);
      z.polygon = {{x * s, y * s}, {(x + 1) * s, y * s}, {(x + 1) * s, (y + 1) * s}, {x * s, (y + 1) * s}};
      z.area = s * s;
      z.residential_area = z.area * rng.uniform(0.3, 0.7);
      const double north = static_cast<double>(y) / (h - 1);
      const double core = distance(z.centroid, centre) / span;
      // Cheap south, expensive north; a mild premium near the core.
      z.rent_per_m2 = 0.015 * std::pow(10.0, north) * (1.0 + 0.3 * std::max(0.0, 0.3 - core)) *
                      rng.uniform(0.9, 1.1);
      z.pollution = core < 0.15 ? 4 : core < 0.3 ? 3 : (north < 0.4 ? 2 : 1);
      z.traffic_restricted = core < 0.12;
      const double central = std::max(0.0, 1.0 - core / 0.5);
      z.employment_rate["office"] = 0.05 + 0.30 * central;
      z.employment_rate["service"] = 0.10 + 0.15 * central;
      z.employment_rate["industry"] = 0.02 + 0.20 * (1.0 - north) * (1.0 - central);
      z.employment_rate["education"] = 0.05;
      zones.push_back(std::move(z));
    }
  }

  std::vector<Facility> facilities;
  const auto per_kind = static_cast<std::size_t>(std::llround(params.facilities_per_zone * w * h));
  for (std::size_t k = 0; k < kFacilityKinds; ++k) {
    for (std::size_t i = 0; i < per_kind; ++i) {
      Facility f;
      f.id = static_cast<std::int64_t>(facilities.size()) + 1;
      f.kind = static_cast<FacilityKind>(k);
      f.location = {rng.uniform(0.0, w * s), rng.uniform(0.0, h * s)};
      f.area = rng.uniform(0.002, 0.05);
      facilities.push_back(f);
    }
  }

  std::vector<TransportService> services;
  auto add_service = [&](ServiceKind kind, std::vector<Point> geometry) {
    TransportService t;
    t.id = static_cast<std::int64_t>(services.size()) + 1;
    t.kind = kind;
    t.geometry = std::move(geometry);
    t.service_range_km = default_service_range(kind);
    services.push_back(std::move(t));
  };

  std::vector<ModeNetwork> networks;

  // Road grid through the centroids, shared by car, taxi and walking.
  auto road = [&](Mode mode, double speed, double core_speed, double connector_min, double connector_km) {
    ModeNetwork net;
    net.mode = mode;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) net.nodes.push_back(b.centroid(x, y));
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool slow = zones[b.cell(x, y)].traffic_restricted;
        const double v = slow ? core_speed : speed;
        if (x + 1 < w) net.edges.push_back({b.cell(x, y), b.cell(x + 1, y), s * 1.1, v, 0});
        if (y + 1 < h) net.edges.push_back({b.cell(x, y), b.cell(x, y + 1), s * 1.1, v, 0});
      }
    }
    for (const Zone& z : zones) {
      net.connectors.push_back({z.id, b.cell(static_cast<int>((z.id - 1) % w), static_cast<int>((z.id - 1) / w)),
                                connector_km, connector_min, 0.0});
    }
    return net;
  };
  networks.push_back(road(Mode::walk, 4.5, 4.5, 0.0, 0.0));
  // Car access time covers walking to the car and parking.
  ModeNetwork car = road(Mode::car, 22.0, 12.0, 8.0, 0.0);
  networks.push_back(road(Mode::taxi, 22.0, 12.0, 5.0, 0.0));

  if (params.highway) {
    // Western north-south highway one column in from the edge.
    const int hx = std::min(1, w - 1);
    std::vector<Point> line;
    for (int y = 0; y < h; ++y) {
      const std::size_t a = car.nodes.size();
      car.nodes.push_back({b.centroid(hx, y).x + 0.25 * s, b.centroid(hx, y).y});
      line.push_back(car.nodes.back());
      car.edges.push_back({b.cell(hx, y), a, 0.25 * s, 20.0, 0});
      if (y > 0) car.edges.push_back({a - 1, a, s, 70.0, 0});
    }
    add_service(ServiceKind::highway, line);
  }
  networks.push_back(std::move(car));

  // Buses on every n-th row and column.
  ModeNetwork bus;
  bus.mode = Mode::bus;
  {
    std::vector<std::size_t> node_of_cell(static_cast<std::size_t>(w * h), SIZE_MAX);
    std::int64_t line = 1;
    for (int y = 0; y < h; y += params.bus_line_spacing) {
      std::vector<std::pair<int, int>> cells;
      for (int x = 0; x < w; ++x) cells.emplace_back(x, y);
      add_line(bus, node_of_cell, b, cells, 14.0, line++);
    }
    for (int x = 0; x < w; x += params.bus_line_spacing) {
      std::vector<std::pair<int, int>> cells;
      for (int y = 0; y < h; ++y) cells.emplace_back(x, y);
      add_line(bus, node_of_cell, b, cells, 14.0, line++);
    }
    for (const Point& n : bus.nodes) add_service(ServiceKind::bus_stop, {n});
    bus.connectors = transit_connectors(zones, bus.nodes, access);
  }
  networks.push_back(std::move(bus));

  if (params.subway) {
    // Two lines crossing in the northern half, stations every other zone.
    ModeNetwork sub;
    sub.mode = Mode::subway;
    std::vector<std::size_t> node_of_cell(static_cast<std::size_t>(w * h), SIZE_MAX);
    const int row = std::min(h - 1, (2 * h) / 3);
    const int col = w / 2;
    std::vector<std::pair<int, int>> east_west;
    std::vector<std::pair<int, int>> north_south;
    for (int x = 0; x < w; ++x) {
      if (x % 2 == col % 2) east_west.emplace_back(x, row);
    }
    for (int y = h / 3; y < h; ++y) {
      if (y % 2 == row % 2) north_south.emplace_back(col, y);
    }
    add_line(sub, node_of_cell, b, east_west, 35.0, 1);
    add_line(sub, node_of_cell, b, north_south, 35.0, 2);
    for (const Point& n : sub.nodes) add_service(ServiceKind::subway_station, {n});
    sub.connectors = transit_connectors(zones, sub.nodes, access);
    networks.push_back(std::move(sub));
  }

  if (params.brt) {
    ModeNetwork brt;
    brt.mode = Mode::brt;
    std::vector<std::size_t> node_of_cell(static_cast<std::size_t>(w * h), SIZE_MAX);
    const int row = std::max(0, h / 2 - 1);
    std::vector<std::pair<int, int>> cells;
    for (int x = w / 2; x < w; ++x) cells.emplace_back(x, row);
    add_line(brt, node_of_cell, b, cells, 20.0, 1);
    for (const Point& n : brt.nodes) add_service(ServiceKind::brt_stop, {n});
    brt.connectors = transit_connectors(zones, brt.nodes, access);
    networks.push_back(std::move(brt));
  }

  CityModel city({params.name, seed}, std::move(zones), std::move(facilities), std::move(services),
                 std::move(networks));
  city.validate();
  return city;
}

CityManifest city_manifest(const CityModel& city) {
  CityManifest m;
  m.zones = city.zone_count();
  m.facilities = city.facilities().size();
  m.services = city.services().size();
  for (const ModeNetwork& n : city.networks()) {
    m.network_nodes[std::string(to_string(n.mode))] = n.nodes.size();
    m.network_edges[std::string(to_string(n.mode))] = n.edges.size();
  }
  return m;
}

std::string serialize_manifest(const CityManifest& manifest) {
  nlohmann::json j;
  j["zones"] = manifest.zones;
  j["facilities"] = manifest.facilities;
  j["services"] = manifest.services;
  j["network_nodes"] = manifest.network_nodes;
  j["network_edges"] = manifest.network_edges;
  return j.dump(1) + "\n";
}

}  // namespace modalshift
