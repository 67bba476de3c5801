#include "modalshift/city.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"

namespace modalshift {

using detail::json;

namespace {

constexpr std::array<std::string_view, kFacilityKinds> kFacilityNames = {
    "commercial", "educational", "green_recreational", "remedial", "cultural"};
constexpr std::array<std::string_view, kServiceKinds> kServiceNames = {
    "highway", "subway_station", "brt_stop", "bus_stop"};
constexpr std::array<std::string_view, kModes> kModeNames = {"walk", "car",    "bus",
                                                             "brt",  "subway", "taxi"};

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<std::string_view, N>& names,
                const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  throw InputError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

std::string rec(const char* kind, std::int64_t id) {
  return std::string(kind) + " " + std::to_string(id);
}

}  // namespace

std::string_view to_string(FacilityKind k) { return kFacilityNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(ServiceKind k) { return kServiceNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(Mode m) { return kModeNames[static_cast<std::size_t>(m)]; }

FacilityKind parse_facility_kind(std::string_view s) {
  return parse_enum<FacilityKind>(s, kFacilityNames, "facility kind");
}
ServiceKind parse_service_kind(std::string_view s) {
  return parse_enum<ServiceKind>(s, kServiceNames, "service kind");
}
Mode parse_mode(std::string_view s) { return parse_enum<Mode>(s, kModeNames, "mode"); }

double default_service_range(ServiceKind k) {
  switch (k) {
    case ServiceKind::highway: return 2.0;
    case ServiceKind::subway_station: return 1.9;
    case ServiceKind::brt_stop: return 1.7;
    case ServiceKind::bus_stop: return 1.2;
  }
  return 1.0;
}

CityModel::CityModel(CityMetadata meta, std::vector<Zone> zones, std::vector<Facility> facilities,
                     std::vector<TransportService> services, std::vector<ModeNetwork> networks)
    : meta_(std::move(meta)),
      zones_(std::move(zones)),
      facilities_(std::move(facilities)),
      services_(std::move(services)),
      networks_(std::move(networks)) {
  for (std::size_t i = 0; i < zones_.size(); ++i) {
    if (!index_.emplace(zones_[i].id, i).second) {
      throw InputError("duplicate zone id " + std::to_string(zones_[i].id));
    }
  }
}

std::size_t CityModel::zone_index(ZoneId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown zone id " + std::to_string(id));
  return it->second;
}

const ModeNetwork* CityModel::network(Mode m) const {
  for (const auto& n : networks_) {
    if (n.mode == m) return &n;
  }
  return nullptr;
}

void CityModel::validate() const {
  for (const Zone& z : zones_) {
    if (!(z.area > 0.0)) throw InputError("non-positive area, " + rec("zone", z.id));
    if (z.polygon.size() < 3) throw InputError("polygon needs at least 3 vertices, " + rec("zone", z.id));
    if (!(z.residential_area >= 0.0) || z.residential_area > z.area) {
      throw InputError("residential_area outside [0, area], " + rec("zone", z.id));
    }
    if (!(z.rent_per_m2 >= 0.0)) throw InputError("negative rent_per_m2, " + rec("zone", z.id));
    if (z.pollution < 1 || z.pollution > 5) {
      throw InputError("pollution outside 1..5, " + rec("zone", z.id));
    }
    double employment = 0.0;
    for (const auto& [cat, rate] : z.employment_rate) {
      if (!(rate >= 0.0)) throw InputError("negative employment rate '" + cat + "', " + rec("zone", z.id));
      employment += rate;
    }
    if (employment > 1.0 + 1e-9) throw InputError("employment rates sum above 1, " + rec("zone", z.id));
  }
  for (const Facility& f : facilities_) {
    if (!(f.area > 0.0)) throw InputError("non-positive area, " + rec("facility", f.id));
  }
  for (const TransportService& s : services_) {
    if (!(s.service_range_km > 0.0)) throw InputError("non-positive service range, " + rec("service", s.id));
    if (s.geometry.empty()) throw InputError("empty geometry, " + rec("service", s.id));
  }
  std::array<bool, kModes> seen{};
  for (const ModeNetwork& n : networks_) {
    const std::string where = "network " + std::string(to_string(n.mode));
    if (seen[static_cast<std::size_t>(n.mode)]) throw InputError("duplicate " + where);
    seen[static_cast<std::size_t>(n.mode)] = true;
    for (std::size_t e = 0; e < n.edges.size(); ++e) {
      const NetworkEdge& edge = n.edges[e];
      if (edge.from >= n.nodes.size() || edge.to >= n.nodes.size()) {
        throw InputError("dangling reference: edge " + std::to_string(e) + " of " + where);
      }
      if (!(edge.length_km > 0.0) || !(edge.speed_kmh > 0.0)) {
        throw InputError("non-positive length or speed: edge " + std::to_string(e) + " of " + where);
      }
    }
    for (const ZoneConnector& c : n.connectors) {
      if (!has_zone(c.zone)) {
        throw InputError("dangling reference: connector zone " + std::to_string(c.zone) + " of " + where);
      }
      if (c.node >= n.nodes.size()) {
        throw InputError("dangling reference: connector node " + std::to_string(c.node) + " of " + where);
      }
      if (!(c.distance_km >= 0.0) || !(c.time_min >= 0.0) || !(c.cost >= 0.0)) {
        throw InputError("negative connector attribute, zone " + std::to_string(c.zone) + " of " + where);
      }
    }
  }
}

double zone_distance(const CityModel& city, ZoneId i, ZoneId j) {
  const Zone& a = city.zone(i);
  const Zone& b = city.zone(j);
  if (i == j) return 0.0;
  return distance(a.centroid, b.centroid);
}

// ---- serialisation ---------------------------------------------------------

CityModel parse_city(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "city file");
  const int version = detail::get<int>(doc, "schema_version", "city file");
  if (version != kCitySchemaVersion) {
    throw InputError("unsupported city schema_version " + std::to_string(version));
  }
  CityMetadata meta;
  meta.name = detail::get_or<std::string>(doc, "name", "", "city file");
  if (doc.contains("generator_seed") && !doc["generator_seed"].is_null()) {
    meta.generator_seed = detail::get<std::uint64_t>(doc, "generator_seed", "city file");
  }

  std::vector<Zone> zones;
  const json& jz = detail::field(doc, "zones", "city file");
  if (!jz.is_array()) throw InputError("schema violation: 'zones' must be an array");
  for (std::size_t i = 0; i < jz.size(); ++i) {
    const std::string where = "zones[" + std::to_string(i) + "]";
    const json& z = jz[i];
    Zone zone;
    zone.id = detail::get<ZoneId>(z, "id", where);
    const std::string w = where + " (zone " + std::to_string(zone.id) + ")";
    zone.polygon = detail::get_points(detail::field(z, "polygon", w), w + ".polygon");
    zone.centroid = detail::get_point(detail::field(z, "centroid", w), w + ".centroid");
    zone.area = detail::get<double>(z, "area", w);
    zone.residential_area = detail::get<double>(z, "residential_area", w);
    zone.rent_per_m2 = detail::get<double>(z, "rent_per_m2", w);
    zone.pollution = detail::get<int>(z, "pollution", w);
    zone.traffic_restricted = detail::get<bool>(z, "traffic_restricted", w);
    zone.employment_rate =
        detail::get_or<std::map<std::string, double>>(z, "employment_rate", {}, w);
    zones.push_back(std::move(zone));
  }

  std::vector<Facility> facilities;
  const json& jf = detail::field(doc, "facilities", "city file");
  if (!jf.is_array()) throw InputError("schema violation: 'facilities' must be an array");
  for (std::size_t i = 0; i < jf.size(); ++i) {
    const std::string where = "facilities[" + std::to_string(i) + "]";
    Facility f;
    f.id = detail::get<std::int64_t>(jf[i], "id", where);
    f.kind = parse_facility_kind(detail::get<std::string>(jf[i], "kind", where));
    f.location = detail::get_point(detail::field(jf[i], "location", where), where + ".location");
    f.area = detail::get<double>(jf[i], "area", where);
    facilities.push_back(f);
  }

  std::vector<TransportService> services;
  const json& js = detail::field(doc, "services", "city file");
  if (!js.is_array()) throw InputError("schema violation: 'services' must be an array");
  for (std::size_t i = 0; i < js.size(); ++i) {
    const std::string where = "services[" + std::to_string(i) + "]";
    TransportService s;
    s.id = detail::get<std::int64_t>(js[i], "id", where);
    s.kind = parse_service_kind(detail::get<std::string>(js[i], "kind", where));
    s.geometry = detail::get_points(detail::field(js[i], "geometry", where), where + ".geometry");
    s.service_range_km =
        detail::get_or<double>(js[i], "service_range_km", default_service_range(s.kind), where);
    services.push_back(std::move(s));
  }

  std::vector<ModeNetwork> networks;
  const json& jn = detail::field(doc, "networks", "city file");
  if (!jn.is_array()) throw InputError("schema violation: 'networks' must be an array");
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const std::string where = "networks[" + std::to_string(i) + "]";
    ModeNetwork n;
    n.mode = parse_mode(detail::get<std::string>(jn[i], "mode", where));
    n.nodes = detail::get_points(detail::field(jn[i], "nodes", where), where + ".nodes");
    const json& edges = detail::field(jn[i], "edges", where);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string we = where + ".edges[" + std::to_string(e) + "]";
      NetworkEdge edge;
      edge.from = detail::get<std::size_t>(edges[e], "from", we);
      edge.to = detail::get<std::size_t>(edges[e], "to", we);
      edge.length_km = detail::get<double>(edges[e], "length_km", we);
      edge.speed_kmh = detail::get<double>(edges[e], "speed_kmh", we);
      edge.line = detail::get_or<std::int64_t>(edges[e], "line", 0, we);
      n.edges.push_back(edge);
    }
    const json& conns = detail::field(jn[i], "connectors", where);
    for (std::size_t c = 0; c < conns.size(); ++c) {
      const std::string wc = where + ".connectors[" + std::to_string(c) + "]";
      ZoneConnector conn;
      conn.zone = detail::get<ZoneId>(conns[c], "zone", wc);
      conn.node = detail::get<std::size_t>(conns[c], "node", wc);
      conn.distance_km = detail::get<double>(conns[c], "distance_km", wc);
      conn.time_min = detail::get<double>(conns[c], "time_min", wc);
      conn.cost = detail::get_or<double>(conns[c], "cost", 0.0, wc);
      n.connectors.push_back(conn);
    }
    networks.push_back(std::move(n));
  }

  CityModel city(std::move(meta), std::move(zones), std::move(facilities), std::move(services),
                 std::move(networks));
  city.validate();
  return city;
}

CityModel load_city(const std::filesystem::path& path) {
  return parse_city(detail::read_text(path));
}

std::string serialize_city(const CityModel& city) {
  json doc;
  doc["schema_version"] = kCitySchemaVersion;
  doc["name"] = city.metadata().name;
  doc["generator_seed"] =
      city.metadata().generator_seed ? json(*city.metadata().generator_seed) : json(nullptr);
  json zones = json::array();
  for (const Zone& z : city.zones()) {
    zones.push_back({{"id", z.id},
                     {"centroid", detail::to_json(z.centroid)},
                     {"polygon", detail::to_json(z.polygon)},
                     {"area", z.area},
                     {"residential_area", z.residential_area},
                     {"rent_per_m2", z.rent_per_m2},
                     {"pollution", z.pollution},
                     {"traffic_restricted", z.traffic_restricted},
                     {"employment_rate", z.employment_rate}});
  }
  doc["zones"] = std::move(zones);
  json facilities = json::array();
  for (const Facility& f : city.facilities()) {
    facilities.push_back({{"id", f.id},
                          {"kind", std::string(to_string(f.kind))},
                          {"location", detail::to_json(f.location)},
                          {"area", f.area}});
  }
  doc["facilities"] = std::move(facilities);
  json services = json::array();
  for (const TransportService& s : city.services()) {
    services.push_back({{"id", s.id},
                        {"kind", std::string(to_string(s.kind))},
                        {"geometry", detail::to_json(s.geometry)},
                        {"service_range_km", s.service_range_km}});
  }
  doc["services"] = std::move(services);
  json networks = json::array();
  for (const ModeNetwork& n : city.networks()) {
    json edges = json::array();
    for (const NetworkEdge& e : n.edges) {
      edges.push_back({{"from", e.from},
                       {"to", e.to},
                       {"length_km", e.length_km},
                       {"speed_kmh", e.speed_kmh},
                       {"line", e.line}});
    }
    json conns = json::array();
    for (const ZoneConnector& c : n.connectors) {
      conns.push_back({{"zone", c.zone},
                       {"node", c.node},
                       {"distance_km", c.distance_km},
                       {"time_min", c.time_min},
                       {"cost", c.cost}});
    }
    networks.push_back({{"mode", std::string(to_string(n.mode))},
                        {"nodes", detail::to_json(n.nodes)},
                        {"edges", std::move(edges)},
                        {"connectors", std::move(conns)}});
  }
  doc["networks"] = std::move(networks);
  return doc.dump(1) + "\n";
}

void save_city(const CityModel& city, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << serialize_city(city);
}

}  // namespace modalshift
