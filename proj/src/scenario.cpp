#include "modalshift/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "modalshift/coverage.hpp"
#include "modalshift/synthetic_city.hpp"

namespace modalshift {

using detail::json;

std::string_view to_string(TdpKind k) {
  switch (k) {
    case TdpKind::none: return "none";
    case TdpKind::highway: return "highway";
    case TdpKind::subway: return "subway";
    case TdpKind::brt: return "brt";
  }
  return "none";
}

TdpKind parse_tdp_kind(std::string_view s) {
  for (TdpKind k : {TdpKind::none, TdpKind::highway, TdpKind::subway, TdpKind::brt}) {
    if (s == to_string(k)) return k;
  }
  throw InputError("unknown scenario kind '" + std::string(s) + "'");
}

double ScenarioSpec::line_speed() const {
  if (speed_kmh > 0.0) return speed_kmh;
  switch (kind) {
    case TdpKind::highway: return 70.0;
    case TdpKind::subway: return 35.0;
    case TdpKind::brt: return 20.0;
    case TdpKind::none: break;
  }
  return 1.0;
}

std::vector<Point> ScenarioSpec::stops() const { return stations.empty() ? geometry : stations; }

void ScenarioSpec::validate() const {
  if (speed_kmh < 0.0 || !(link_speed_kmh > 0.0) || link_radius_km < 0.0) {
    throw InputError("scenario '" + name + "': speeds must be positive and link_radius_km >= 0");
  }
  if (kind == TdpKind::highway && !identity() && geometry.size() < 2) {
    throw InputError("scenario '" + name + "': a highway needs at least two route points");
  }
  if ((kind == TdpKind::subway || kind == TdpKind::brt) && !identity() && stops().size() < 2) {
    throw InputError("scenario '" + name + "': a transit line needs at least two stations");
  }
  std::vector<RentRing> sorted = rings;
  std::sort(sorted.begin(), sorted.end(),
            [](const RentRing& a, const RentRing& b) { return a.inner_km < b.inner_km; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const RentRing& r = sorted[i];
    if (!(r.inner_km >= 0.0) || !(r.inner_km < r.outer_km)) {
      throw InputError("scenario '" + name + "': ring needs 0 <= inner_km < outer_km");
    }
    if (!(r.multiplier > 0.0)) throw InputError("scenario '" + name + "': ring multiplier must be positive");
    if (i > 0 && r.inner_km < sorted[i - 1].outer_km) {
      throw InputError("scenario '" + name + "': ring overlap between [" +
                       std::to_string(sorted[i - 1].inner_km) + ", " +
                       std::to_string(sorted[i - 1].outer_km) + ") and [" +
                       std::to_string(r.inner_km) + ", " + std::to_string(r.outer_km) + ")");
    }
  }
}

ScenarioSpec parse_scenario(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "scenario file");
  const std::string w = "scenario file";
  ScenarioSpec s;
  s.name = detail::get_or<std::string>(doc, "name", "", w);
  s.kind = parse_tdp_kind(detail::get<std::string>(doc, "kind", w));
  if (doc.contains("geometry")) s.geometry = detail::get_points(doc["geometry"], "scenario geometry");
  if (doc.contains("stations")) s.stations = detail::get_points(doc["stations"], "scenario stations");
  if (doc.contains("rings")) {
    const json& rings = doc["rings"];
    if (!rings.is_array()) throw InputError("schema violation: scenario rings must be an array");
    for (std::size_t i = 0; i < rings.size(); ++i) {
      const std::string where = "scenario rings[" + std::to_string(i) + "]";
      s.rings.push_back({detail::get<double>(rings[i], "inner_km", where),
                         detail::get<double>(rings[i], "outer_km", where),
                         detail::get<double>(rings[i], "multiplier", where)});
    }
  }
  s.speed_kmh = detail::get_or<double>(doc, "speed_kmh", 0.0, w);
  s.link_speed_kmh = detail::get_or<double>(doc, "link_speed_kmh", s.link_speed_kmh, w);
  s.link_radius_km = detail::get_or<double>(doc, "link_radius_km", s.link_radius_km, w);
  if (doc.contains("networks")) {
    for (const auto& m : detail::get<std::vector<std::string>>(doc, "networks", w)) {
      s.networks.push_back(parse_mode(m));
    }
  }
  s.validate();
  return s;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  return parse_scenario(detail::read_text(path));
}

void check_bounds(const CityModel& city, const ScenarioSpec& spec) {
  std::vector<Point> all;
  for (const Zone& z : city.zones()) all.insert(all.end(), z.polygon.begin(), z.polygon.end());
  if (all.empty()) throw InputError("city has no zones");
  const BoundingBox box = bounding_box(all);
  auto check = [&](const std::vector<Point>& pts) {
    for (const Point& p : pts) {
      if (!box.contains(p)) {
        throw InputError("scenario '" + spec.name + "': point [" + std::to_string(p.x) + ", " +
                         std::to_string(p.y) + "] outside city bounds");
      }
    }
  };
  check(spec.geometry);
  check(spec.stations);
}

namespace {

std::int64_t next_line_id(const ModeNetwork& net) {
  std::int64_t line = 0;
  for (const NetworkEdge& e : net.edges) line = std::max(line, e.line);
  return line + 1;
}

ModeNetwork& network_for(std::vector<ModeNetwork>& networks, Mode m) {
  for (ModeNetwork& n : networks) {
    if (n.mode == m) return n;
  }
  networks.push_back(ModeNetwork{m, {}, {}, {}});
  return networks.back();
}

// Link length floor so coincident points still make a valid edge.
constexpr double kMinLinkKm = 0.01;

}  // namespace

CityModel apply_tdp(const CityModel& city, const ScenarioSpec& spec, const AccessParams& access) {
  spec.validate();
  if (spec.identity()) return city;
  std::vector<TransportService> services = city.services();
  std::vector<ModeNetwork> networks = city.networks();
  std::int64_t service_id = 0;
  for (const TransportService& s : services) service_id = std::max(service_id, s.id);
  auto add_service = [&](ServiceKind kind, std::vector<Point> geometry) {
    services.push_back({++service_id, kind, std::move(geometry), default_service_range(kind)});
  };

  if (spec.kind == TdpKind::highway) {
    add_service(ServiceKind::highway, spec.geometry);
    const std::vector<Mode> modes = spec.networks.empty() ? std::vector<Mode>{Mode::car} : spec.networks;
    for (Mode m : modes) {
      ModeNetwork& net = network_for(networks, m);
      const std::size_t existing = net.nodes.size();
      const std::int64_t line = next_line_id(net);
      for (std::size_t k = 0; k < spec.geometry.size(); ++k) {
        const std::size_t node = net.nodes.size();
        net.nodes.push_back(spec.geometry[k]);
        if (k > 0) {
          net.edges.push_back({node - 1, node,
                               std::max(kMinLinkKm, distance(spec.geometry[k - 1], spec.geometry[k])),
                               spec.line_speed(), line});
        }
        // Ramp to the nearest existing node.
        std::size_t best = SIZE_MAX;
        double best_d = 0.0;
        for (std::size_t n = 0; n < existing; ++n) {
          const double d = distance(net.nodes[n], spec.geometry[k]);
          if (d <= spec.link_radius_km && (best == SIZE_MAX || d < best_d)) {
            best = n;
            best_d = d;
          }
        }
        if (best != SIZE_MAX) {
          net.edges.push_back({best, node, std::max(kMinLinkKm, best_d), spec.link_speed_kmh, line});
        }
      }
    }
  } else {
    const Mode mode = spec.kind == TdpKind::subway ? Mode::subway : Mode::brt;
    const ServiceKind kind = spec.kind == TdpKind::subway ? ServiceKind::subway_station : ServiceKind::brt_stop;
    const std::vector<Point> stops = spec.stops();
    ModeNetwork& net = network_for(networks, mode);
    const std::size_t existing = net.nodes.size();
    const std::int64_t line = next_line_id(net);
    for (std::size_t k = 0; k < stops.size(); ++k) {
      const std::size_t node = net.nodes.size();
      net.nodes.push_back(stops[k]);
      add_service(kind, {stops[k]});
      if (k > 0) {
        net.edges.push_back({node - 1, node, std::max(kMinLinkKm, distance(stops[k - 1], stops[k])),
                             spec.line_speed(), line});
      }
      // Interchanges with existing stations nearby.
      for (std::size_t n = 0; n < existing; ++n) {
        const double d = distance(net.nodes[n], stops[k]);
        if (d <= spec.link_radius_km) {
          net.edges.push_back({n, node, std::max(kMinLinkKm, d), spec.link_speed_kmh, line});
        }
      }
    }
    std::vector<ZoneConnector> connectors = transit_connectors(city.zones(), stops, access);
    for (ZoneConnector& c : connectors) {
      c.node += existing;
      net.connectors.push_back(c);
    }
  }
  CityModel out(city.metadata(), city.zones(), city.facilities(), std::move(services), std::move(networks));
  out.validate();
  return out;
}

double updated_rent(double rent, double zone_area, std::span<const double> ring_areas,
                    std::span<const double> multipliers) {
  // Same as ((A - sum a) R + sum a G R) / A, arranged so that full cover by
  // one ring gives exactly G R.
  double change = 0.0;
  bool touched = false;
  for (std::size_t k = 0; k < ring_areas.size(); ++k) {
    if (ring_areas[k] == 0.0) continue;
    touched = true;
    change += ring_areas[k] / zone_area * (multipliers[k] - 1.0);
  }
  if (!touched) return rent;
  return rent * (1.0 + change);
}

CityModel update_rents(const CityModel& city, const ScenarioSpec& spec) {
  spec.validate();
  if (spec.identity() || spec.rings.empty()) return city;
  std::vector<Zone> zones = city.zones();
  const std::vector<Point> around = spec.kind == TdpKind::highway ? spec.geometry : spec.stops();
  std::vector<double> areas(spec.rings.size());
  std::vector<double> multipliers(spec.rings.size());
  for (std::size_t k = 0; k < spec.rings.size(); ++k) multipliers[k] = spec.rings[k].multiplier;
  for (Zone& z : zones) {
    const ZoneRaster raster = rasterize_zone(z);
    const std::vector<double> d2 = spec.kind == TdpKind::highway
                                       ? raster_distance2(raster, around)
                                       : raster_distance2_to_points(raster, around);
    for (std::size_t k = 0; k < spec.rings.size(); ++k) {
      areas[k] = fraction_in_range(d2, spec.rings[k].inner_km, spec.rings[k].outer_km) * z.area;
    }
    z.rent_per_m2 = updated_rent(z.rent_per_m2, z.area, areas, multipliers);
  }
  CityModel out(city.metadata(), std::move(zones), city.facilities(), city.services(), city.networks());
  out.validate();
  return out;
}

CityModel scenario_city(const CityModel& city, const ScenarioSpec& spec, const AccessParams& access) {
  if (spec.identity()) return city;
  check_bounds(city, spec);
  return update_rents(apply_tdp(city, spec, access), spec);
}

}  // namespace modalshift
