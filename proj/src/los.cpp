#include "modalshift/los.hpp"

#include <limits>
#include <queue>
#include <tuple>

#include "json_util.hpp"
#include "modalshift/parallel.hpp"

namespace modalshift {

using detail::json;

TariffConfig parse_tariffs(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "tariff file");
  TariffConfig cfg;
  const json& modes = detail::field(doc, "modes", "tariff file");
  for (auto it = modes.begin(); it != modes.end(); ++it) {
    const Mode m = parse_mode(it.key());
    const std::string where = "modes." + it.key();
    ModeTariff& t = cfg.tariffs[static_cast<std::size_t>(m)];
    t.flat_fare = detail::get_or<double>(*it, "flat_fare", 0.0, where);
    t.per_km = detail::get_or<double>(*it, "per_km", 0.0, where);
    if (t.flat_fare < 0.0 || t.per_km < 0.0) throw InputError("negative tariff in " + where);
  }
  cfg.transfer_penalty_min = detail::get_or<double>(doc, "transfer_penalty_min", 5.0, "tariff file");
  cfg.car_restricted_surcharge =
      detail::get_or<double>(doc, "car_restricted_surcharge", 0.0, "tariff file");
  cfg.walk_cutoff_km = detail::get_or<double>(doc, "walk_cutoff_km", 5.0, "tariff file");
  if (doc.contains("access")) {
    const json& a = doc["access"];
    AccessParams& p = cfg.access;
    p.walk_speed_kmh = detail::get_or<double>(a, "walk_speed_kmh", p.walk_speed_kmh, "access");
    p.walk_max_km = detail::get_or<double>(a, "walk_max_km", p.walk_max_km, "access");
    p.local_taxi_speed_kmh =
        detail::get_or<double>(a, "local_taxi_speed_kmh", p.local_taxi_speed_kmh, "access");
    p.local_taxi_wait_min =
        detail::get_or<double>(a, "local_taxi_wait_min", p.local_taxi_wait_min, "access");
    p.local_taxi_flat = detail::get_or<double>(a, "local_taxi_flat", p.local_taxi_flat, "access");
    p.local_taxi_per_km =
        detail::get_or<double>(a, "local_taxi_per_km", p.local_taxi_per_km, "access");
    p.connector_radius_km =
        detail::get_or<double>(a, "connector_radius_km", p.connector_radius_km, "access");
    p.max_connectors = detail::get_or<std::size_t>(a, "max_connectors", p.max_connectors, "access");
    if (!(p.walk_speed_kmh > 0.0) || !(p.local_taxi_speed_kmh > 0.0)) {
      throw InputError("access speeds must be positive");
    }
  }
  if (cfg.transfer_penalty_min < 0.0 || !(cfg.walk_cutoff_km > 0.0)) {
    throw InputError("tariff file: transfer_penalty_min must be >= 0 and walk_cutoff_km > 0");
  }
  return cfg;
}

TariffConfig load_tariffs(const std::filesystem::path& path) {
  return parse_tariffs(detail::read_text(path));
}

namespace {

struct Arc {
  std::size_t to;
  double time_min;
  double length_km;
  std::int64_t line;
};

struct Label {
  double generalized = std::numeric_limits<double>::infinity();
  double in_vehicle = 0.0;
  double out_of_vehicle = 0.0;
  double vehicle_km = 0.0;
  double access_km = 0.0;
  double access_cost = 0.0;
  int transfers = 0;
};

}  // namespace

std::vector<LOS> los_from_origin(const CityModel& city, Mode mode, ZoneId origin,
                                 const TariffConfig& tariffs) {
  const std::size_t origin_index = city.zone_index(origin);
  std::vector<LOS> result(city.zone_count());
  const ModeNetwork* net = city.network(mode);
  if (net == nullptr) return result;

  // Arcs: both directions of each edge; arrival state is the arc itself so the
  // transfer penalty can depend on the incoming line.
  std::vector<Arc> arcs;
  std::vector<std::vector<std::size_t>> out(net->nodes.size());
  arcs.reserve(net->edges.size() * 2);
  for (const NetworkEdge& e : net->edges) {
    const double t = e.length_km / e.speed_kmh * 60.0;
    out[e.from].push_back(arcs.size());
    arcs.push_back({e.to, t, e.length_km, e.line});
    out[e.to].push_back(arcs.size());
    arcs.push_back({e.from, t, e.length_km, e.line});
  }

  std::vector<std::vector<const ZoneConnector*>> by_zone(city.zone_count());
  for (const ZoneConnector& c : net->connectors) by_zone[city.zone_index(c.zone)].push_back(&c);

  using Entry = std::tuple<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<Label> label(arcs.size());
  std::vector<bool> settled(arcs.size(), false);

  auto relax = [&](std::size_t arc, const Label& candidate) {
    if (candidate.generalized < label[arc].generalized) {
      label[arc] = candidate;
      queue.emplace(candidate.generalized, arc);
    }
  };

  for (const ZoneConnector* c : by_zone[origin_index]) {
    for (std::size_t a : out[c->node]) {
      Label l;
      l.in_vehicle = arcs[a].time_min;
      l.out_of_vehicle = c->time_min;
      l.vehicle_km = arcs[a].length_km;
      l.access_km = c->distance_km;
      l.access_cost = c->cost;
      l.generalized = l.in_vehicle + l.out_of_vehicle;
      relax(a, l);
    }
  }
  while (!queue.empty()) {
    const auto [g, a] = queue.top();
    queue.pop();
    if (settled[a]) continue;
    settled[a] = true;
    const Label& cur = label[a];
    for (std::size_t b : out[arcs[a].to]) {
      if (settled[b]) continue;
      Label next = cur;
      next.in_vehicle += arcs[b].time_min;
      next.vehicle_km += arcs[b].length_km;
      if (arcs[b].line != arcs[a].line) {
        next.out_of_vehicle += tariffs.transfer_penalty_min;
        next.transfers += 1;
      }
      next.generalized = next.in_vehicle + next.out_of_vehicle;
      relax(b, next);
    }
  }

  // Best arrival per node.
  std::vector<std::size_t> best_arc(net->nodes.size(), SIZE_MAX);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    if (!settled[a]) continue;
    std::size_t& slot = best_arc[arcs[a].to];
    if (slot == SIZE_MAX || label[a].generalized < label[slot].generalized) slot = a;
  }

  const ModeTariff& tariff = tariffs.tariff(mode);
  const bool origin_restricted = city.zones()[origin_index].traffic_restricted;
  for (std::size_t d = 0; d < city.zone_count(); ++d) {
    Label best;
    bool used_vehicle = false;
    bool found = false;
    for (const ZoneConnector* e : by_zone[d]) {
      // Boarding nothing: origin and destination share an access node.
      for (const ZoneConnector* c : by_zone[origin_index]) {
        if (c->node != e->node) continue;
        const double g = c->time_min + e->time_min;
        if (!found || g < best.generalized) {
          best = Label{g, 0.0, c->time_min + e->time_min, 0.0, c->distance_km + e->distance_km,
                       c->cost + e->cost, 0};
          used_vehicle = false;
          found = true;
        }
      }
      const std::size_t a = best_arc[e->node];
      if (a == SIZE_MAX) continue;
      const double g = label[a].generalized + e->time_min;
      if (!found || g < best.generalized) {
        best = label[a];
        best.generalized = g;
        best.out_of_vehicle += e->time_min;
        best.access_km += e->distance_km;
        best.access_cost += e->cost;
        used_vehicle = true;
        found = true;
      }
    }
    if (!found) continue;
    LOS& los = result[d];
    los.available = true;
    los.in_vehicle_time = best.in_vehicle;
    los.out_of_vehicle_time = best.out_of_vehicle;
    los.network_distance = best.vehicle_km + best.access_km;
    los.transfers = best.transfers;
    los.cost = best.access_cost + tariff.per_km * best.vehicle_km +
               (used_vehicle ? tariff.flat_fare : 0.0);
    if (mode == Mode::car && (origin_restricted || city.zones()[d].traffic_restricted)) {
      los.cost += tariffs.car_restricted_surcharge;
    }
    // Distance is kept so callers can tell why walking is out.
    if (mode == Mode::walk && los.network_distance > tariffs.walk_cutoff_km) los.available = false;
  }
  return result;
}

LOS compute_los(const CityModel& city, ZoneId origin, ZoneId dest, Mode mode,
                const TariffConfig& tariffs) {
  const std::size_t d = city.zone_index(dest);
  return los_from_origin(city, mode, origin, tariffs)[d];
}

LosTable::LosTable(const CityModel& city, const TariffConfig& tariffs, unsigned workers)
    : n_(city.zone_count()), table_(kModes * n_ * n_) {
  parallel_for(kModes * n_, workers, [&](std::size_t job) {
    const Mode mode = static_cast<Mode>(job / n_);
    const std::size_t o = job % n_;
    const std::vector<LOS> row = los_from_origin(city, mode, city.zones()[o].id, tariffs);
    std::copy(row.begin(), row.end(), table_.begin() + static_cast<std::ptrdiff_t>(job * n_));
  });
}

}  // namespace modalshift
