#include "modalshift/residential.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "modalshift/kernels.hpp"
#include "modalshift/parallel.hpp"
#include "modalshift/rng.hpp"

namespace modalshift {

namespace {

constexpr std::array<std::string_view, kResidentialObjectives> kObjectiveNames = {
    "workplace_distance", "former_distance", "pollution", "facility_access", "transport_access"};

/// Facilities grouped per kind as coordinate/weight arrays for the kernels.
struct FacilityArrays {
  std::array<std::vector<double>, kFacilityKinds> xs, ys, weight;

  explicit FacilityArrays(const CityModel& city) {
    std::array<double, kFacilityKinds> max_area{};
    for (const Facility& f : city.facilities()) {
      auto& m = max_area[static_cast<std::size_t>(f.kind)];
      m = std::max(m, f.area);
    }
    for (const Facility& f : city.facilities()) {
      const auto k = static_cast<std::size_t>(f.kind);
      xs[k].push_back(f.location.x);
      ys[k].push_back(f.location.y);
      weight[k].push_back(f.area / max_area[k]);
    }
  }

  std::array<double, kFacilityKinds> sums(Point origin) const {
    const auto& backend = kernels::active_backend();
    constexpr double floor2 = kFacilityDistanceFloorKm * kFacilityDistanceFloorKm;
    std::array<double, kFacilityKinds> out{};
    std::vector<double> terms;
    for (std::size_t k = 0; k < kFacilityKinds; ++k) {
      terms.resize(xs[k].size());
      backend.inverse_square_terms(xs[k].data(), ys[k].data(), weight[k].data(), xs[k].size(),
                                   origin, floor2, terms.data());
      double s = 0.0;
      for (double t : terms) s += t;
      out[k] = s;
    }
    return out;
  }
};

std::array<double, kServiceKinds> transport_sums(const CityModel& city, const Zone& zone,
                                                 const ZoneRaster& raster) {
  std::array<double, kServiceKinds> out{};
  for (const TransportService& s : city.services()) {
    out[static_cast<std::size_t>(s.kind)] += service_coverage(zone, raster, s) / zone.area;
  }
  return out;
}

template <std::size_t N, typename Weights>
double weighted(const std::array<double, N>& sums, const Weights& w) {
  double total = 0.0;
  for (std::size_t k = 0; k < N; ++k) total += w[k] * sums[k];
  return total;
}

double mean_workplace_distance(const HouseholdAgent& agent, Point centroid, const CityModel& city) {
  double total = 0.0;
  for (ZoneId w : agent.workplace_zones) total += distance(centroid, city.zone(w).centroid);
  return total / static_cast<double>(agent.workplace_zones.size());
}

}  // namespace

std::string_view to_string(ResidentialObjective o) {
  return kObjectiveNames[static_cast<std::size_t>(o)];
}

Direction direction_of(ResidentialObjective o) {
  switch (o) {
    case ResidentialObjective::facility_access:
    case ResidentialObjective::transport_access: return Direction::maximize;
    default: return Direction::minimize;
  }
}

std::vector<double> ObjectiveVector::minimized() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const ObjectiveEntry& e : values) {
    out.push_back(e.direction == Direction::maximize ? -e.value : e.value);
  }
  return out;
}

AccessibilityTable::AccessibilityTable(const CityModel& city, unsigned workers)
    : facility_(city.zone_count()), transport_(city.zone_count()) {
  const FacilityArrays facilities(city);
  parallel_for(city.zone_count(), workers, [&](std::size_t i) {
    const Zone& z = city.zones()[i];
    facility_[i] = facilities.sums(z.centroid);
    transport_[i] = transport_sums(city, z, rasterize_zone(z));
  });
}

std::array<double, kFacilityKinds> facility_kind_sums(const CityModel& city, Point origin) {
  return FacilityArrays(city).sums(origin);
}

double facility_accessibility(const CityModel& city, ZoneId zone, const HouseholdAgent& agent) {
  return weighted(facility_kind_sums(city, city.zone(zone).centroid), agent.prefs.facility_weights);
}

double transport_accessibility(const CityModel& city, ZoneId zone, const HouseholdAgent& agent) {
  const Zone& z = city.zone(zone);
  return weighted(transport_sums(city, z, rasterize_zone(z)), agent.prefs.transport_weights);
}

FeasibilityReport feasibility(const Zone& zone, const HouseholdAgent& agent) {
  FeasibilityReport r;
  const double rent = zone.rent_per_m2 * agent.required_area;
  const double lo = agent.rent_band.min_frac * agent.monthly_income;
  const double hi = agent.rent_band.max_frac * agent.monthly_income;
  const double income = agent.monthly_income > 0.0 ? agent.monthly_income : 1.0;
  if (rent < lo) {
    r.rent_ok = false;
    r.violation_magnitude += (lo - rent) / income;
  } else if (rent > hi) {
    r.rent_ok = false;
    r.violation_magnitude += (rent - hi) / income;
  }
  if (agent.prefs.pollution_hard && zone.pollution > 2) {
    r.pollution_ok = false;
    r.violation_magnitude += static_cast<double>(zone.pollution - 2) / 3.0;
  }
  if (agent.prefs.restriction_hard && zone.traffic_restricted) {
    r.restriction_ok = false;
    r.violation_magnitude += 1.0;
  }
  return r;
}

std::vector<ResidentialObjective> active_objectives(const HouseholdAgent& agent) {
  using RC = ResidentialCriterion;
  const auto& p = agent.prefs;
  std::vector<ResidentialObjective> active;
  if (p.importance_of(RC::workplace_distance) > 0 && !agent.workplace_zones.empty()) {
    active.push_back(ResidentialObjective::workplace_distance);
  }
  if (p.importance_of(RC::former_residence_distance) > 0) {
    active.push_back(ResidentialObjective::former_distance);
  }
  if (p.importance_of(RC::pollution) > 0) active.push_back(ResidentialObjective::pollution);
  if (p.importance_of(RC::educational) > 0 || p.importance_of(RC::commercial) > 0 ||
      p.importance_of(RC::green_recreational) > 0 || p.importance_of(RC::cultural) > 0 ||
      p.importance_of(RC::remedial) > 0) {
    active.push_back(ResidentialObjective::facility_access);
  }
  if (p.importance_of(RC::highways) > 0 || p.importance_of(RC::subway_stations) > 0 ||
      p.importance_of(RC::bus_stops) > 0) {
    active.push_back(ResidentialObjective::transport_access);
  }
  if (active.empty()) active.push_back(ResidentialObjective::former_distance);
  return active;
}

ObjectiveVector objectives(const CityModel& city, const AccessibilityTable& access, ZoneId zone,
                           const HouseholdAgent& agent) {
  const std::size_t zi = city.zone_index(zone);
  const Zone& z = city.zones()[zi];
  ObjectiveVector v;
  for (ResidentialObjective o : active_objectives(agent)) {
    double value = 0.0;
    switch (o) {
      case ResidentialObjective::workplace_distance:
        value = mean_workplace_distance(agent, z.centroid, city);
        break;
      case ResidentialObjective::former_distance:
        value = zone_distance(city, zone, agent.former_zone);
        break;
      case ResidentialObjective::pollution: value = static_cast<double>(z.pollution); break;
      case ResidentialObjective::facility_access:
        for (std::size_t k = 0; k < kFacilityKinds; ++k) {
          value += agent.prefs.facility_weights[k] * access.facility(zi, static_cast<FacilityKind>(k));
        }
        break;
      case ResidentialObjective::transport_access:
        for (std::size_t k = 0; k < kServiceKinds; ++k) {
          value += agent.prefs.transport_weights[k] * access.transport(zi, static_cast<ServiceKind>(k));
        }
        break;
    }
    v.values.push_back({o, value, direction_of(o)});
  }
  return v;
}

ObjectiveVector objectives(const CityModel& city, ZoneId zone, const HouseholdAgent& agent) {
  return objectives(city, AccessibilityTable(city), zone, agent);
}

bool constrained_dominates(const ObjectiveVector& a, const FeasibilityReport& fa,
                           const ObjectiveVector& b, const FeasibilityReport& fb) {
  if (a.size() != b.size() ||
      !std::equal(a.values.begin(), a.values.end(), b.values.begin(),
                  [](const ObjectiveEntry& x, const ObjectiveEntry& y) { return x.id == y.id; })) {
    throw InputError("constrained_dominates: mismatched objective sets");
  }
  return constrained_dominates(Evaluation{a.minimized(), fa.violation_magnitude},
                               Evaluation{b.minimized(), fb.violation_magnitude});
}

void GAParams::validate() const {
  if (population_size < 10) throw InputError("GA population_size must be >= 10");
  if (generations < 1) throw InputError("GA generations must be >= 1");
  if (mutation_rate < 0.0 || mutation_rate > 1.0 || crossover_rate < 0.0 || crossover_rate > 1.0) {
    throw InputError("GA rates must lie in [0, 1]");
  }
  if (tournament_size < 1) throw InputError("GA tournament_size must be >= 1");
  if (max_alternatives < 1) throw InputError("GA max_alternatives must be >= 1");
}

// ---- search space ----------------------------------------------------------

ChoiceSpace::ChoiceSpace(const CityModel& city, unsigned workers)
    : city_(&city), access_(city, workers), n_(city.zone_count()), dist_(n_ * n_), midpoint_(n_ * n_) {
  const auto& zones = city.zones();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      dist_[i * n_ + j] = i == j ? 0.0 : modalshift::distance(zones[i].centroid, zones[j].centroid);
    }
  }
  parallel_for(n_, workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const Point mid{(zones[i].centroid.x + zones[j].centroid.x) * 0.5,
                      (zones[i].centroid.y + zones[j].centroid.y) * 0.5};
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n_; ++k) {
        const double dx = zones[k].centroid.x - mid.x;
        const double dy = zones[k].centroid.y - mid.y;
        const double d = dx * dx + dy * dy;
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      midpoint_[i * n_ + j] = best;
    }
  });
}

AgentLandscape::AgentLandscape(const ChoiceSpace& space, const HouseholdAgent& agent) {
  const CityModel& city = space.city();
  const std::size_t n = space.size();
  evals_.resize(n);
  vectors_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Zone& z = city.zones()[i];
    vectors_[i] = modalshift::objectives(city, space.access(), z.id, agent);
    evals_[i] = Evaluation{vectors_[i].minimized(), feasibility(z, agent).violation_magnitude};
  }
  words_ = (n + 63) / 64;
  dominated_by_.assign(n * words_, 0);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) {
      if (a != b && constrained_dominates(evals_[a], evals_[b])) {
        dominated_by_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
      }
    }
  }
}

std::vector<std::size_t> AgentLandscape::rank_zones(std::span<const std::size_t> present) const {
  std::vector<std::size_t> rank(evals_.size(), SIZE_MAX);
  std::vector<std::uint64_t> remaining(words_, 0);
  for (std::size_t z : present) remaining[z / 64] |= std::uint64_t{1} << (z % 64);
  std::vector<std::size_t> pending(present.begin(), present.end());
  std::vector<std::size_t> front, rest;
  for (std::size_t r = 0; !pending.empty(); ++r) {
    front.clear();
    rest.clear();
    for (std::size_t z : pending) {
      const std::uint64_t* row = &dominated_by_[z * words_];
      bool dominated = false;
      for (std::size_t w = 0; w < words_ && !dominated; ++w) dominated = (row[w] & remaining[w]) != 0;
      (dominated ? rest : front).push_back(z);
    }
    for (std::size_t z : front) {
      rank[z] = r;
      remaining[z / 64] &= ~(std::uint64_t{1} << (z % 64));
    }
    pending.swap(rest);
  }
  return rank;
}

// ---- constrained NSGA-II ---------------------------------------------------

namespace {

struct Ranked {
  std::vector<std::size_t> rank;
  std::vector<double> crowd;
};

/// Nondominated rank and crowding of each individual (a zone index). The
/// first copy of a zone gets its crowding among the distinct zones of its
/// front; later copies rank below every distinct member of that front.
Ranked rank_individuals(const AgentLandscape& land, std::span<const std::size_t> individuals) {
  std::vector<std::size_t> distinct(individuals.begin(), individuals.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::vector<std::size_t> zone_rank = land.rank_zones(distinct);

  std::size_t max_rank = 0;
  for (std::size_t z : distinct) max_rank = std::max(max_rank, zone_rank[z]);
  std::vector<std::vector<std::size_t>> fronts(max_rank + 1);
  for (std::size_t z : distinct) fronts[zone_rank[z]].push_back(z);
  std::vector<double> zone_crowd(land.size(), 0.0);
  const std::size_t m = land.evaluation(distinct[0]).objectives.size();
  for (const auto& front : fronts) {
    if (front.empty()) continue;
    const std::vector<double> d = detail::crowding(front.size(), m, [&](std::size_t k, std::size_t obj) {
      return land.evaluation(front[k]).objectives[obj];
    });
    for (std::size_t k = 0; k < front.size(); ++k) zone_crowd[front[k]] = d[k];
  }

  Ranked out;
  out.rank.resize(individuals.size());
  out.crowd.resize(individuals.size());
  std::vector<bool> seen(land.size(), false);
  for (std::size_t i = 0; i < individuals.size(); ++i) {
    const std::size_t z = individuals[i];
    out.rank[i] = zone_rank[z];
    out.crowd[i] = seen[z] ? -1.0 : zone_crowd[z];
    seen[z] = true;
  }
  return out;
}

bool better(const Ranked& r, std::size_t a, std::size_t b) {
  if (r.rank[a] != r.rank[b]) return r.rank[a] < r.rank[b];
  return r.crowd[a] > r.crowd[b];
}

}  // namespace

AlternativeSet select_alternatives(const ChoiceSpace& space, const HouseholdAgent& agent,
                                   const GAParams& params) {
  params.validate();
  AlternativeSet result;
  result.agent = agent.id;
  const std::size_t n_zones = space.size();
  if (n_zones == 0) return result;

  const AgentLandscape land(space, agent);
  Rng rng(params.seed);
  const std::size_t n = params.population_size;

  std::vector<std::size_t> pop(n);
  for (auto& z : pop) z = rng.index(n_zones);
  Ranked ranked = rank_individuals(land, pop);

  auto tournament = [&]() {
    std::size_t best = rng.index(n);
    for (std::size_t k = 1; k < params.tournament_size; ++k) {
      const std::size_t challenger = rng.index(n);
      if (better(ranked, challenger, best)) best = challenger;
    }
    return best;
  };
  auto mutate = [&](std::size_t z) {
    return rng.bernoulli(params.mutation_rate) ? rng.index(n_zones) : z;
  };

  std::vector<std::size_t> combined;
  std::vector<std::size_t> order;
  for (std::size_t gen = 0; gen < params.generations; ++gen) {
    combined = pop;
    while (combined.size() < 2 * n) {
      const std::size_t p1 = pop[tournament()];
      const std::size_t p2 = pop[tournament()];
      std::size_t c1 = p1;
      std::size_t c2 = p2;
      if (rng.bernoulli(params.crossover_rate)) {
        const std::size_t mid = space.midpoint_zone(p1, p2);
        if (rng.bernoulli(0.5)) c1 = mid;
        if (rng.bernoulli(0.5)) c2 = mid;
      }
      combined.push_back(mutate(c1));
      if (combined.size() < 2 * n) combined.push_back(mutate(c2));
    }
    const Ranked all = rank_individuals(land, combined);
    order.resize(combined.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Whole fronts in rank order, the last one truncated by crowding.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return better(all, a, b); });
    Ranked next;
    next.rank.resize(n);
    next.crowd.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pop[i] = combined[order[i]];
      next.rank[i] = all.rank[order[i]];
      next.crowd[i] = all.crowd[order[i]];
    }
    ranked = std::move(next);
  }

  // Distinct feasible zones of the final first front.
  std::vector<std::size_t> distinct(pop.begin(), pop.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::vector<std::size_t> zone_rank = land.rank_zones(distinct);
  std::vector<std::size_t> front;
  for (std::size_t z : distinct) {
    if (zone_rank[z] == 0 && land.evaluation(z).feasible()) front.push_back(z);
  }
  if (front.empty()) return result;
  const std::size_t m = land.evaluation(front[0]).objectives.size();
  const std::vector<double> crowd = detail::crowding(front.size(), m, [&](std::size_t k, std::size_t obj) {
    return land.evaluation(front[k]).objectives[obj];
  });
  std::vector<std::size_t> pick(front.size());
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::stable_sort(pick.begin(), pick.end(),
                   [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
  const std::size_t keep = std::min(params.max_alternatives, pick.size());
  for (std::size_t k = 0; k < keep; ++k) {
    const std::size_t z = front[pick[k]];
    result.alternatives.push_back({space.city().zones()[z].id, land.objectives(z)});
  }
  return result;
}

AlternativeSet select_alternatives(const HouseholdAgent& agent, const CityModel& city,
                                   const GAParams& params) {
  return select_alternatives(ChoiceSpace(city), agent, params);
}

std::vector<ZoneId> pareto_oracle(const ChoiceSpace& space, const HouseholdAgent& agent) {
  const CityModel& city = space.city();
  std::vector<Evaluation> evals;
  evals.reserve(space.size());
  for (const Zone& z : city.zones()) {
    evals.push_back({objectives(city, space.access(), z.id, agent).minimized(),
                     feasibility(z, agent).violation_magnitude});
  }
  std::vector<ZoneId> out;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (!evals[i].feasible()) continue;
    bool dominated = false;
    for (std::size_t j = 0; j < evals.size() && !dominated; ++j) {
      dominated = j != i && evals[j].feasible() && pareto_dominates(evals[j].objectives, evals[i].objectives);
    }
    if (!dominated) out.push_back(city.zones()[i].id);
  }
  return out;
}

std::vector<ZoneId> pareto_oracle(const HouseholdAgent& agent, const CityModel& city) {
  return pareto_oracle(ChoiceSpace(city), agent);
}

}  // namespace modalshift
