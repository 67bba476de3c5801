#include "modalshift/mode_choice.hpp"

#include <algorithm>
#include <limits>

#include "json_util.hpp"

namespace modalshift {

using detail::json;

ExpertScoreMatrix::ExpertScoreMatrix(const std::array<CriterionScores, kModes>& raw) {
  for (std::size_t c = 0; c < kCommuteCriteria; ++c) {
    double max = 0.0;
    for (std::size_t m = 0; m < kModes; ++m) {
      if (!(raw[m][c] >= 1.0 && raw[m][c] <= 10.0)) {
        throw InputError("expert score for " + std::string(to_string(static_cast<Mode>(m))) + "/" +
                         std::string(to_string(static_cast<CommuteCriterion>(c))) +
                         " outside the 1..10 scale");
      }
      max = std::max(max, raw[m][c]);
    }
    for (std::size_t m = 0; m < kModes; ++m) normalized_[m][c] = raw[m][c] / max;
  }
}

ExpertScoreMatrix parse_expert_matrix(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "expert matrix");
  const json& modes = detail::field(doc, "modes", "expert matrix");
  std::array<CriterionScores, kModes> raw{};
  std::array<bool, kModes> seen{};
  for (auto it = modes.begin(); it != modes.end(); ++it) {
    const Mode m = parse_mode(it.key());
    seen[static_cast<std::size_t>(m)] = true;
    for (std::size_t c = 0; c < kCommuteCriteria; ++c) {
      const std::string key(to_string(static_cast<CommuteCriterion>(c)));
      raw[static_cast<std::size_t>(m)][c] = detail::get<double>(*it, key.c_str(), "expert matrix modes." + it.key());
    }
  }
  for (std::size_t m = 0; m < kModes; ++m) {
    if (!seen[m]) {
      throw InputError("schema violation: expert matrix misses mode '" +
                       std::string(to_string(static_cast<Mode>(m))) + "'");
    }
  }
  return ExpertScoreMatrix(raw);
}

ExpertScoreMatrix load_expert_matrix(const std::filesystem::path& path) {
  return parse_expert_matrix(detail::read_text(path));
}

CriterionScores criterion_scores(Mode mode, const ModeLos& los, const ModeMask& available,
                                 const ExpertScoreMatrix& matrix) {
  if (std::none_of(available.begin(), available.end(), [](bool b) { return b; })) {
    throw RuntimeError("criterion_scores: no available mode for this origin-destination pair");
  }
  CriterionScores scores = matrix.row(mode);
  const auto inverse_minmax = [&](auto attribute) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < kModes; ++m) {
      if (!available[m]) continue;
      lo = std::min(lo, attribute(los[m]));
      hi = std::max(hi, attribute(los[m]));
    }
    if (!(hi > lo)) return 1.0;
    const double x = attribute(los[static_cast<std::size_t>(mode)]);
    return 1.0 - (1.0 - kLosScoreFloor) * (x - lo) / (hi - lo);
  };
  scores[static_cast<std::size_t>(CommuteCriterion::cost)] =
      inverse_minmax([](const LOS& l) { return l.cost; });
  scores[static_cast<std::size_t>(CommuteCriterion::in_vehicle_time)] =
      inverse_minmax([](const LOS& l) { return l.in_vehicle_time; });
  scores[static_cast<std::size_t>(CommuteCriterion::out_of_vehicle_time)] =
      inverse_minmax([](const LOS& l) { return l.out_of_vehicle_time; });
  return scores;
}

double suitability(std::span<const double> weights, std::span<const double> scores) {
  double s = 0.0;
  for (std::size_t c = 0; c < weights.size(); ++c) s += weights[c] * scores[c];
  return s;
}

std::string_view to_string(Unavailable r) {
  switch (r) {
    case Unavailable::none: return "available";
    case Unavailable::no_car: return "no_car";
    case Unavailable::beyond_walk_cutoff: return "beyond_walk_cutoff";
    case Unavailable::no_route: return "no_route";
  }
  return "unknown";
}

ModeMask mode_availability(const HouseholdAgent& household, const ModeLos& los,
                           double walk_cutoff_km, std::array<Unavailable, kModes>* reasons) {
  ModeMask mask{};
  std::array<Unavailable, kModes> why{};
  for (Mode m : kAllModes) {
    const auto i = static_cast<std::size_t>(m);
    if (m == Mode::walk && los[i].network_distance > walk_cutoff_km) {
      why[i] = Unavailable::beyond_walk_cutoff;
    } else if (!los[i].available) {
      why[i] = Unavailable::no_route;
    } else if (m == Mode::car && household.n_cars < 1) {
      why[i] = Unavailable::no_car;
    } else {
      why[i] = Unavailable::none;
    }
    mask[i] = why[i] == Unavailable::none;
  }
  if (reasons != nullptr) *reasons = why;
  return mask;
}

ModeDecision choose_mode(const WorkerAgent& worker, const HouseholdAgent& household,
                         const ModeLos& los, const ExpertScoreMatrix& matrix,
                         double walk_cutoff_km) {
  ModeDecision d;
  d.worker = worker.id;
  const ModeMask available = mode_availability(household, los, walk_cutoff_km, &d.reason);
  if (std::none_of(available.begin(), available.end(), [](bool b) { return b; })) {
    throw RuntimeError("no available commuting mode for worker " + std::to_string(worker.id));
  }
  double best = -std::numeric_limits<double>::infinity();
  bool have = false;
  for (Mode m : kModePrecedence) {
    const auto i = static_cast<std::size_t>(m);
    if (!available[i]) continue;
    const CriterionScores s = criterion_scores(m, los, available, matrix);
    d.suitability[i] = suitability(worker.mode_prefs, s);
    if (!have || d.suitability[i] > best) {
      best = d.suitability[i];
      d.chosen = m;
      have = true;
    }
  }
  for (Mode m : kAllModes) {
    const auto i = static_cast<std::size_t>(m);
    if (available[i] && m != d.chosen && d.suitability[i] == best) d.tie = true;
  }
  return d;
}

ModeDecision choose_mode(const WorkerAgent& worker, const HouseholdAgent& household,
                         ZoneId origin, const CityModel& city, const TariffConfig& tariffs,
                         const ExpertScoreMatrix& matrix) {
  ModeLos los{};
  for (Mode m : kAllModes) {
    los[static_cast<std::size_t>(m)] = compute_los(city, origin, worker.workplace_zone, m, tariffs);
  }
  return choose_mode(worker, household, los, matrix, tariffs.walk_cutoff_km);
}

}  // namespace modalshift
