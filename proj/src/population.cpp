#include "modalshift/population.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "json_util.hpp"

namespace modalshift {

using detail::json;

namespace {

constexpr std::array<std::string_view, kResidentialCriteria> kResidentialNames = {
    "housing_rent",        "educational",     "commercial",
    "green_recreational",  "cultural",        "remedial",
    "highways",            "subway_stations", "bus_stops",
    "pollution",           "workplace_distance", "former_residence_distance",
    "traffic_restrictions"};
constexpr std::array<std::string_view, kCommuteCriteria> kCommuteNames = {
    "cost", "in_vehicle_time", "out_of_vehicle_time", "comfortability", "security", "reliability"};
constexpr std::array<std::string_view, kAttributes> kAttributeNames = {"size", "income", "cars"};

template <std::size_t N>
std::array<double, N> read_fractions(const json& row, const char* key, const std::string& where) {
  const json& arr = detail::field(row, key, where);
  if (!arr.is_array() || arr.size() != N) {
    throw InputError("schema violation: " + where + "." + key + " must hold " + std::to_string(N) +
                     " percentages");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!arr[i].is_number()) {
      throw InputError("schema violation: " + where + "." + key + "[" + std::to_string(i) +
                       "] is not a number");
    }
    const double v = arr[i].get<double>();
    if (v < 0.0 || v > 100.0) {
      throw InputError("schema violation: " + where + "." + key + "[" + std::to_string(i) +
                       "] outside [0, 100]");
    }
    out[i] = v / 100.0;
  }
  return out;
}

void check_distribution(const std::vector<double>& p, const std::string& what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InputError("population config: negative probability in " + what);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw InputError("population config: probabilities in " + what + " sum to " +
                     std::to_string(sum) + ", expected 1");
  }
}

std::string_view class_label(const HouseholdAgent& a, const PopulationConfig& c, Attribute attr) {
  switch (attr) {
    case Attribute::size: return c.size_classes[a.size_class].label;
    case Attribute::income: return c.income_classes[a.income_class].label;
    case Attribute::cars: return c.car_classes[a.car_class].label;
  }
  return {};
}

int draw_importance(Rng& rng, double p_above_four) {
  return rng.bernoulli(p_above_four) ? rng.range(5, 9) : rng.range(0, 4);
}

}  // namespace

std::string_view to_string(ResidentialCriterion c) {
  return kResidentialNames[static_cast<std::size_t>(c)];
}
std::string_view to_string(CommuteCriterion c) { return kCommuteNames[static_cast<std::size_t>(c)]; }

const SurveyRow* SurveySummary::find(Attribute a, std::string_view category) const {
  for (const SurveyRow& r : rows[static_cast<std::size_t>(a)]) {
    if (r.category == category) return &r;
  }
  return nullptr;
}

SurveySummary parse_survey(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "survey file");
  if (doc.contains("residential_criteria")) {
    const auto names = detail::get<std::vector<std::string>>(doc, "residential_criteria", "survey file");
    if (names.size() != kResidentialCriteria ||
        !std::equal(names.begin(), names.end(), kResidentialNames.begin())) {
      throw InputError("schema violation: survey field 'residential_criteria' does not list the 13 criteria in order");
    }
  }
  if (doc.contains("commuting_criteria")) {
    const auto names = detail::get<std::vector<std::string>>(doc, "commuting_criteria", "survey file");
    if (names.size() != kCommuteCriteria ||
        !std::equal(names.begin(), names.end(), kCommuteNames.begin())) {
      throw InputError("schema violation: survey field 'commuting_criteria' does not list the 6 criteria in order");
    }
  }
  SurveySummary survey;
  const json& rows = detail::field(doc, "rows", "survey file");
  if (!rows.is_array()) throw InputError("schema violation: survey field 'rows' must be an array");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "survey rows[" + std::to_string(i) + "]";
    const std::string attribute = detail::get<std::string>(rows[i], "attribute", where);
    std::size_t a = kAttributes;
    for (std::size_t k = 0; k < kAttributes; ++k) {
      if (kAttributeNames[k] == attribute) a = k;
    }
    if (a == kAttributes) {
      throw InputError("schema violation: " + where + ".attribute '" + attribute +
                       "' is not one of size, income, cars");
    }
    SurveyRow row;
    row.category = detail::get<std::string>(rows[i], "category", where);
    row.residential = read_fractions<kResidentialCriteria>(rows[i], "residential", where);
    row.commuting = read_fractions<kCommuteCriteria>(rows[i], "commuting", where);
    survey.rows[a].push_back(std::move(row));
  }
  return survey;
}

SurveySummary load_survey(const std::filesystem::path& path) {
  return parse_survey(detail::read_text(path));
}

// ---- population config -----------------------------------------------------

std::vector<double> PopulationConfig::car_marginal() const {
  std::vector<double> m(car_classes.size(), 0.0);
  for (std::size_t i = 0; i < income_classes.size(); ++i) {
    for (std::size_t c = 0; c < car_classes.size(); ++c) {
      m[c] += income_classes[i].fraction * cars_given_income[i][c];
    }
  }
  return m;
}

void PopulationConfig::validate() const {
  if (size_classes.empty() || income_classes.empty() || car_classes.empty()) {
    throw InputError("population config: size, income and car classes must be non-empty");
  }
  std::vector<double> p;
  for (const auto& s : size_classes) {
    p.push_back(s.fraction);
    if (s.sizes.empty()) throw InputError("population config: size class '" + s.label + "' has no sizes");
    for (int v : s.sizes) {
      if (v < 1) throw InputError("population config: size class '" + s.label + "' has size < 1");
    }
    if (!(s.required_area_m2 > 0.0)) {
      throw InputError("population config: size class '" + s.label + "' needs required_area_m2 > 0");
    }
  }
  check_distribution(p, "size_classes");
  p.clear();
  for (const auto& c : income_classes) {
    p.push_back(c.fraction);
    if (!(c.max > c.min) || c.min < 0.0) {
      throw InputError("population config: income class '" + c.label + "' needs 0 <= min < max");
    }
  }
  check_distribution(p, "income_classes");
  for (const auto& c : car_classes) {
    if (c.counts.empty()) throw InputError("population config: car class '" + c.label + "' has no counts");
  }
  if (cars_given_income.size() != income_classes.size()) {
    throw InputError("population config: cars_given_income needs one row per income class");
  }
  for (std::size_t i = 0; i < cars_given_income.size(); ++i) {
    if (cars_given_income[i].size() != car_classes.size()) {
      throw InputError("population config: cars_given_income." + income_classes[i].label +
                       " needs one probability per car class");
    }
    check_distribution(cars_given_income[i], "cars_given_income." + income_classes[i].label);
  }
  p.clear();
  for (const auto& [name, w] : professional_categories) p.push_back(w);
  check_distribution(p, "professional_categories");
  for (double q : {child_member_probability, zero_employed_probability,
                   additional_worker_probability, female_worker_probability}) {
    if (q < 0.0 || q > 1.0) throw InputError("population config: probability outside [0, 1]");
  }
  if (adult_min_age < child_age_limit || adult_max_age < adult_min_age) {
    throw InputError("population config: adult age range must start at or above child_age_limit");
  }
  if (!(rent_min_frac[0] > 0.0) || rent_min_frac[1] < rent_min_frac[0] ||
      rent_max_frac[0] <= rent_min_frac[1] || rent_max_frac[1] > 1.0 ||
      rent_max_frac[1] < rent_max_frac[0]) {
    throw InputError("population config: rent bands need 0 < min_frac < max_frac <= 1");
  }
  if (required_area_spread < 0.0 || required_area_spread >= 1.0) {
    throw InputError("population config: required_area_spread must lie in [0, 1)");
  }
}

PopulationConfig default_population_config() {
  PopulationConfig c;
  c.size_classes = {{"single", 0.056, {1}, 55.0},
                    {"couple", 0.281, {2}, 70.0},
                    {"3-4", 0.548, {3, 4}, 90.0},
                    {">4", 0.115, {5, 6, 7}, 115.0}};
  c.income_classes = {{"<10", 0.176, 4.0, 10.0}, {"10-25", 0.631, 10.0, 25.0}, {">25", 0.193, 25.0, 60.0}};
  c.car_classes = {{"0", {0}}, {"1", {1}}, {">1", {2, 3}}};
  c.cars_given_income = {{0.32, 0.63, 0.05}, {0.075, 0.75, 0.175}, {0.025, 0.535, 0.44}};
  c.professional_categories = {{"office", 0.4}, {"industry", 0.2}, {"service", 0.3}, {"education", 0.1}};
  return c;
}

PopulationConfig parse_population_config(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "population config");
  PopulationConfig c = default_population_config();
  const std::string w = "population config";
  if (doc.contains("size_classes")) {
    c.size_classes.clear();
    for (const json& s : doc["size_classes"]) {
      c.size_classes.push_back({detail::get<std::string>(s, "label", w + ".size_classes"),
                                detail::get<double>(s, "fraction", w + ".size_classes"),
                                detail::get<std::vector<int>>(s, "sizes", w + ".size_classes"),
                                detail::get<double>(s, "required_area_m2", w + ".size_classes")});
    }
  }
  if (doc.contains("income_classes")) {
    c.income_classes.clear();
    for (const json& s : doc["income_classes"]) {
      c.income_classes.push_back({detail::get<std::string>(s, "label", w + ".income_classes"),
                                  detail::get<double>(s, "fraction", w + ".income_classes"),
                                  detail::get<double>(s, "min", w + ".income_classes"),
                                  detail::get<double>(s, "max", w + ".income_classes")});
    }
  }
  if (doc.contains("car_classes")) {
    c.car_classes.clear();
    for (const json& s : doc["car_classes"]) {
      c.car_classes.push_back({detail::get<std::string>(s, "label", w + ".car_classes"),
                               detail::get<std::vector<int>>(s, "counts", w + ".car_classes")});
    }
  }
  if (doc.contains("cars_given_income")) {
    const json& m = doc["cars_given_income"];
    c.cars_given_income.clear();
    for (const auto& inc : c.income_classes) {
      c.cars_given_income.push_back(
          detail::get<std::vector<double>>(m, inc.label.c_str(), w + ".cars_given_income"));
    }
  }
  if (doc.contains("ages")) {
    const json& a = doc["ages"];
    c.adult_min_age = detail::get_or<int>(a, "adult_min", c.adult_min_age, w + ".ages");
    c.adult_max_age = detail::get_or<int>(a, "adult_max", c.adult_max_age, w + ".ages");
    c.child_member_probability =
        detail::get_or<double>(a, "child_member_probability", c.child_member_probability, w + ".ages");
    c.child_age_limit = detail::get_or<int>(a, "child_age_limit", c.child_age_limit, w + ".ages");
  }
  if (doc.contains("employment")) {
    const json& e = doc["employment"];
    const std::string we = w + ".employment";
    c.zero_employed_probability =
        detail::get_or<double>(e, "zero_employed_probability", c.zero_employed_probability, we);
    c.additional_worker_probability =
        detail::get_or<double>(e, "additional_worker_probability", c.additional_worker_probability, we);
    c.female_worker_probability =
        detail::get_or<double>(e, "female_probability", c.female_worker_probability, we);
    if (e.contains("categories")) {
      c.professional_categories.clear();
      for (auto it = e["categories"].begin(); it != e["categories"].end(); ++it) {
        if (!it->is_number()) throw InputError("schema violation: " + we + ".categories." + it.key() + " is not a number");
        c.professional_categories.emplace_back(it.key(), it->get<double>());
      }
    }
  }
  c.required_area_spread = detail::get_or<double>(doc, "required_area_spread", c.required_area_spread, w);
  if (doc.contains("rent_band")) {
    c.rent_min_frac = detail::get<std::array<double, 2>>(doc["rent_band"], "min_frac", w + ".rent_band");
    c.rent_max_frac = detail::get<std::array<double, 2>>(doc["rent_band"], "max_frac", w + ".rent_band");
  }
  c.hard_threshold = detail::get_or<int>(doc, "hard_threshold", c.hard_threshold, w);
  c.validate();
  return c;
}

PopulationConfig load_population_config(const std::filesystem::path& path) {
  return parse_population_config(detail::read_text(path));
}

// ---- synthesis -------------------------------------------------------------

double above_four_probability(const HouseholdAgent& agent, const PopulationConfig& config,
                              const SurveySummary& survey, bool commuting, std::size_t criterion) {
  double sum = 0.0;
  int used = 0;
  for (std::size_t a = 0; a < kAttributes; ++a) {
    if (survey.rows[a].empty()) continue;
    const auto attr = static_cast<Attribute>(a);
    const std::string_view label = class_label(agent, config, attr);
    const SurveyRow* row = survey.find(attr, label);
    if (row == nullptr) {
      throw InputError("survey has no row for " + std::string(kAttributeNames[a]) + " category '" +
                       std::string(label) + "'");
    }
    sum += commuting ? row->commuting[criterion] : row->residential[criterion];
    ++used;
  }
  if (used == 0) throw InputError("survey has no rows");
  return sum / used;
}

ResidentialPreferences draw_preferences(const HouseholdAgent& agent, const SurveySummary& survey,
                                        const PopulationConfig& config, Rng& rng) {
  ResidentialPreferences prefs;
  for (std::size_t c = 0; c < kResidentialCriteria; ++c) {
    prefs.importance[c] = draw_importance(rng, above_four_probability(agent, config, survey, false, c));
  }
  using RC = ResidentialCriterion;
  const auto imp = [&](RC c) { return static_cast<double>(prefs.importance_of(c)); };

  std::array<double, kFacilityKinds> fac{};
  fac[static_cast<std::size_t>(FacilityKind::commercial)] = imp(RC::commercial);
  fac[static_cast<std::size_t>(FacilityKind::educational)] = imp(RC::educational);
  fac[static_cast<std::size_t>(FacilityKind::green_recreational)] = imp(RC::green_recreational);
  fac[static_cast<std::size_t>(FacilityKind::remedial)] = imp(RC::remedial);
  fac[static_cast<std::size_t>(FacilityKind::cultural)] = imp(RC::cultural);

  // BRT stops share the bus-stop importance.
  std::array<double, kServiceKinds> tr{};
  tr[static_cast<std::size_t>(ServiceKind::highway)] = imp(RC::highways);
  tr[static_cast<std::size_t>(ServiceKind::subway_station)] = imp(RC::subway_stations);
  tr[static_cast<std::size_t>(ServiceKind::brt_stop)] = imp(RC::bus_stops);
  tr[static_cast<std::size_t>(ServiceKind::bus_stop)] = imp(RC::bus_stops);

  auto normalize = [](auto& w) {
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v = s > 0.0 ? v / s : 1.0 / static_cast<double>(w.size());
  };
  normalize(fac);
  normalize(tr);
  prefs.facility_weights = fac;
  prefs.transport_weights = tr;
  prefs.pollution_hard = prefs.importance_of(RC::pollution) >= config.hard_threshold;
  prefs.restriction_hard = prefs.importance_of(RC::traffic_restrictions) >= config.hard_threshold;
  return prefs;
}

std::array<double, kCommuteCriteria> draw_commute_preferences(const HouseholdAgent& agent,
                                                              const SurveySummary& survey,
                                                              const PopulationConfig& config,
                                                              Rng& rng) {
  std::array<double, kCommuteCriteria> w{};
  double sum = 0.0;
  for (std::size_t c = 0; c < kCommuteCriteria; ++c) {
    w[c] = draw_importance(rng, above_four_probability(agent, config, survey, true, c));
    sum += w[c];
  }
  for (double& v : w) v = sum > 0.0 ? v / sum : 1.0 / kCommuteCriteria;
  return w;
}

Population synthesize_households(const PopulationConfig& config, const SurveySummary& survey,
                                 const CityModel& city, std::size_t n, std::uint64_t seed) {
  config.validate();
  Population pop;
  for (const auto& s : config.size_classes) pop.size_labels.push_back(s.label);
  for (const auto& s : config.income_classes) pop.income_labels.push_back(s.label);
  for (const auto& s : config.car_classes) pop.car_labels.push_back(s.label);
  if (n == 0) return pop;
  if (city.zone_count() == 0) throw InputError("cannot synthesize households for a city without zones");

  std::vector<double> size_p, income_p, former_w, prof_w;
  for (const auto& s : config.size_classes) size_p.push_back(s.fraction);
  for (const auto& s : config.income_classes) income_p.push_back(s.fraction);
  for (const Zone& z : city.zones()) former_w.push_back(z.residential_area);
  for (const auto& [name, w] : config.professional_categories) prof_w.push_back(w);
  if (std::accumulate(former_w.begin(), former_w.end(), 0.0) <= 0.0) {
    former_w.assign(former_w.size(), 1.0);
  }

  pop.households.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    HouseholdAgent h;
    h.id = static_cast<AgentId>(i + 1);
    Rng rng(derive_seed(seed, Stream::household, static_cast<std::uint64_t>(h.id)));

    h.income_class = rng.categorical(income_p);
    const IncomeClass& inc = config.income_classes[h.income_class];
    h.monthly_income = rng.uniform(inc.min, inc.max);

    h.size_class = rng.categorical(size_p);
    const SizeClass& sc = config.size_classes[h.size_class];
    h.size = sc.sizes[rng.index(sc.sizes.size())];
    for (int m = 0; m < h.size; ++m) {
      const bool child = m >= 2 && rng.bernoulli(config.child_member_probability);
      h.member_ages.push_back(child ? rng.range(0, config.child_age_limit - 1)
                                    : rng.range(config.adult_min_age, config.adult_max_age));
    }
    h.has_child = std::any_of(h.member_ages.begin(), h.member_ages.end(),
                              [&](int age) { return age < config.child_age_limit; });

    h.former_zone = city.zones()[rng.categorical(former_w)].id;

    const int adults = static_cast<int>(std::count_if(
        h.member_ages.begin(), h.member_ages.end(),
        [&](int age) { return age >= config.child_age_limit; }));
    if (!rng.bernoulli(config.zero_employed_probability)) {
      h.n_employed = 1;
      for (int a = 1; a < adults; ++a) h.n_employed += rng.bernoulli(config.additional_worker_probability) ? 1 : 0;
    }
    for (int e = 0; e < h.n_employed; ++e) {
      h.professional_categories.push_back(config.professional_categories[rng.categorical(prof_w)].first);
    }

    h.car_class = rng.categorical(config.cars_given_income[h.income_class]);
    const CarClass& cc = config.car_classes[h.car_class];
    h.n_cars = cc.counts[rng.index(cc.counts.size())];

    h.required_area = sc.required_area_m2 *
                      rng.uniform(1.0 - config.required_area_spread, 1.0 + config.required_area_spread);
    h.rent_band.min_frac = rng.uniform(config.rent_min_frac[0], config.rent_min_frac[1]);
    h.rent_band.max_frac = rng.uniform(config.rent_max_frac[0], config.rent_max_frac[1]);

    h.prefs = draw_preferences(h, survey, config, rng);

    for (int e = 0; e < h.n_employed; ++e) {
      WorkerAgent w;
      w.id = static_cast<AgentId>(pop.workers.size() + 1);
      w.household_id = h.id;
      w.household_index = i;
      w.professional_category = h.professional_categories[static_cast<std::size_t>(e)];
      w.gender = rng.bernoulli(config.female_worker_probability) ? Gender::female : Gender::male;
      w.mode_prefs = draw_commute_preferences(h, survey, config, rng);
      h.workers.push_back(pop.workers.size());
      pop.workers.push_back(std::move(w));
    }
    pop.households.push_back(std::move(h));
  }
  return pop;
}

void assign_workplaces(std::vector<WorkerAgent>& workers, const CityModel& city,
                       std::uint64_t seed) {
  std::map<std::string, std::vector<double>> weights;
  for (WorkerAgent& w : workers) {
    auto it = weights.find(w.professional_category);
    if (it == weights.end()) {
      std::vector<double> rates;
      double total = 0.0;
      for (const Zone& z : city.zones()) {
        auto r = z.employment_rate.find(w.professional_category);
        rates.push_back(r == z.employment_rate.end() ? 0.0 : r->second);
        total += rates.back();
      }
      if (!(total > 0.0)) {
        throw InputError("no zone employs professional category '" + w.professional_category + "'");
      }
      it = weights.emplace(w.professional_category, std::move(rates)).first;
    }
    Rng rng(derive_seed(seed, Stream::workplace, static_cast<std::uint64_t>(w.id)));
    w.workplace_zone = city.zones()[rng.categorical(it->second)].id;
  }
}

Population synthesize_population(const PopulationConfig& config, const SurveySummary& survey,
                                 const CityModel& city, std::size_t n, std::uint64_t seed) {
  Population pop = synthesize_households(config, survey, city, n, seed);
  assign_workplaces(pop.workers, city, seed);
  for (HouseholdAgent& h : pop.households) {
    h.workplace_zones.clear();
    for (std::size_t w : h.workers) h.workplace_zones.push_back(pop.workers[w].workplace_zone);
  }
  return pop;
}

}  // namespace modalshift
