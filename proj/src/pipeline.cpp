#include "modalshift/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include "json_util.hpp"
#include "modalshift/parallel.hpp"

namespace modalshift {

using detail::json;

void RunConfig::validate() const {
  if (n_households == 0) throw InputError("run config: n_households must be positive");
  ga.validate();
  competition.validate();
  auto exists = [](const std::filesystem::path& p, const char* what, bool required) {
    if (p.empty()) {
      if (required) throw InputError(std::string("run config: missing path '") + what + "'");
      return;
    }
    if (!std::filesystem::exists(p)) {
      throw InputError(std::string("run config: ") + what + " file not found: " + p.string());
    }
  };
  exists(city, "city", true);
  exists(survey, "survey", true);
  exists(population, "population", false);
  exists(tariffs, "tariffs", true);
  exists(expert_matrix, "expert_matrix", true);
  exists(scenario, "scenario", false);
}

namespace {

template <std::size_t N>
std::array<double, N> array_field(const json& obj, const char* key, const std::array<double, N>& fallback,
                                  const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto v = detail::get<std::vector<double>>(obj, key, where);
  if (v.size() != N) {
    throw InputError("schema violation: " + where + "." + key + " must hold " + std::to_string(N) + " values");
  }
  std::array<double, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  const json doc = detail::parse_json(json_text, "run config");
  const std::string w = "run config";
  RunConfig c;
  auto path = [&](const char* key) -> std::filesystem::path {
    const std::string s = detail::get_or<std::string>(doc, key, "", w);
    if (s.empty()) return {};
    const std::filesystem::path p(s);
    return p.is_absolute() ? p : base_dir / p;
  };
  c.seed = detail::get_or<std::uint64_t>(doc, "seed", c.seed, w);
  c.n_households = detail::get_or<std::size_t>(doc, "n_households", c.n_households, w);
  c.city = path("city");
  c.survey = path("survey");
  c.population = path("population");
  c.tariffs = path("tariffs");
  c.expert_matrix = path("expert_matrix");
  c.scenario = path("scenario");
  if (doc.contains("output_dir")) c.output_dir = path("output_dir");
  else c.output_dir = base_dir / "out";
  c.workers = detail::get_or<unsigned>(doc, "workers", c.workers, w);
  if (doc.contains("ga")) {
    const json& g = doc["ga"];
    const std::string gw = w + ".ga";
    c.ga.population_size = detail::get_or<std::size_t>(g, "population_size", c.ga.population_size, gw);
    c.ga.generations = detail::get_or<std::size_t>(g, "generations", c.ga.generations, gw);
    c.ga.mutation_rate = detail::get_or<double>(g, "mutation_rate", c.ga.mutation_rate, gw);
    c.ga.crossover_rate = detail::get_or<double>(g, "crossover_rate", c.ga.crossover_rate, gw);
    c.ga.tournament_size = detail::get_or<std::size_t>(g, "tournament_size", c.ga.tournament_size, gw);
    c.ga.max_alternatives = detail::get_or<std::size_t>(g, "max_alternatives", c.ga.max_alternatives, gw);
  }
  if (doc.contains("competition")) {
    const json& k = doc["competition"];
    const std::string kw = w + ".competition";
    c.competition.monthly_weights = array_field(k, "monthly_weights", c.competition.monthly_weights, kw);
    c.competition.equilibrium = array_field(k, "equilibrium", c.competition.equilibrium, kw);
    c.competition.carry_over_capacity =
        detail::get_or<bool>(k, "carry_over_capacity", c.competition.carry_over_capacity, kw);
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(detail::read_text(path), path.parent_path());
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["n_households"] = c.n_households;
  auto content = [](const std::filesystem::path& p) {
    return p.empty() ? std::string("default") : fnv1a_hex(detail::read_text(p));
  };
  j["city"] = content(c.city);
  j["survey"] = content(c.survey);
  j["population"] = content(c.population);
  j["tariffs"] = content(c.tariffs);
  j["expert_matrix"] = content(c.expert_matrix);
  j["ga"] = {c.ga.population_size, c.ga.generations, c.ga.mutation_rate, c.ga.crossover_rate,
             c.ga.tournament_size, c.ga.max_alternatives};
  j["competition"] = {c.competition.monthly_weights, c.competition.equilibrium,
                      c.competition.carry_over_capacity};
  return fnv1a_hex(j.dump());
}

RunInputs load_inputs(const RunConfig& config) {
  config.validate();
  RunInputs in;
  in.city = load_city(config.city);
  in.survey = load_survey(config.survey);
  in.population = config.population.empty() ? default_population_config()
                                            : load_population_config(config.population);
  in.tariffs = load_tariffs(config.tariffs);
  in.matrix = load_expert_matrix(config.expert_matrix);
  return in;
}

PipelineParams pipeline_params(const RunConfig& config, const RunInputs& inputs) {
  PipelineParams p;
  p.ga = config.ga;
  p.competition = config.competition;
  p.tariffs = inputs.tariffs;
  p.matrix = inputs.matrix;
  p.seed = config.seed;
  p.workers = config.workers;
  return p;
}

namespace {

class Stopwatch {
public:
  explicit Stopwatch(std::vector<StageTiming>& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  void lap(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_.push_back({stage, std::chrono::duration<double>(now - start_).count()});
    start_ = now;
  }

private:
  std::vector<StageTiming>& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunOutputs run_pipeline(const CityModel& city, const Population& population, const PipelineParams& params) {
  params.ga.validate();
  params.competition.validate();
  RunOutputs out;
  Stopwatch clock(out.timings);
  const auto& households = population.households;

  const ChoiceSpace space(city, params.workers);
  clock.lap("choice_space");

  out.alternatives.resize(households.size());
  try {
    parallel_for(households.size(), params.workers, [&](std::size_t i) {
      GAParams ga = params.ga;
      ga.seed = derive_seed(params.seed, Stream::genetic, static_cast<std::uint64_t>(households[i].id));
      out.alternatives[i] = select_alternatives(space, households[i], ga);
    });
  } catch (const RuntimeError& e) {
    throw RuntimeError(std::string("residential choice: ") + e.what());
  }
  clock.lap("residential_choice");

  out.plan = make_period_plan(households, params.competition, params.seed);
  const CapacityTable capacities(city, households.size(), params.competition.equilibrium);
  out.allocation = allocate(city, households, out.alternatives, out.plan, capacities,
                            params.competition.carry_over_capacity, params.seed);
  clock.lap("competition");

  const LosTable los(city, params.tariffs, params.workers);
  clock.lap("level_of_service");

  const auto& workers = population.workers;
  out.decisions.resize(workers.size());
  out.outcomes.resize(workers.size());
  std::vector<std::optional<ZoneId>> homes(households.size());
  for (std::size_t h = 0; h < households.size(); ++h) homes[h] = out.allocation.home_of(households[h].id);
  try {
    parallel_for(workers.size(), params.workers, [&](std::size_t i) {
      const WorkerAgent& w = workers[i];
      const HouseholdAgent& h = households[w.household_index];
      WorkerOutcome& o = out.outcomes[i];
      o.worker = w.id;
      o.household = h.id;
      o.gender = w.gender;
      o.size_class = h.size_class;
      o.income_class = h.income_class;
      o.car_class = h.car_class;
      o.work = w.workplace_zone;
      o.home = homes[w.household_index];
      if (!o.home) return;
      o.distance_km = zone_distance(city, *o.home, w.workplace_zone);
      const std::size_t oi = city.zone_index(*o.home);
      const std::size_t di = city.zone_index(w.workplace_zone);
      ModeLos mode_los{};
      for (Mode m : kAllModes) mode_los[static_cast<std::size_t>(m)] = los.at(m, oi, di);
      out.decisions[i] = choose_mode(w, h, mode_los, params.matrix, params.tariffs.walk_cutoff_km);
      o.mode = out.decisions[i]->chosen;
    });
  } catch (const RuntimeError& e) {
    throw RuntimeError(std::string("mode choice: ") + e.what());
  }
  clock.lap("mode_choice");
  return out;
}

ScenarioResult run_scenario(const CityModel& baseline_city, const Population& population,
                            const RunOutputs& baseline, const ScenarioSpec& spec,
                            const PipelineParams& params) {
  ScenarioResult r;
  r.city = scenario_city(baseline_city, spec, params.tariffs.access);
  r.outputs = run_pipeline(r.city, population, params);
  r.report = diff_report(baseline.outcomes, r.outputs.outcomes, labels_of(population), r.city);
  return r;
}

std::string serialize_manifest(const RunManifest& m) {
  json j;
  j["config_hash"] = m.config_hash;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["timings"] = json::array();
  for (const StageTiming& t : m.timings) j["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  j["files"] = json::array();
  for (const ManifestFile& f : m.files) {
    j["files"].push_back({{"name", f.name}, {"checksum", f.checksum}, {"bytes", f.bytes}});
  }
  return j.dump(1) + "\n";
}

RunManifest parse_manifest(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "manifest");
  RunManifest m;
  m.config_hash = detail::get<std::string>(doc, "config_hash", "manifest");
  m.tool_version = detail::get_or<std::string>(doc, "tool_version", "", "manifest");
  m.command = detail::get_or<std::string>(doc, "command", "", "manifest");
  if (doc.contains("timings")) {
    for (const json& t : doc["timings"]) {
      m.timings.push_back({detail::get<std::string>(t, "stage", "manifest timings"),
                           detail::get<double>(t, "seconds", "manifest timings")});
    }
  }
  if (doc.contains("files")) {
    for (const json& f : doc["files"]) {
      m.files.push_back({detail::get<std::string>(f, "name", "manifest files"),
                         detail::get<std::string>(f, "checksum", "manifest files"),
                         detail::get_or<std::size_t>(f, "bytes", 0, "manifest files")});
    }
  }
  return m;
}

void write_output(const std::filesystem::path& dir, const std::string& name, const std::string& content,
                  RunManifest& manifest) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + p.string());
  out << content;
  if (!out) throw RuntimeError("write failed: " + p.string());
  manifest.files.push_back({name, fnv1a_hex(content), content.size()});
}

}  // namespace modalshift
