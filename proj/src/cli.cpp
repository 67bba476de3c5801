#include "modalshift/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "modalshift/pipeline.hpp"
#include "modalshift/synthetic_city.hpp"

namespace modalshift {

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;
};

RunConfig resolve_config(const Options& o) {
  if (o.config.empty()) throw InputError("--config is required (or set MODALSHIFT_CONFIG)");
  RunConfig c = load_run_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = std::max(1U, *o.workers);
  if (!o.out.empty()) c.output_dir = o.out;
  c.validate();
  return c;
}

std::string households_csv(const Population& pop) {
  std::ostringstream out;
  out << "household_id,size,monthly_income,size_class,income_class,car_class,n_cars,n_employed,"
         "has_child,former_zone,required_area_m2\n";
  for (const HouseholdAgent& h : pop.households) {
    out << h.id << ',' << h.size << ',' << format_fixed(h.monthly_income, 4) << ',' << h.size_class << ','
        << h.income_class << ',' << h.car_class << ',' << h.n_cars << ',' << h.n_employed << ','
        << (h.has_child ? 1 : 0) << ',' << h.former_zone << ',' << format_fixed(h.required_area, 3) << '\n';
  }
  return out.str();
}

std::string workers_csv(const Population& pop) {
  std::ostringstream out;
  out << "worker_id,household_id,gender,professional_category,workplace_zone\n";
  for (const WorkerAgent& w : pop.workers) {
    out << w.id << ',' << w.household_id << ',' << (w.gender == Gender::female ? "female" : "male") << ','
        << w.professional_category << ',' << w.workplace_zone << '\n';
  }
  return out.str();
}

std::string marginal_summary(const Population& pop) {
  std::ostringstream out;
  out << "attribute,category,households,percent\n";
  const double n = static_cast<double>(pop.households.size());
  auto emit = [&](const char* attr, const std::vector<std::string>& labels, auto classof) {
    std::vector<std::size_t> count(labels.size());
    for (const HouseholdAgent& h : pop.households) ++count[classof(h)];
    for (std::size_t i = 0; i < labels.size(); ++i) {
      out << attr << ',' << labels[i] << ',' << count[i] << ','
          << format_fixed(n > 0 ? 100.0 * static_cast<double>(count[i]) / n : 0.0, 2) << '\n';
    }
  };
  emit("household_size", pop.size_labels, [](const HouseholdAgent& h) { return h.size_class; });
  emit("income", pop.income_labels, [](const HouseholdAgent& h) { return h.income_class; });
  emit("cars", pop.car_labels, [](const HouseholdAgent& h) { return h.car_class; });
  return out.str();
}

std::string unhoused_csv(const Population& pop, const AllocationResult& a) {
  std::ostringstream out;
  out << "household_id,size,monthly_income,former_zone\n";
  std::map<AgentId, const HouseholdAgent*> by_id;
  for (const HouseholdAgent& h : pop.households) by_id[h.id] = &h;
  for (AgentId id : a.unhoused) {
    const HouseholdAgent& h = *by_id.at(id);
    out << h.id << ',' << h.size << ',' << format_fixed(h.monthly_income, 4) << ',' << h.former_zone << '\n';
  }
  return out.str();
}

std::string contests_csv(const AllocationResult& a) {
  std::ostringstream out;
  out << "period,round,zone_id,capacity,contenders,winners\n";
  auto ids = [](const std::vector<AgentId>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  for (const Contest& c : a.contests) {
    out << c.period + 1 << ',' << c.round << ',' << c.zone << ',' << c.capacity << ',' << ids(c.contenders)
        << ',' << ids(c.winners) << '\n';
  }
  return out.str();
}

std::string alternatives_csv(const RunOutputs& r) {
  std::ostringstream out;
  out << "household_id,rank,zone_id,objectives\n";
  for (const AlternativeSet& set : r.alternatives) {
    for (std::size_t k = 0; k < set.alternatives.size(); ++k) {
      const Alternative& a = set.alternatives[k];
      out << set.agent << ',' << k + 1 << ',' << a.zone << ',';
      for (std::size_t i = 0; i < a.objectives.values.size(); ++i) {
        const ObjectiveEntry& e = a.objectives.values[i];
        out << (i ? ";" : "") << to_string(e.id) << '=' << format_fixed(e.value, 6);
      }
      out << '\n';
    }
  }
  return out.str();
}

struct Baseline {
  RunConfig config;
  RunInputs inputs;
  Population population;
  PipelineParams params;
};

Baseline prepare(const Options& o) {
  Baseline b{resolve_config(o), {}, {}, {}};
  b.inputs = load_inputs(b.config);
  b.population = synthesize_population(b.inputs.population, b.inputs.survey, b.inputs.city,
                                       b.config.n_households, b.config.seed);
  b.params = pipeline_params(b.config, b.inputs);
  return b;
}

void write_run_files(const std::filesystem::path& dir, const Population& pop, const CityModel& city,
                     const RunOutputs& r, RunManifest& m) {
  const CategoryLabels labels = labels_of(pop);
  write_output(dir, "mode_shares.csv", mode_share_csv(mode_share_table(r.outcomes, labels)), m);
  write_output(dir, "housing.csv", housing_csv(city, r.allocation.housed_per_zone), m);
  write_output(dir, "unhoused.csv", unhoused_csv(pop, r.allocation), m);
  write_output(dir, "decisions.csv", outcomes_csv(r.outcomes, labels), m);
  write_output(dir, "contests.csv", contests_csv(r.allocation), m);
  write_output(dir, "alternatives.csv", alternatives_csv(r), m);
}

void finish_manifest(const std::filesystem::path& dir, RunManifest& m) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  if (!f) throw RuntimeError("cannot write " + (dir / "manifest.json").string());
  f << serialize_manifest(m);
}

int cmd_synth(const Options& o, std::ostream& out) {
  const RunConfig c = resolve_config(o);
  const RunInputs in = load_inputs(c);
  const Population pop = synthesize_population(in.population, in.survey, in.city, c.n_households, c.seed);
  RunManifest m;
  m.config_hash = config_hash(c);
  m.command = "synth";
  const std::filesystem::path dir = c.output_dir / "synth";
  write_output(dir, "households.csv", households_csv(pop), m);
  write_output(dir, "workers.csv", workers_csv(pop), m);
  const std::string summary = marginal_summary(pop);
  write_output(dir, "marginals.csv", summary, m);
  finish_manifest(dir, m);
  out << summary;
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out) {
  const Baseline b = prepare(o);
  const RunOutputs r = run_pipeline(b.inputs.city, b.population, b.params);
  RunManifest m;
  m.config_hash = config_hash(b.config);
  m.command = "run";
  m.timings = r.timings;
  write_run_files(b.config.output_dir, b.population, b.inputs.city, r, m);
  finish_manifest(b.config.output_dir, m);
  out << mode_share_csv(mode_share_table(r.outcomes, labels_of(b.population)));
  out << "households: " << b.population.households.size() << ", housed: " << r.allocation.housed.size()
      << ", unhoused: " << r.allocation.unhoused.size() << ", workers: " << b.population.workers.size() << '\n';
  return kExitOk;
}

int cmd_scenario(const Options& o, const std::string& scenario_path, std::ostream& out) {
  const Baseline b = prepare(o);
  const std::filesystem::path manifest_path = b.config.output_dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw InputError("baseline missing: no " + manifest_path.string() + "; run the 'run' command first");
  }
  const RunManifest baseline_manifest = parse_manifest(detail::read_text(manifest_path));
  if (baseline_manifest.config_hash != config_hash(b.config)) {
    throw InputError("baseline missing: " + manifest_path.string() + " was produced by a different config");
  }
  std::filesystem::path spec_path = scenario_path.empty() ? b.config.scenario : std::filesystem::path(scenario_path);
  if (spec_path.empty()) throw InputError("no scenario given (--scenario or config 'scenario')");
  const ScenarioSpec spec = load_scenario(spec_path);

  const RunOutputs base = run_pipeline(b.inputs.city, b.population, b.params);
  const std::string base_decisions = outcomes_csv(base.outcomes, labels_of(b.population));
  for (const ManifestFile& f : baseline_manifest.files) {
    if (f.name == "decisions.csv" && f.checksum != fnv1a_hex(base_decisions)) {
      throw RuntimeError("baseline decisions differ from " + manifest_path.string());
    }
  }
  const ScenarioResult s = run_scenario(b.inputs.city, b.population, base, spec, b.params);
  const std::string name = spec.name.empty() ? spec_path.stem().string() : spec.name;
  const std::filesystem::path dir = b.config.output_dir / ("scenario-" + name);
  RunManifest m;
  m.config_hash = config_hash(b.config);
  m.command = "scenario " + name;
  m.timings = s.outputs.timings;
  write_run_files(dir, b.population, s.city, s.outputs, m);
  write_output(dir, "shift.csv", shift_csv(s.report), m);
  write_output(dir, "zone_deltas.csv", zone_delta_csv(s.report), m);
  finish_manifest(dir, m);
  out << shift_csv(s.report);
  return kExitOk;
}

int cmd_diff(const std::string& baseline, const std::string& scenario, const std::string& city_path,
             const std::string& out_dir, std::ostream& out) {
  CategoryLabels base_labels;
  CategoryLabels scen_labels;
  const auto base = parse_outcomes_csv(detail::read_text(baseline), base_labels);
  const auto scen = parse_outcomes_csv(detail::read_text(scenario), scen_labels);
  const CityModel city = load_city(city_path);
  const ShiftReport report = diff_report(base, scen, base_labels, city);
  if (!out_dir.empty()) {
    RunManifest m;
    m.command = "diff";
    write_output(out_dir, "shift.csv", shift_csv(report), m);
    write_output(out_dir, "zone_deltas.csv", zone_delta_csv(report), m);
    finish_manifest(out_dir, m);
  }
  out << shift_csv(report);
  return kExitOk;
}

int cmd_gen_city(const SyntheticCityParams& p, std::uint64_t seed, const std::string& path, std::ostream& out) {
  const CityModel city = generate_synthetic_city(p, seed);
  save_city(city, path);
  out << serialize_manifest(city_manifest(city));
  return kExitOk;
}

int cmd_validate(const Options& o, const std::vector<std::string>& cities,
                 const std::vector<std::string>& scenarios, std::ostream& out) {
  if (o.config.empty() && cities.empty() && scenarios.empty()) {
    throw InputError("nothing to validate: give --config, --city or --scenario");
  }
  if (!o.config.empty()) {
    const RunConfig c = resolve_config(o);
    const RunInputs in = load_inputs(c);
    in.city.validate();
    in.population.validate();
    if (!c.scenario.empty()) check_bounds(in.city, load_scenario(c.scenario));
    out << "ok: config " << o.config << " (hash " << config_hash(c) << ")\n";
  }
  for (const auto& p : cities) {
    load_city(p).validate();
    out << "ok: city " << p << '\n';
  }
  for (const auto& p : scenarios) {
    load_scenario(p);
    out << "ok: scenario " << p << '\n';
  }
  return kExitOk;
}

}  // namespace


int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Household residential and commuting mode microsimulation", "modalshift"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration file")->envname("MODALSHIFT_CONFIG");
    sub->add_option("--seed", o.seed, "Override the master seed")->envname("MODALSHIFT_SEED");
    sub->add_option("--workers", o.workers, "Worker threads")->envname("MODALSHIFT_WORKERS");
    sub->add_option("--out", o.out, "Output directory")->envname("MODALSHIFT_OUT");
  };

  CLI::App* synth = app.add_subcommand("synth", "Synthesise the household population");
  common(synth);
  CLI::App* run = app.add_subcommand("run", "Baseline run: residences, competition, modes");
  common(run);
  CLI::App* scenario = app.add_subcommand("scenario", "Apply a development plan and report the shift");
  common(scenario);
  std::string scenario_path;
  scenario->add_option("--scenario,scenario", scenario_path, "Scenario file");

  CLI::App* diff = app.add_subcommand("diff", "Shift report from two decisions files");
  std::string diff_base, diff_scen, diff_city, diff_out;
  diff->add_option("--baseline", diff_base, "Baseline decisions.csv")->required();
  diff->add_option("--scenario", diff_scen, "Scenario decisions.csv")->required();
  diff->add_option("--city", diff_city, "City file for the per-zone map")->required();
  diff->add_option("--out", diff_out, "Output directory")->envname("MODALSHIFT_OUT");

  CLI::App* gen = app.add_subcommand("gen-city", "Write a synthetic grid city");
  SyntheticCityParams gp;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "city.json";
  bool no_subway = false, no_brt = false, no_highway = false;
  gen->add_option("--out", gen_out, "City file to write")->envname("MODALSHIFT_OUT");
  gen->add_option("--seed", gen_seed, "Generator seed")->envname("MODALSHIFT_SEED");
  gen->add_option("--width", gp.grid_width, "Zones along x");
  gen->add_option("--height", gp.grid_height, "Zones along y");
  gen->add_option("--zone-size", gp.zone_size_km, "Zone edge, km");
  gen->add_option("--facilities-per-zone", gp.facilities_per_zone, "Facilities per zone and kind");
  gen->add_option("--bus-spacing", gp.bus_line_spacing, "Bus line every n-th row and column");
  gen->add_option("--name", gp.name, "City name");
  gen->add_flag("--no-subway", no_subway);
  gen->add_flag("--no-brt", no_brt);
  gen->add_flag("--no-highway", no_highway);

  CLI::App* validate = app.add_subcommand("validate", "Check a config and its inputs, or single files");
  common(validate);
  std::vector<std::string> validate_cities, validate_scenarios;
  validate->add_option("--city", validate_cities, "City file");
  validate->add_option("--scenario", validate_scenarios, "Scenario file");

  std::vector<std::string> argv_rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "modalshift: error: usage: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*synth) return cmd_synth(o, out);
    if (*run) return cmd_run(o, out);
    if (*scenario) return cmd_scenario(o, scenario_path, out);
    if (*diff) return cmd_diff(diff_base, diff_scen, diff_city, diff_out, out);
    if (*gen) {
      gp.subway = !no_subway;
      gp.brt = !no_brt;
      gp.highway = !no_highway;
      return cmd_gen_city(gp, gen_seed, gen_out, out);
    }
    if (*validate) return cmd_validate(o, validate_cities, validate_scenarios, out);
  } catch (const InputError& e) {
    err << "modalshift: error: input: " << e.what() << '\n';
    return kExitInput;
  } catch (const RuntimeError& e) {
    err << "modalshift: error: runtime: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "modalshift: error: runtime: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInput;
}

}  // namespace modalshift
